#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "motbound/kernels.hpp"
#include "motbound/payoff.hpp"

using namespace motbound;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double omp) {
  std::printf("%-16s serial %9.3f ms   omp %9.3f ms   x%.2f\n", name, serial, omp, serial / omp);
}

}  // namespace

int main(int argc, char** argv) {
  const int m = argc > 1 ? std::atoi(argv[1]) : 401;
  std::printf("threads %d, grid %d x %d\n", kernels::max_threads(), m, m);
  std::vector<double> g(m);
  for (int i = 0; i < m; ++i) g[i] = -2.0 + 4.0 * i / (m - 1);
  const std::vector<std::vector<double>> grids{g, g};
  const Payoff straddle = Payoff::forward_start_straddle();

  volatile double sink = 0.0;
  row("tabulate", best_of(5, [&] { sink = kernels::serial::tabulate(straddle, grids)[0]; }),
      best_of(5, [&] { sink = kernels::omp::tabulate(straddle, grids)[0]; }));

  auto f = [&](std::span<const double> s) { return straddle.evaluate(s) - 0.3 * s[0] * s[0]; };
  row("grid_max", best_of(5, [&] { sink = kernels::serial::grid_max(grids, f).value; }),
      best_of(5, [&] { sink = kernels::omp::grid_max(grids, f).value; }));

  // marginal and martingale rows of a two-date transport LP
  kernels::CscMatrix a;
  a.rows = 3 * static_cast<std::size_t>(m);
  a.cols = static_cast<std::size_t>(m) * m;
  a.start.push_back(0);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      a.index.push_back(i);
      a.value.push_back(1.0);
      a.index.push_back(m + j);
      a.value.push_back(1.0);
      a.index.push_back(2 * m + i);
      a.value.push_back(g[j] - g[i]);
      a.start.push_back(a.index.size());
    }
  }
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> cost(a.cols), y(a.rows), out(a.cols);
  for (auto& c : cost) c = unit(rng);
  for (auto& v : y) v = unit(rng);
  row("reduced_costs", best_of(20, [&] { kernels::serial::reduced_costs(a, cost, y, out); }),
      best_of(20, [&] { kernels::omp::reduced_costs(a, cost, y, out); }));

  std::vector<double> ys(static_cast<std::size_t>(m) * m);
  for (auto& v : ys) v = unit(rng);
  row("envelopes_at", best_of(5, [&] { sink = kernels::serial::envelopes_at(g, ys, g)[0]; }),
      best_of(5, [&] { sink = kernels::omp::envelopes_at(g, ys, g)[0]; }));
  (void)sink;
  return 0;
}
