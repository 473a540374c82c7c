#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace motbound {

enum class ErrorKind {
  invalid_measure,
  infeasible_curve,
  bad_spec,
  dimension_mismatch,
  off_grid,
  not_admissible,
  infeasible,
  unbounded,
  iteration_limit,
  scale_exceeded,
  degenerate_dual,
  grid_coverage,
  invalid_input,  // malformed files, flags or configuration
};

std::string_view to_string(ErrorKind kind);

// Domain errors carry a kind so callers (the CLI in particular) can map
// them to exit codes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// True for errors that come from the input data being mathematically
// unusable (as opposed to unreadable).
bool is_domain_error(ErrorKind kind);

}  // namespace motbound
