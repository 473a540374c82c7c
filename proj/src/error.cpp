#include "motbound/error.hpp"

namespace motbound {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_measure: return "InvalidMeasure";
    case ErrorKind::infeasible_curve: return "InfeasibleCurve";
    case ErrorKind::bad_spec: return "BadSpec";
    case ErrorKind::dimension_mismatch: return "DimensionMismatch";
    case ErrorKind::off_grid: return "OffGrid";
    case ErrorKind::not_admissible: return "NotAdmissible";
    case ErrorKind::infeasible: return "Infeasible";
    case ErrorKind::unbounded: return "Unbounded";
    case ErrorKind::iteration_limit: return "IterationLimit";
    case ErrorKind::scale_exceeded: return "ScaleExceeded";
    case ErrorKind::degenerate_dual: return "DegenerateDual";
    case ErrorKind::grid_coverage: return "GridCoverage";
    case ErrorKind::invalid_input: return "InvalidInput";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

bool is_domain_error(ErrorKind kind) {
  return kind != ErrorKind::invalid_input;
}

}  // namespace motbound
