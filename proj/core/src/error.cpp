#include "sigopt/error.hpp"

namespace sigopt {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidMesh: return "INVALID_MESH";
    case ErrorCode::TangledMesh: return "TANGLED_MESH";
    case ErrorCode::FixedBoundaryViolation: return "FIXED_BOUNDARY_VIOLATION";
    case ErrorCode::NoConvergence: return "NO_CONVERGENCE";
    case ErrorCode::TooManyConstraints: return "TOO_MANY_CONSTRAINTS";
    case ErrorCode::NoFeasibleKkt: return "NO_FEASIBLE_KKT";
    case ErrorCode::StepCollapse: return "STEP_COLLAPSE";
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::UnknownLabel: return "UNKNOWN_LABEL";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
  }
  return "UNKNOWN";
}

}  // namespace sigopt
