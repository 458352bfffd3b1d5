#ifndef SIGOPT_ERROR_HPP
#define SIGOPT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace sigopt {

enum class ErrorCode {
  InvalidMesh,
  TangledMesh,
  FixedBoundaryViolation,
  NoConvergence,
  TooManyConstraints,
  NoFeasibleKkt,
  StepCollapse,
  DimensionMismatch,
  ParseError,
  UnknownLabel,
  InvalidArgument,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sigopt

#endif
