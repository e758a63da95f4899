#pragma once

#include <stdexcept>
#include <string>

namespace moep {

enum class ErrorCode {
  InvalidArgument,
  Parse,
  Infeasible,
  NoIdealPoint,
  IterationLimit,
  NodeLimitExceeded,
  NumericalError,
  NumericalDegeneracy,
  CutIsRedundant,
  UnsupportedProblem,
  CapsExceeded,
  Io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace moep
