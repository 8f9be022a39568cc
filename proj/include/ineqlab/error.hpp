#pragma once

#include <stdexcept>
#include <string>

namespace ineqlab {

enum class ErrorCode {
  domain,
  unbounded,
  delta2_violation,
  t_a_zero,
  metric_invalid,
  size_overflow,
  degenerate,
  solver_failure,
  config,
  not_lipschitz,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ineqlab
