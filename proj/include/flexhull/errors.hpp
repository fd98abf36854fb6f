#pragma once

#include <stdexcept>
#include <string>

namespace flexhull {

enum class ErrorCode {
  invalid_argument,
  config,
  solver,
  discrete_domain,
  beta_outside_domain,
  degree_mismatch,
  prototype_mismatch,
  io,
};

/// Base exception for the library. The C API maps `code()` onto fh_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace flexhull
