#pragma once

#include <stdexcept>
#include <string>

namespace sopslab {

enum class ErrorKind {
  Domain,         // argument outside the mathematical domain of an operation
  Config,         // inconsistent integrator or experiment configuration
  Precondition,   // a rule's hypotheses are not met
  Numerical,      // NaN, failed eigensolve, degenerate orbit
  NonConvergence, // iterative search exhausted its budget
  Io,             // file could not be read or written
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by find_sops when the periodicity defect never drops below tol.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double best_residual)
      : Error(ErrorKind::NonConvergence, what), best_residual_(best_residual) {}

  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace sopslab
