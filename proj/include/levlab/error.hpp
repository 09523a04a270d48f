#pragma once

#include <stdexcept>
#include <string>

namespace levlab {

/// Argument outside an operation's precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not reach its accuracy target
/// (quadrature non-convergence, tail bound not met, contour through a zero).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Request refused because its estimated cost exceeds a hard guard.
class CostGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

}  // namespace levlab
