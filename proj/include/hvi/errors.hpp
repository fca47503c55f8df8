#pragma once

#include <stdexcept>
#include <string>

namespace hvi {

/// Argument outside the mathematical domain of an operation (e.g. negative
/// energy, non-positive physical parameter).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A bracketed root search found no sign change, or an iteration did not
/// converge. The CLI maps this to the "numeric non-convergence" exit status.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The maximum mechanism cannot reach the requested energy at this detuning
/// (the boundary expression is negative).
class NotApplicable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The traced level set left the supplied energy window.
class WindowEscape : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace hvi
