#pragma once

#include <stdexcept>
#include <string>

namespace qrev {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the validity region of the requested formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A closed form hits a pole (e.g. mu1^2 = 1, 4(l+beta)^2 = 1).
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Iterative refinement did not settle within its cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Norm of a propagated state left its tolerance band.
class NormDriftError : public Error {
 public:
  using Error::Error;
};

/// Population reached the edge of a truncated basis.
class TruncationError : public Error {
 public:
  using Error::Error;
};

}  // namespace qrev
