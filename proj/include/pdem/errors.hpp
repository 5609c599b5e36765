#pragma once

#include <stdexcept>
#include <string>

namespace pdem {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive integration exhausted its evaluation budget.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// A Gamma or Pochhammer argument hit a pole.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Closed-form Wigner sum left an imaginary residue above tolerance.
class RealityViolation : public Error {
 public:
  using Error::Error;
};

/// Finite-difference residual did not shrink like h^2 under refinement.
class LatticeTooCoarse : public Error {
 public:
  using Error::Error;
};

/// Phase-space window cut off non-negligible Wigner mass.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Alternating sum cancelled more digits than the working precision holds.
class PrecisionInsufficient : public Error {
 public:
  using Error::Error;
};

}  // namespace pdem
