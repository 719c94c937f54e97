#pragma once

#include <stdexcept>
#include <string>

namespace hciz {

/// Invalid input: bad measure, out-of-range index, odd symplectic dimension.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Eigenvalues too close for the plain determinant formula.
class DegeneracyError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// R-transform requested outside (H_min, H_max).
class OutOfBandError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Evaluation method not available for the requested symmetry class.
class UnsupportedMethodError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Multiprecision evaluation failed its doubled-precision check.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hciz
