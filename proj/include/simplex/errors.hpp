#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace simplex {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function (e.g. digamma at x <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed input: shapes, negative variances, broken covariance, bad labels.
class ValidationError : public Error {
 public:
  enum class Kind {
    TooFewClasses,
    DimensionMismatch,
    NegativeVariance,
    NonFinite,
    AsymmetricCovariance,
    CovarianceDiagonalMismatch,
    NotPositiveSemidefinite,
    NotASimplex,
    InvalidLabel,
    InvalidArgument,
  };

  ValidationError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// A formula was evaluated on valid input but produced an unusable value
/// (overflow, underflow to a degenerate vector, non-positive parameter).
class NumericalError : public Error {
 public:
  static constexpr std::ptrdiff_t kNoClass = -1;

  explicit NumericalError(const std::string& what, std::ptrdiff_t class_index = kNoClass)
      : Error(what), class_index_(class_index) {}

  /// Offending class, or kNoClass when the failure is not tied to one class.
  std::ptrdiff_t class_index() const noexcept { return class_index_; }

 private:
  std::ptrdiff_t class_index_;
};

class OverflowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Dirichlet/Beta moment matching has no valid solution for the supplied moments.
class MatchingError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace simplex
