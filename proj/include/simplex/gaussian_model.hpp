#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "simplex/errors.hpp"

namespace simplex {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Output activation applied element-wise to logits before normalisation.
/// Exp followed by normalisation is the softmax.
enum class ActivationKind { Exp, NormCdf, Sigmoid };

inline std::string_view to_string(ActivationKind act) {
  switch (act) {
    case ActivationKind::Exp:
      return "exp";
    case ActivationKind::NormCdf:
      return "normcdf";
    case ActivationKind::Sigmoid:
      return "sigmoid";
  }
  return "unknown";
}

/// Gaussian over logit space with diagonal variance. The optional full
/// covariance is only read by the Monte-Carlo sampler; closed-form paths use
/// mean and var_diag.
template <typename Scalar>
struct LogitGaussian {
  Vector<Scalar> mean;
  Vector<Scalar> var_diag;
  std::optional<Matrix<Scalar>> cov_full;

  Eigen::Index classes() const { return mean.size(); }
};

using LogitGaussiand = LogitGaussian<double>;

inline constexpr double kCovarianceTolerance = 1e-9;
inline constexpr double kPsdJitter = 1e-10;

/// Checks mean / var_diag only. Enough for every closed-form operation.
template <typename Scalar>
void validate_diagonal(const LogitGaussian<Scalar>& g) {
  using Kind = ValidationError::Kind;
  const auto c = g.mean.size();
  if (c < 2) {
    throw ValidationError(Kind::TooFewClasses, "logit Gaussian needs C >= 2 classes, got " + std::to_string(c));
  }
  if (g.var_diag.size() != c) {
    throw ValidationError(Kind::DimensionMismatch, "var_diag has length " + std::to_string(g.var_diag.size()) +
                                                       ", mean has length " + std::to_string(c));
  }
  if (!g.mean.allFinite() || !g.var_diag.allFinite()) {
    throw ValidationError(Kind::NonFinite, "mean and var_diag must be finite");
  }
  for (Eigen::Index i = 0; i < c; ++i) {
    if (g.var_diag(i) < Scalar(0)) {
      throw ValidationError(Kind::NegativeVariance, "var_diag[" + std::to_string(i) + "] is negative");
    }
  }
}

/// Full validation: diagonal checks plus symmetry, diagonal agreement and
/// positive semidefiniteness (Cholesky of cov + 1e-10 I) of cov_full.
template <typename Scalar>
void validate(const LogitGaussian<Scalar>& g) {
  using Kind = ValidationError::Kind;
  validate_diagonal(g);
  if (!g.cov_full) {
    return;
  }
  const auto& cov = *g.cov_full;
  const auto c = g.mean.size();
  if (cov.rows() != c || cov.cols() != c) {
    throw ValidationError(Kind::DimensionMismatch, "cov_full must be " + std::to_string(c) + "x" + std::to_string(c));
  }
  if (!cov.allFinite()) {
    throw ValidationError(Kind::NonFinite, "cov_full must be finite");
  }
  const Scalar tol(kCovarianceTolerance);
  if (((cov - cov.transpose()).cwiseAbs().array() > tol).any()) {
    throw ValidationError(Kind::AsymmetricCovariance, "cov_full is not symmetric");
  }
  if (((cov.diagonal() - g.var_diag).cwiseAbs().array() > tol).any()) {
    throw ValidationError(Kind::CovarianceDiagonalMismatch, "cov_full diagonal differs from var_diag");
  }
  const Matrix<Scalar> jittered = cov + Scalar(kPsdJitter) * Matrix<Scalar>::Identity(c, c);
  Eigen::LLT<Matrix<Scalar>> llt(jittered);
  if (llt.info() != Eigen::Success) {
    throw ValidationError(Kind::NotPositiveSemidefinite, "cov_full is not positive semidefinite");
  }
}

/// Probability vector on the simplex. Construction validates entries in [0, 1]
/// and a sum of 1 within 1e-9.
template <typename Scalar>
class SimplexVector {
 public:
  static constexpr double kSumTolerance = 1e-9;

  SimplexVector() = default;

  explicit SimplexVector(Vector<Scalar> probs) : probs_(std::move(probs)) {
    using Kind = ValidationError::Kind;
    if (probs_.size() == 0) {
      throw ValidationError(Kind::NotASimplex, "empty probability vector");
    }
    if (!probs_.allFinite() || (probs_.array() < Scalar(0)).any() || (probs_.array() > Scalar(1)).any()) {
      throw ValidationError(Kind::NotASimplex, "probability entries must lie in [0, 1]");
    }
    using std::abs;
    if (abs(probs_.sum() - Scalar(1)) > Scalar(kSumTolerance)) {
      throw ValidationError(Kind::NotASimplex, "probabilities sum to " + std::to_string(double(probs_.sum())));
    }
  }

  /// Divides a nonnegative vector by its sum.
  template <typename Derived>
  static SimplexVector normalise(const Eigen::MatrixBase<Derived>& weights) {
    const Scalar total = weights.sum();
    if (!(total > Scalar(0)) || !std::isfinite(double(total))) {
      throw NumericalError("cannot normalise: weights sum to " + std::to_string(double(total)));
    }
    Vector<Scalar> p = weights / total;
    // Clip rounding excursions so entries stay inside [0, 1].
    p = p.cwiseMax(Scalar(0)).cwiseMin(Scalar(1));
    return SimplexVector(std::move(p));
  }

  const Vector<Scalar>& probs() const { return probs_; }
  Eigen::Index size() const { return probs_.size(); }
  Scalar operator()(Eigen::Index i) const { return probs_(i); }

 private:
  Vector<Scalar> probs_;
};

using SimplexVectord = SimplexVector<double>;

}  // namespace simplex
