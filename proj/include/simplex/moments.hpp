#pragma once

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "simplex/errors.hpp"
#include "simplex/gaussian_model.hpp"
#include "simplex/specfun.hpp"

namespace simplex {

/// First and second moments E[Q], E[Q^2] of a scalar Gaussian pushforward Q = act(Y).
template <typename Real>
struct ScalarMoments {
  Real m1;
  Real m2;
};

/// Per-class moments of Q = act(Y), Y ~ N(mean, diag(var)).
template <typename Scalar>
struct MomentPair {
  Vector<Scalar> m1;
  Vector<Scalar> m2;
  /// Set where m2 fell below m1^2 and was floored at m1^2 + kMomentFloor.
  Eigen::Array<bool, Eigen::Dynamic, 1> clamped;

  Eigen::Index classes() const { return m1.size(); }
  bool any_clamped() const { return clamped.size() > 0 && clamped.any(); }
};

using MomentPaird = MomentPair<double>;

inline constexpr double kMomentFloor = 1e-15;

/// Q = exp(Y): E[Q] = exp(mu + var/2), E[Q^2] = exp(2 mu + 2 var).
template <typename Real>
ScalarMoments<Real> exp_moments(Real mu, Real var) {
  using std::exp;
  if (var < Real(0)) {
    throw DomainError("exp_moments: negative variance");
  }
  const Real m1 = exp(mu + Real(0.5) * var);
  const Real m2 = exp(Real(2) * mu + Real(2) * var);
  if (!std::isfinite(double(m1)) || !std::isfinite(double(m2))) {
    throw OverflowError("exp_moments: exp(2 mu + 2 var) overflows at mu=" + std::to_string(double(mu)) +
                        ", var=" + std::to_string(double(var)));
  }
  return {m1, m2};
}

/// Q = Phi(Y): E[Q] = Phi(h), E[Q^2] = Phi(h) - 2 T(h, 1/sqrt(1 + 2 var)), h = mu / sqrt(1 + var).
template <typename Real>
ScalarMoments<Real> normcdf_moments(Real mu, Real var) {
  using std::sqrt;
  if (var < Real(0)) {
    throw DomainError("normcdf_moments: negative variance");
  }
  const Real h = mu / sqrt(Real(1) + var);
  const Real m1 = norm_cdf(h);
  const Real m2 = m1 - Real(2) * owens_t(h, Real(1) / sqrt(Real(1) + Real(2) * var));
  return {m1, m2};
}

/// Q = sigmoid(Y) under the probit approximation, with the second moment
/// E[Q^2] ~ r - r (1 - r) / s, s = sqrt(1 + pi var / 8), r = sigmoid(mu / s).
template <typename Real>
ScalarMoments<Real> sigmoid_moments(Real mu, Real var) {
  using std::sqrt;
  if (var < Real(0)) {
    throw DomainError("sigmoid_moments: negative variance");
  }
  const Real s = sqrt(Real(1) + std::numbers::pi_v<Real> / Real(8) * var);
  const Real r = sigmoid(mu / s);
  return {r, r - r * (Real(1) - r) / s};
}

template <typename Real>
ScalarMoments<Real> scalar_moments(ActivationKind act, Real mu, Real var) {
  switch (act) {
    case ActivationKind::Exp:
      return exp_moments(mu, var);
    case ActivationKind::NormCdf:
      return normcdf_moments(mu, var);
    case ActivationKind::Sigmoid:
      return sigmoid_moments(mu, var);
  }
  throw ValidationError(ValidationError::Kind::InvalidArgument, "unknown activation");
}

/// Element-wise pushforward moments over classes. m2 values below m1^2 are
/// floored at m1^2 + 1e-15 and flagged in `clamped`.
template <typename Scalar>
MomentPair<Scalar> pushforward_moments(const LogitGaussian<Scalar>& g, ActivationKind act) {
  validate_diagonal(g);
  const auto c = g.classes();
  MomentPair<Scalar> out{Vector<Scalar>(c), Vector<Scalar>(c), Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(c, false)};
  for (Eigen::Index i = 0; i < c; ++i) {
    ScalarMoments<Scalar> m{};
    try {
      m = scalar_moments(act, g.mean(i), g.var_diag(i));
    } catch (const OverflowError& e) {
      throw OverflowError(std::string(e.what()) + " (class " + std::to_string(i) + ")", i);
    }
    if (m.m2 < m.m1 * m.m1) {
      m.m2 = m.m1 * m.m1 + Scalar(kMomentFloor);
      out.clamped(i) = true;
    }
    out.m1(i) = m.m1;
    out.m2(i) = m.m2;
  }
  return out;
}

}  // namespace simplex
