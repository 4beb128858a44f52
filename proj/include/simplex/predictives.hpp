#pragma once

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "simplex/errors.hpp"
#include "simplex/gaussian_model.hpp"
#include "simplex/moments.hpp"
#include "simplex/second_order.hpp"
#include "simplex/specfun.hpp"

namespace simplex {

/// Sample-free predictive E[act(Y)] / sum_c E[act(Y_c)].
///
/// Exp is evaluated in log space as softmax(mu + var/2), which equals the
/// moment ratio but cannot overflow.
template <typename Scalar>
SimplexVector<Scalar> closed_form_predictive(const LogitGaussian<Scalar>& g, ActivationKind act) {
  validate_diagonal(g);
  if (act == ActivationKind::Exp) {
    return SimplexVector<Scalar>::normalise(softmax((g.mean + Scalar(0.5) * g.var_diag).eval()));
  }
  const auto moments = pushforward_moments(g, act);
  if (!(moments.m1.sum() > Scalar(0))) {
    throw NumericalError("closed-form predictive: all first moments underflowed to zero");
  }
  return SimplexVector<Scalar>::normalise(moments.m1);
}

/// Mean-field approximation softmax(mu / sqrt(1 + pi var / 8)).
template <typename Scalar>
SimplexVector<Scalar> mean_field_softmax_predictive(const LogitGaussian<Scalar>& g) {
  validate_diagonal(g);
  const Vector<Scalar> scaled =
      (g.mean.array() / (Scalar(1) + std::numbers::pi_v<Scalar> / Scalar(8) * g.var_diag.array()).sqrt()).matrix();
  return SimplexVector<Scalar>::normalise(softmax(scaled));
}

template <typename Scalar>
struct LaplaceBridgeResult {
  SimplexVector<Scalar> predictive;
  DirichletParams<Scalar> dirichlet;
};

/// Laplace bridge: rescale so the variances sum to sqrt(C/2), then
/// gamma_c = (1 - 2/C + exp(mu_c)/C^2 sum_k exp(-mu_k)) / var_c on the rescaled values.
///
/// The mean rescaling uses the square root of the variance factor. Throws
/// NumericalError if total variance is zero, and MatchingError naming the
/// class if any gamma is not positive and finite.
template <typename Scalar>
LaplaceBridgeResult<Scalar> laplace_bridge_predictive(const LogitGaussian<Scalar>& g) {
  using std::exp;
  using std::log;
  using std::sqrt;
  validate_diagonal(g);
  const auto c = g.classes();
  const Scalar cs = Scalar(c);
  const Scalar total_var = g.var_diag.sum();
  if (!(total_var > Scalar(0))) {
    throw NumericalError("laplace bridge: total variance is zero");
  }
  const Scalar var_scale = sqrt(cs / Scalar(2)) / total_var;
  const Vector<Scalar> mu = sqrt(var_scale) * g.mean;
  const Vector<Scalar> var = var_scale * g.var_diag;

  // exp(mu_c) * sum_k exp(-mu_k) in log space.
  const Scalar log_sum_neg = log_sum_exp((-mu).eval());
  Vector<Scalar> gamma(c);
  for (Eigen::Index i = 0; i < c; ++i) {
    const Scalar cross = exp(mu(i) + log_sum_neg - Scalar(2) * log(cs));
    gamma(i) = (Scalar(1) - Scalar(2) / cs + cross) / var(i);
    if (!(gamma(i) > Scalar(0)) || !std::isfinite(double(gamma(i)))) {
      throw MatchingError("laplace bridge: gamma[" + std::to_string(i) + "] = " + std::to_string(double(gamma(i))) +
                              " is not positive and finite",
                          i);
    }
  }
  DirichletParams<Scalar> d(std::move(gamma));
  auto p = dirichlet_mean(d);
  return {std::move(p), std::move(d)};
}

/// Unnormalised Shekhovtsov-Flach approximation n / (n + (A - b)^(s / s_c)).
template <typename Scalar>
Vector<Scalar> shekhovtsov_flach_raw(const LogitGaussian<Scalar>& g) {
  using std::exp;
  using std::pow;
  using std::sqrt;
  validate_diagonal(g);
  const Scalar L = std::numbers::pi_v<Scalar> * std::numbers::pi_v<Scalar> / Scalar(3);
  const Scalar G = L / Scalar(2);
  const auto c = g.classes();

  Eigen::Index top = 0;
  const Scalar max_mu = g.mean.maxCoeff(&top);
  const Vector<Scalar> mu = g.mean.array() - max_mu;
  const Vector<Scalar> tau2 = g.var_diag.array() + G;
  const Scalar tau2_min = tau2.minCoeff();
  const Scalar s = sqrt(Scalar(2) * tau2_min / L);
  const Vector<Scalar> s_c = ((tau2.array() + tau2_min) / L).sqrt();

  const Vector<Scalar> b = (mu / s).array().exp();
  const Vector<Scalar> n = (mu.array() / s_c.array()).exp();
  const Scalar A = b.sum();
  // A - b for the argmax class is summed directly; subtracting b(top) = 1 from A would cancel.
  Scalar others_top = 0;
  for (Eigen::Index k = 0; k < c; ++k) {
    if (k != top) {
      others_top += b(k);
    }
  }

  Vector<Scalar> p(c);
  for (Eigen::Index i = 0; i < c; ++i) {
    const Scalar others = i == top ? others_top : A - b(i);
    p(i) = n(i) / (n(i) + pow(others, s / s_c(i)));
  }
  return p;
}

/// Shekhovtsov-Flach predictive, renormalised onto the simplex.
/// `raw_sum_deviation`, if given, receives sum(raw) - 1.
template <typename Scalar>
SimplexVector<Scalar> shekhovtsov_flach_predictive(const LogitGaussian<Scalar>& g, Scalar* raw_sum_deviation = nullptr) {
  const Vector<Scalar> raw = shekhovtsov_flach_raw(g);
  if (raw_sum_deviation != nullptr) {
    *raw_sum_deviation = raw.sum() - Scalar(1);
  }
  return SimplexVector<Scalar>::normalise(raw);
}

}  // namespace simplex
