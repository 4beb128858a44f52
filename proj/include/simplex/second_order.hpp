#pragma once

#include <Eigen/Core>

#include <cmath>
#include <string>
#include <utility>

#include "simplex/errors.hpp"
#include "simplex/gaussian_model.hpp"
#include "simplex/moments.hpp"
#include "simplex/specfun.hpp"

namespace simplex {

/// Dirichlet concentration parameters, all positive and finite.
template <typename Scalar>
class DirichletParams {
 public:
  DirichletParams() = default;

  explicit DirichletParams(Vector<Scalar> gamma) : gamma_(std::move(gamma)) {
    if (gamma_.size() < 2) {
      throw ValidationError(ValidationError::Kind::TooFewClasses, "Dirichlet needs at least two parameters");
    }
    for (Eigen::Index i = 0; i < gamma_.size(); ++i) {
      if (!(gamma_(i) > Scalar(0)) || !std::isfinite(double(gamma_(i)))) {
        throw ValidationError(ValidationError::Kind::InvalidArgument,
                              "Dirichlet parameter " + std::to_string(i) + " is not positive and finite");
      }
    }
  }

  const Vector<Scalar>& gamma() const { return gamma_; }
  Eigen::Index size() const { return gamma_.size(); }
  Scalar precision() const { return gamma_.sum(); }

 private:
  Vector<Scalar> gamma_;
};

using DirichletParamsd = DirichletParams<double>;

template <typename Scalar>
struct BetaParams {
  Scalar alpha;
  Scalar beta;
};

inline constexpr double kVarianceFloor = 1e-15;

/// Method-of-moments Dirichlet from per-class pushforward moments:
///   S = max(sum m1, 1)
///   gamma = (prod_c (m1_c S - m2_c) / (m2_c - m1_c^2))^(1/C) * m1 / sum m1.
/// The geometric mean is taken in log space; m2 - m1^2 is floored at 1e-15.
template <typename Scalar>
DirichletParams<Scalar> match_dirichlet(const MomentPair<Scalar>& m) {
  using std::exp;
  using std::log;
  const auto c = m.classes();
  if (c < 2 || m.m2.size() != c) {
    throw ValidationError(ValidationError::Kind::DimensionMismatch, "match_dirichlet: inconsistent moment vectors");
  }
  const Scalar total = m.m1.sum();
  if (!(total > Scalar(0)) || !std::isfinite(double(total))) {
    throw MatchingError("match_dirichlet: first moments sum to " + std::to_string(double(total)));
  }
  const Scalar s = std::max(total, Scalar(1));
  Scalar log_sum = 0;
  for (Eigen::Index i = 0; i < c; ++i) {
    const Scalar numerator = m.m1(i) * s - m.m2(i);
    if (!(numerator > Scalar(0))) {
      throw MatchingError("match_dirichlet: m1*S - m2 <= 0 for class " + std::to_string(i), i);
    }
    const Scalar variance = std::max(m.m2(i) - m.m1(i) * m.m1(i), Scalar(kVarianceFloor));
    log_sum += log(numerator) - log(variance);
  }
  const Scalar concentration = exp(log_sum / Scalar(c));
  Vector<Scalar> gamma = concentration * (m.m1 / total);
  for (Eigen::Index i = 0; i < c; ++i) {
    if (!(gamma(i) > Scalar(0)) || !std::isfinite(double(gamma(i)))) {
      throw MatchingError("match_dirichlet: gamma[" + std::to_string(i) + "] is not positive and finite", i);
    }
  }
  return DirichletParams<Scalar>(std::move(gamma));
}

/// Beta(alpha, beta) with mean m1 and second moment m2:
/// k = (m1 - m2) / (m2 - m1^2), alpha = k m1, beta = k (1 - m1).
template <typename Scalar>
BetaParams<Scalar> match_beta(Scalar m1, Scalar m2) {
  if (!(m1 > Scalar(0) && m1 < Scalar(1))) {
    throw MatchingError("match_beta: mean must lie in (0, 1)");
  }
  if (!(m2 > m1 * m1 && m2 < m1)) {
    throw MatchingError("match_beta: degenerate moments, need m1^2 < m2 < m1");
  }
  const Scalar k = (m1 - m2) / (m2 - m1 * m1);
  return {k * m1, k * (Scalar(1) - m1)};
}

template <typename Scalar>
SimplexVector<Scalar> dirichlet_mean(const DirichletParams<Scalar>& d) {
  return SimplexVector<Scalar>::normalise(d.gamma());
}

/// Shannon entropy with 0 log 0 = 0.
template <typename Scalar>
Scalar predictive_entropy(const SimplexVector<Scalar>& p) {
  using std::log;
  Scalar h = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > Scalar(0)) {
      h -= p(i) * log(p(i));
    }
  }
  return h;
}

template <typename Scalar>
Scalar max_probability(const SimplexVector<Scalar>& p) {
  return p.probs().maxCoeff();
}

/// E_{P ~ Dir(gamma)}[H(P)] = -sum_c (gamma_c / g0) (psi(gamma_c + 1) - psi(g0 + 1)).
template <typename Scalar>
Scalar dirichlet_expected_entropy(const DirichletParams<Scalar>& d) {
  const Scalar g0 = d.precision();
  const Scalar psi0 = digamma(g0 + Scalar(1));
  Scalar h = 0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const Scalar gi = d.gamma()(i);
    h -= gi / g0 * (digamma(gi + Scalar(1)) - psi0);
  }
  return h;
}

/// Epistemic part: sum_c (gamma_c / g0)(log g0 - log gamma_c + psi(gamma_c + 1) - psi(g0 + 1)).
template <typename Scalar>
Scalar dirichlet_mutual_information(const DirichletParams<Scalar>& d) {
  using std::log;
  const Scalar g0 = d.precision();
  const Scalar log_g0 = log(g0);
  const Scalar psi0 = digamma(g0 + Scalar(1));
  Scalar mi = 0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const Scalar gi = d.gamma()(i);
    mi += gi / g0 * (log_g0 - log(gi) + digamma(gi + Scalar(1)) - psi0);
  }
  return mi;
}

}  // namespace simplex
