#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "simplex/errors.hpp"

namespace simplex {

/// Standard normal CDF, Phi(x) = erfc(-x / sqrt(2)) / 2. The upper half is
/// evaluated as 1 - Phi(-x) so the tail keeps its resolution near 1.
template <typename Real>
Real norm_cdf(Real x) {
  using std::erfc;
  if (x > Real(0)) {
    return Real(1) - Real(0.5) * erfc(x / std::numbers::sqrt2_v<Real>);
  }
  return Real(0.5) * erfc(-x / std::numbers::sqrt2_v<Real>);
}

/// Standard normal density.
template <typename Real>
Real norm_pdf(Real x) {
  using std::exp;
  return std::numbers::inv_sqrtpi_v<Real> / std::numbers::sqrt2_v<Real> * exp(Real(-0.5) * x * x);
}

/// Logistic sigmoid 1 / (1 + exp(-x)); evaluated on the branch where exp cannot overflow.
template <typename Real>
Real sigmoid(Real x) {
  using std::exp;
  if (x >= Real(0)) {
    return Real(1) / (Real(1) + exp(-x));
  }
  const Real e = exp(x);
  return e / (Real(1) + e);
}

/// log(1 + exp(x)) without overflow.
template <typename Real>
Real softplus(Real x) {
  using std::abs;
  using std::exp;
  using std::log1p;
  return std::max(x, Real(0)) + log1p(exp(-abs(x)));
}

/// log Phi(x), accurate in the far left tail where Phi underflows.
template <typename Real>
Real log_norm_cdf(Real x) {
  using std::log;
  if (x > Real(-37)) {
    return log(norm_cdf(x));
  }
  // Mills-ratio expansion; truncation error below 1e-12 relative for x <= -37.
  const Real z = Real(1) / (x * x);
  const Real series = Real(1) - z * (Real(1) - Real(3) * z * (Real(1) - Real(5) * z * (Real(1) - Real(7) * z)));
  return Real(-0.5) * x * x - log(-x) - Real(0.5) * log(Real(2) * std::numbers::pi_v<Real>) + log(series);
}

namespace detail {

/// Gauss-Legendre nodes and weights on [-1, 1], computed once by Newton iteration on P_n.
template <int N>
struct GaussLegendre {
  std::array<double, N> nodes{};
  std::array<double, N> weights{};

  GaussLegendre() {
    for (int i = 0; i < (N + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= N; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = N * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) {
          break;
        }
      }
      nodes[i] = -x;
      nodes[N - 1 - i] = x;
      weights[i] = weights[N - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }

  static const GaussLegendre& instance() {
    static const GaussLegendre rule;
    return rule;
  }
};

template <typename Real>
Real owens_t_integrand(Real h2, Real t) {
  using std::exp;
  const Real one_plus = Real(1) + t * t;
  return exp(Real(-0.5) * h2 * one_plus) / one_plus;
}

/// Composite 16-point Gauss-Legendre over [0, a] split into `panels` equal pieces.
template <typename Real>
Real owens_t_panels(Real h2, Real a, int panels) {
  const auto& rule = GaussLegendre<16>::instance();
  const Real width = a / Real(panels);
  Real total = 0;
  for (int p = 0; p < panels; ++p) {
    const Real mid = width * (Real(p) + Real(0.5));
    Real panel = 0;
    for (int i = 0; i < 16; ++i) {
      panel += Real(rule.weights[i]) * owens_t_integrand(h2, mid + Real(0.5) * width * Real(rule.nodes[i]));
    }
    total += panel * Real(0.5) * width;
  }
  return total;
}

/// T(h, a) for 0 <= a <= 1 by adaptive Gauss-Legendre (16, 32, then 64 nodes).
template <typename Real>
Real owens_t_unit(Real h, Real a) {
  using std::abs;
  const Real h2 = h * h;
  const Real one = owens_t_panels(h2, a, 1);
  const Real two = owens_t_panels(h2, a, 2);
  Real integral = two;
  if (abs(two - one) > Real(1e-16)) {
    integral = owens_t_panels(h2, a, 4);
  }
  return integral / (Real(2) * std::numbers::pi_v<Real>);
}

}  // namespace detail

/// Owen's T function T(h, a) = (1/2pi) int_0^a exp(-h^2 (1+t^2)/2) / (1+t^2) dt.
///
/// Direct quadrature on |a| <= 1. For |a| > 1 the argument is folded back with
/// T(h,a) + T(ah,1/a) = (Phi(h) + Phi(ah))/2 - Phi(h) Phi(ah)  (h, a >= 0).
template <typename Real>
Real owens_t(Real h, Real a) {
  using std::abs;
  if (a == Real(0)) {
    return Real(0);
  }
  if (a < Real(0)) {
    return -owens_t(h, -a);
  }
  h = abs(h);
  if (a <= Real(1)) {
    return detail::owens_t_unit(h, a);
  }
  const Real ah = a * h;
  const Real ph = norm_cdf(h);
  const Real pah = norm_cdf(ah);
  return Real(0.5) * (ph + pah) - ph * pah - detail::owens_t_unit(ah, Real(1) / a);
}

/// Digamma psi(x) for x > 0: upward recurrence to x >= 10, then the asymptotic series.
template <typename Real>
Real digamma(Real x) {
  using std::isfinite;
  using std::log;
  if (!(x > Real(0)) || !isfinite(x)) {
    throw DomainError("digamma: argument must be positive and finite, got " + std::to_string(double(x)));
  }
  Real shift = 0;
  while (x < Real(10)) {
    shift -= Real(1) / x;
    x += Real(1);
  }
  const Real inv = Real(1) / x;
  const Real inv2 = inv * inv;
  // Bernoulli terms B_{2k} / (2k x^{2k}), k = 1..7.
  const Real tail =
      inv2 * (Real(1) / 12 -
              inv2 * (Real(1) / 120 -
                      inv2 * (Real(1) / 252 -
                              inv2 * (Real(1) / 240 -
                                      inv2 * (Real(1) / 132 - inv2 * (Real(691) / 32760 - inv2 * (Real(1) / 12)))))));
  return shift + log(x) - Real(0.5) * inv - tail;
}

/// log(sum(exp(v))) with max-shift.
template <typename Derived>
typename Derived::Scalar log_sum_exp(const Eigen::DenseBase<Derived>& v) {
  using Real = typename Derived::Scalar;
  using std::exp;
  using std::log;
  if (v.size() == 0) {
    throw ValidationError(ValidationError::Kind::InvalidArgument, "log_sum_exp: empty vector");
  }
  const Real top = v.maxCoeff();
  if (!std::isfinite(double(top))) {
    return top;
  }
  return top + log((v.derived().array() - top).exp().sum());
}

/// softmax(v) with max-shift; exactly invariant under representable shifts.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> softmax(const Eigen::MatrixBase<Derived>& v) {
  using Real = typename Derived::Scalar;
  if (v.size() == 0) {
    throw ValidationError(ValidationError::Kind::InvalidArgument, "softmax: empty vector");
  }
  const Real top = v.maxCoeff();
  const Eigen::Matrix<Real, Eigen::Dynamic, 1> e = (v.array() - top).exp().matrix();
  return e / e.sum();
}

}  // namespace simplex
