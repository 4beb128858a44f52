#pragma once

#include <Eigen/Core>

#include <cmath>
#include <string>

#include "simplex/errors.hpp"
#include "simplex/gaussian_model.hpp"
#include "simplex/moments.hpp"
#include "simplex/specfun.hpp"

namespace simplex {

enum class RegulariserVariant { Quadratic, Log };

namespace detail {

template <typename Derived>
void check_label(const Eigen::MatrixBase<Derived>& logits, Eigen::Index label) {
  if (label < 0 || label >= logits.size()) {
    throw ValidationError(ValidationError::Kind::InvalidLabel,
                          "label " + std::to_string(label) + " out of range for C = " + std::to_string(logits.size()));
  }
}

}  // namespace detail

/// Cross-entropy -log softmax(logits)[label].
template <typename Derived>
typename Derived::Scalar ce_loss(const Eigen::MatrixBase<Derived>& logits, Eigen::Index label) {
  detail::check_label(logits, label);
  return log_sum_exp(logits) - logits(label);
}

/// Class-wise binary cross-entropy -sum_c [d_c log act(f_c) + (1 - d_c) log(1 - act(f_c))]
/// for act in {NormCdf, Sigmoid}; summed over classes unless `average_classes`.
template <typename Derived>
typename Derived::Scalar bce_loss(const Eigen::MatrixBase<Derived>& logits, Eigen::Index label, ActivationKind act,
                                  bool average_classes = false) {
  using Real = typename Derived::Scalar;
  detail::check_label(logits, label);
  Real total = 0;
  for (Eigen::Index c = 0; c < logits.size(); ++c) {
    const Real f = logits(c);
    // log act(f) and log(1 - act(f)) = log act(-f) for both (symmetric) activations.
    const Real sign = c == label ? Real(1) : Real(-1);
    switch (act) {
      case ActivationKind::Sigmoid:
        total += softplus(-sign * f);
        break;
      case ActivationKind::NormCdf:
        total -= log_norm_cdf(sign * f);
        break;
      case ActivationKind::Exp:
        throw ValidationError(ValidationError::Kind::InvalidArgument, "bce_loss: activation must be normcdf or sigmoid");
    }
  }
  return average_classes ? total / Real(logits.size()) : total;
}

/// BCE on pushforward means, -sum_c [d_c log m1_c + (1 - d_c) log(1 - m1_c)].
template <typename Scalar>
Scalar het_bce_loss(const MomentPair<Scalar>& m, Eigen::Index label, bool average_classes = false) {
  using std::log;
  detail::check_label(m.m1, label);
  Scalar total = 0;
  for (Eigen::Index c = 0; c < m.m1.size(); ++c) {
    const Scalar q = m.m1(c);
    if (!(q > Scalar(0) && q < Scalar(1))) {
      throw ValidationError(ValidationError::Kind::InvalidArgument,
                            "het_bce_loss: m1[" + std::to_string(c) + "] outside (0, 1)");
    }
    total -= c == label ? log(q) : std::log1p(-q);
  }
  return average_classes ? total / Scalar(m.m1.size()) : total;
}

/// CE plus lambda (sum exp f - 1)^2 (Quadratic) or lambda (log sum exp f)^2 (Log).
template <typename Derived>
typename Derived::Scalar regularised_ce_loss(const Eigen::MatrixBase<Derived>& logits, Eigen::Index label,
                                             typename Derived::Scalar lambda, RegulariserVariant variant) {
  using Real = typename Derived::Scalar;
  using std::exp;
  if (lambda < Real(0)) {
    throw ValidationError(ValidationError::Kind::InvalidArgument, "regularised_ce_loss: lambda must be >= 0");
  }
  const Real ce = ce_loss(logits, label);
  if (lambda == Real(0)) {
    return ce;
  }
  const Real lse = log_sum_exp(logits);
  Real penalty = 0;
  if (variant == RegulariserVariant::Log) {
    penalty = lse * lse;
  } else {
    const Real mass = exp(lse) - Real(1);
    penalty = mass * mass;
    if (!std::isfinite(double(penalty))) {
      throw OverflowError("regularised_ce_loss: (sum exp f - 1)^2 overflows; use the log variant");
    }
  }
  return ce + lambda * penalty;
}

}  // namespace simplex
