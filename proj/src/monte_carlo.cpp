#include "simplex/monte_carlo.hpp"

#include <Eigen/Cholesky>

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "simplex/specfun.hpp"

namespace simplex {
namespace {

constexpr int kLayers = 128;
constexpr double kTailStart = 3.442619855899;
constexpr double kLayerArea = 9.91256303526217e-3;

struct ZigguratTables {
  std::array<double, kLayers + 1> x{};
  std::array<double, kLayers> ratio{};

  ZigguratTables() {
    double f = std::exp(-0.5 * kTailStart * kTailStart);
    x[0] = kLayerArea / f;
    x[1] = kTailStart;
    x[kLayers] = 0.0;
    for (int i = 2; i < kLayers; ++i) {
      x[i] = std::sqrt(-2.0 * std::log(kLayerArea / x[i - 1] + f));
      f = std::exp(-0.5 * x[i] * x[i]);
    }
    for (int i = 0; i < kLayers; ++i) {
      ratio[i] = x[i + 1] / x[i];
    }
  }
};

const ZigguratTables& tables() {
  static const ZigguratTables t;
  return t;
}

constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

double to_open_unit(std::uint64_t word) { return (static_cast<double>(word >> 11) + 0.5) * kTwoPow53Inv; }

}  // namespace

double NormalSampler::uniform() { return to_open_unit(engine_()); }

double NormalSampler::tail(bool negative) {
  double x = 0.0;
  double y = 0.0;
  do {
    x = std::log(uniform()) / kTailStart;
    y = std::log(uniform());
  } while (-2.0 * y < x * x);
  return negative ? x - kTailStart : kTailStart - x;
}

double NormalSampler::operator()() {
  const auto& t = tables();
  for (;;) {
    const std::uint64_t word = engine_();
    const double u = 2.0 * to_open_unit(word) - 1.0;
    const auto i = static_cast<int>(word & 0x7F);
    if (std::abs(u) < t.ratio[i]) {
      return u * t.x[i];
    }
    if (i == 0) {
      return tail(u < 0.0);
    }
    const double x = u * t.x[i];
    const double f0 = std::exp(-0.5 * (t.x[i] * t.x[i] - x * x));
    const double f1 = std::exp(-0.5 * (t.x[i + 1] * t.x[i + 1] - x * x));
    if (f1 + uniform() * (f0 - f1) < 1.0) {
      return x;
    }
  }
}

std::uint64_t McConfig::effective_samples(Eigen::Index classes) const {
  if (budget) {
    const auto c = static_cast<std::uint64_t>(classes);
    return (*budget + c - 1) / c;
  }
  return samples;
}

void McConfig::validate() const {
  if (budget) {
    if (*budget < 1) {
      throw ValidationError(ValidationError::Kind::InvalidArgument, "MC budget must be >= 1");
    }
  } else if (samples < 1) {
    throw ValidationError(ValidationError::Kind::InvalidArgument, "MC sample count must be >= 1");
  }
}

LogitSampler::LogitSampler(const LogitGaussiand& g, std::uint64_t seed)
    : mean_(g.mean), sd_(g.var_diag.cwiseSqrt()), z_(g.mean.size()), normal_(seed) {
  if (g.cov_full) {
    const auto c = g.mean.size();
    Eigen::LLT<Eigen::MatrixXd> llt(*g.cov_full);
    if (llt.info() != Eigen::Success) {
      llt.compute(*g.cov_full + kPsdJitter * Eigen::MatrixXd::Identity(c, c));
      if (llt.info() != Eigen::Success) {
        throw ValidationError(ValidationError::Kind::NotPositiveSemidefinite,
                              "cov_full: Cholesky failed after 1e-10 jitter");
      }
    }
    chol_ = llt.matrixL().toDenseMatrix();
  }
}

void LogitSampler::next(std::span<double> out) {
  const auto c = mean_.size();
  if (chol_) {
    for (Eigen::Index i = 0; i < c; ++i) {
      z_(i) = normal_();
    }
    Eigen::Map<Eigen::VectorXd>(out.data(), c) = mean_ + chol_->triangularView<Eigen::Lower>() * z_;
    return;
  }
  for (Eigen::Index i = 0; i < c; ++i) {
    out[i] = mean_(i) + sd_(i) * normal_();
  }
}

Eigen::MatrixXd sample_logits(const LogitGaussiand& g, const McConfig& cfg) {
  validate(g);
  cfg.validate();
  const auto n = cfg.effective_samples(g.classes());
  LogitSampler sampler(g, cfg.seed);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> out(n, g.classes());
  for (std::uint64_t s = 0; s < n; ++s) {
    sampler.next(std::span<double>(out.row(static_cast<Eigen::Index>(s)).data(), g.classes()));
  }
  return out;
}

namespace {

double scalar_activation(ActivationKind act, double y) {
  switch (act) {
    case ActivationKind::Exp:
      return std::exp(y);
    case ActivationKind::NormCdf:
      return norm_cdf(y);
    case ActivationKind::Sigmoid:
      return sigmoid(y);
  }
  return 0.0;
}

}  // namespace

MomentOracle mc_moment_oracle(const LogitGaussiand& g, ActivationKind act, const McConfig& cfg) {
  validate(g);
  cfg.validate();
  const auto c = g.classes();
  const auto n = cfg.effective_samples(c);
  LogitSampler sampler(g, cfg.seed);
  std::vector<double> y(static_cast<std::size_t>(c));

  // Welford accumulators for Q and Q^2.
  Eigen::VectorXd mean1 = Eigen::VectorXd::Zero(c);
  Eigen::VectorXd mean2 = Eigen::VectorXd::Zero(c);
  Eigen::VectorXd ss1 = Eigen::VectorXd::Zero(c);
  Eigen::VectorXd ss2 = Eigen::VectorXd::Zero(c);
  for (std::uint64_t s = 1; s <= n; ++s) {
    sampler.next(y);
    const double inv = 1.0 / static_cast<double>(s);
    for (Eigen::Index i = 0; i < c; ++i) {
      const double q = scalar_activation(act, y[static_cast<std::size_t>(i)]);
      const double q2 = q * q;
      const double d1 = q - mean1(i);
      mean1(i) += d1 * inv;
      ss1(i) += d1 * (q - mean1(i));
      const double d2 = q2 - mean2(i);
      mean2(i) += d2 * inv;
      ss2(i) += d2 * (q2 - mean2(i));
    }
  }
  if (!mean1.allFinite() || !mean2.allFinite()) {
    throw OverflowError("mc_moment_oracle: sample moments overflowed");
  }
  MomentOracle out;
  out.samples = n;
  out.moments.m1 = mean1;
  out.moments.m2 = mean2;
  out.moments.clamped = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(c, false);
  const double nd = static_cast<double>(n);
  if (n > 1) {
    out.se_m1 = (ss1 / (nd - 1.0) / nd).cwiseSqrt();
    out.se_m2 = (ss2 / (nd - 1.0) / nd).cwiseSqrt();
  } else {
    out.se_m1 = Eigen::VectorXd::Zero(c);
    out.se_m2 = Eigen::VectorXd::Zero(c);
  }
  return out;
}

void normalised_activation(McActivation act, std::span<const double> y, std::span<double> out) {
  const std::size_t c = y.size();
  double total = 0.0;
  switch (act) {
    case McActivation::Softmax: {
      double top = y[0];
      for (std::size_t i = 1; i < c; ++i) {
        top = std::max(top, y[i]);
      }
      for (std::size_t i = 0; i < c; ++i) {
        out[i] = std::exp(y[i] - top);
        total += out[i];
      }
      break;
    }
    case McActivation::NormCdf:
      for (std::size_t i = 0; i < c; ++i) {
        out[i] = norm_cdf(y[i]);
        total += out[i];
      }
      break;
    case McActivation::Sigmoid:
      for (std::size_t i = 0; i < c; ++i) {
        out[i] = sigmoid(y[i]);
        total += out[i];
      }
      break;
  }
  // Same reduction order as SimplexVector::normalise, so degenerate draws agree bit for bit.
  total = Eigen::Map<const Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(c)).sum();
  if (!(total > 0.0)) {
    throw NumericalError("normalised activation: all activations underflowed to zero");
  }
  for (std::size_t i = 0; i < c; ++i) {
    out[i] /= total;
  }
}

McPredictiveRun mc_predictive_run(const LogitGaussiand& g, McActivation act, const McConfig& cfg) {
  validate(g);
  cfg.validate();
  const auto c = g.classes();
  const auto n = cfg.effective_samples(c);
  LogitSampler sampler(g, cfg.seed);
  std::vector<double> buffer(static_cast<std::size_t>(c));
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(c);
  for (std::uint64_t s = 1; s <= n; ++s) {
    sampler.next(buffer);
    normalised_activation(act, buffer, buffer);
    const double inv = 1.0 / static_cast<double>(s);
    for (Eigen::Index i = 0; i < c; ++i) {
      acc(i) += (buffer[static_cast<std::size_t>(i)] - acc(i)) * inv;
    }
  }
  return {SimplexVectord(std::move(acc)), n};
}

SimplexVectord mc_predictive(const LogitGaussiand& g, McActivation act, std::uint64_t samples, std::uint64_t seed) {
  return mc_predictive_run(g, act, McConfig{samples, seed, std::nullopt}).predictive;
}

}  // namespace simplex
