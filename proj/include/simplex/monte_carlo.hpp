#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <span>

#include "simplex/gaussian_model.hpp"
#include "simplex/moments.hpp"

namespace simplex {

/// Activation used to turn a logit draw into a probability vector. Softmax is
/// exp followed by normalisation and is evaluated with a max shift.
enum class McActivation { Softmax, NormCdf, Sigmoid };

inline McActivation mc_activation(ActivationKind act) {
  switch (act) {
    case ActivationKind::Exp:
      return McActivation::Softmax;
    case ActivationKind::NormCdf:
      return McActivation::NormCdf;
    case ActivationKind::Sigmoid:
      return McActivation::Sigmoid;
  }
  return McActivation::Softmax;
}

/// SplitMix64 finaliser (Steele, Lea, Flood 2014). Pinned: seeds derived with it
/// are part of the reproducibility contract.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-based stream seed: folds an index path into the master seed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(master);
  for (const auto index : path) {
    h = splitmix64(h ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
  }
  return h;
}

/// Standard normal variates: std::mt19937_64 feeding the 128-layer ziggurat of
/// Marsaglia & Tsang in Doornik's ZIGNOR form (R = 3.442619855899,
/// V = 9.91256303526217e-3). One 64-bit word supplies the 53-bit uniform
/// (bits 11..63) and the layer index (bits 0..6).
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}

  double operator()();

  /// Uniform on the open interval (0, 1).
  double uniform();

 private:
  double tail(bool negative);

  std::mt19937_64 engine_;
};

struct McConfig {
  std::uint64_t samples = 10000;
  std::uint64_t seed = 0;
  /// When set, the sample count is ceil(budget / C) instead of `samples`.
  std::optional<std::uint64_t> budget;

  std::uint64_t effective_samples(Eigen::Index classes) const;
  void validate() const;
};

/// Draws rows y = mean + L z (L the Cholesky factor of cov_full) or
/// y = mean + sqrt(var) .* z when no covariance is present.
class LogitSampler {
 public:
  LogitSampler(const LogitGaussiand& g, std::uint64_t seed);

  void next(std::span<double> out);
  Eigen::Index classes() const { return mean_.size(); }

 private:
  Eigen::VectorXd mean_;
  Eigen::VectorXd sd_;
  std::optional<Eigen::MatrixXd> chol_;
  Eigen::VectorXd z_;
  NormalSampler normal_;
};

/// samples x C matrix of logit draws.
Eigen::MatrixXd sample_logits(const LogitGaussiand& g, const McConfig& cfg);

struct MomentOracle {
  MomentPaird moments;
  Eigen::VectorXd se_m1;
  Eigen::VectorXd se_m2;
  std::uint64_t samples = 0;
};

/// Per-class sample moments of act(Y) with standard errors.
MomentOracle mc_moment_oracle(const LogitGaussiand& g, ActivationKind act, const McConfig& cfg);

struct McPredictiveRun {
  SimplexVectord predictive;
  std::uint64_t samples = 0;
};

/// Average of normalise(act(y_s)) over draws; running-mean accumulation, so
/// identical draws reproduce their common value exactly.
McPredictiveRun mc_predictive_run(const LogitGaussiand& g, McActivation act, const McConfig& cfg);

SimplexVectord mc_predictive(const LogitGaussiand& g, McActivation act, std::uint64_t samples, std::uint64_t seed);

/// Writes normalise(act(y)) into `out`; y and out may alias.
void normalised_activation(McActivation act, std::span<const double> y, std::span<double> out);

}  // namespace simplex
