#pragma once

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "simplex/monte_carlo.hpp"

namespace simplex::bench {

inline constexpr const char* kFormatVersion = "simplex-bench/1";

/// Uniform sampling box for one activation's synthetic logits.
struct ActivationRange {
  double mu_lo;
  double mu_hi;
  double sigma_lo;
  double sigma_hi;
};

enum class KlDirection { TrueVsApprox, ApproxVsTrue };

/// Synthetic experiment: per activation, per class count and per dataset,
/// draw mu_c and sigma_c i.i.d. uniformly, estimate the "true" predictive by
/// MC, and score each approximation by KL.
struct SyntheticConfig {
  std::vector<int> class_counts{2, 5, 10, 50, 100, 500, 1000};
  int datasets_per_c = 100;
  std::uint64_t truth_samples = 10000;
  std::uint64_t budget = 10000;
  std::uint64_t master_seed = 0;

  ActivationRange sigmoid{-1.0, 1.0, 0.0, 1.0};
  ActivationRange softmax{-0.5 - std::numbers::ln2, 0.5 - std::numbers::ln2, 0.0, 0.5};
  ActivationRange normcdf{-0.6266570686577501, 0.6266570686577501, 0.0, std::numbers::pi / 8.0};

  /// Draw sigma^2 (rather than sigma) uniformly over the squared range.
  bool uniform_variance = false;

  /// High-truth mode: truth uses min(high_truth_samples, ceil(high_truth_class_budget / C))
  /// samples, never fewer than truth_samples.
  bool high_truth = false;
  std::uint64_t high_truth_samples = 1000000;
  std::uint64_t high_truth_class_budget = 10000000;

  KlDirection direction = KlDirection::TrueVsApprox;
  std::vector<McActivation> activations{McActivation::Sigmoid, McActivation::Softmax, McActivation::NormCdf};
  /// Only evaluate the budgeted MC estimators.
  bool mc_only = false;
  unsigned threads = 1;

  void validate() const;
  std::uint64_t truth_samples_for(int classes) const;
  const ActivationRange& range(McActivation act) const;
};

struct BenchRow {
  std::string method;
  McActivation activation = McActivation::Sigmoid;
  int classes = 0;
  double mean_kl = 0.0;
  double std_kl = 0.0;
  std::size_t n_excluded = 0;
  std::size_t n_evaluated = 0;
};

struct BenchReport {
  std::string format_version = kFormatVersion;
  std::vector<BenchRow> rows;

  /// Row for (method, classes) or nullptr.
  const BenchRow* find(const std::string& method, int classes) const;
};

/// Method names evaluated for an activation, closed-form/approximate ones first.
std::vector<std::string> methods_for(McActivation act, bool mc_only);

BenchReport run_fig1(const SyntheticConfig& cfg);

struct ScalingFit {
  McActivation activation = McActivation::Sigmoid;
  std::string method;
  double slope = 0.0;
  double intercept = 0.0;
  /// Set when some mean KL is not positive (e.g. all sigma ranges zero); slope is NaN then.
  bool degenerate = false;
};

struct McScalingReport {
  BenchReport table;
  std::vector<ScalingFit> fits;
};

/// Least-squares slope of log mean KL against log C for the budgeted MC estimators.
/// Requires at least three distinct class counts spanning at least one decade.
McScalingReport run_mc_scaling(const SyntheticConfig& cfg);

/// Least-squares fit of log y on log x. Returns {slope, intercept}.
std::pair<double, double> loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Compact box of (mu, sigma^2) values.
struct ParameterBox {
  double mu_lo = -1.0;
  double mu_hi = 1.0;
  double var_lo = 0.0;
  double var_hi = 1.0;
};

struct TheoremCheckConfig {
  ParameterBox box;
  int classes = 10;
  int trials = 100;
  /// Independent trials used only to fit the slack coefficient kappa.
  int calibration_trials = 50;
  std::uint64_t seed = 0;
  int grid_mu = 41;
  int grid_var = 21;
  std::uint64_t q_samples = 100000;
  std::uint64_t truth_samples = 100000;
  unsigned threads = 1;

  void validate() const;
};

enum class BoundStatus { Satisfied, Violated, Inapplicable };

std::string to_string(BoundStatus status);

struct TheoremTrial {
  double kl = 0.0;
  /// Var(sum_c Q_c) estimated from the truth draws.
  double var_sum = 0.0;
};

/// Sigmoid closed-form bound KL(p, p_hat) <= M(K) + kappa Var(sum Q) with
/// M = log((1 + delta/u) / (1 - Delta)).
struct TheoremBoundReport {
  ParameterBox box;
  int classes = 0;
  double delta = 0.0;
  double u = 0.0;
  double Delta = 0.0;
  double M = 0.0;
  /// max over calibration trials of (KL - M)^+ / Var(sum Q).
  double kappa = 0.0;
  std::vector<TheoremTrial> trials;
  std::vector<TheoremTrial> calibration;
  BoundStatus status = BoundStatus::Inapplicable;
  bool bound_satisfied = false;
  /// max over evaluation trials of KL - (M + kappa Var).
  double max_excess = 0.0;
};

inline constexpr double kBoundTolerance = 1e-12;

TheoremBoundReport run_theorem_check(const TheoremCheckConfig& cfg);

// Serialisation: 17 significant digits so repeated runs are byte-comparable.
std::string format_real(double v);
std::string to_csv(const BenchReport& report);
std::string to_csv(const TheoremBoundReport& report);
/// JSON sidecars (pretty-printed) recording the full configuration and seed.
std::string sidecar_json(const SyntheticConfig& cfg, const BenchReport& report);
std::string sidecar_json(const SyntheticConfig& cfg, const McScalingReport& report);
std::string sidecar_json(const TheoremCheckConfig& cfg, const TheoremBoundReport& report);
std::string summary(const BenchReport& report);

std::string to_string(McActivation act);

}  // namespace simplex::bench
