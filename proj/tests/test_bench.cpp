#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "simplex/bench.hpp"
#include "simplex/parallel.hpp"

using namespace simplex;
using namespace simplex::bench;

namespace {

SyntheticConfig small_config() {
  SyntheticConfig cfg;
  cfg.class_counts = {2, 10};
  cfg.datasets_per_c = 5;
  cfg.master_seed = 7;
  cfg.threads = resolve_threads();
  return cfg;
}

/// One default-configuration run shared by the invariant tests.
const BenchReport& default_report() {
  static const BenchReport report = [] {
    SyntheticConfig cfg;
    cfg.threads = resolve_threads();
    return run_fig1(cfg);
  }();
  return report;
}

}  // namespace

TEST(Config, Validation) {
  SyntheticConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.class_counts = {1};
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = SyntheticConfig{};
  cfg.datasets_per_c = 0;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = SyntheticConfig{};
  cfg.sigmoid = {1.0, -1.0, 0.0, 1.0};
  EXPECT_THROW(cfg.validate(), ValidationError);
}

TEST(Config, HighTruthSamples) {
  SyntheticConfig cfg;
  EXPECT_EQ(cfg.truth_samples_for(1000), 10000u);
  cfg.high_truth = true;
  EXPECT_EQ(cfg.truth_samples_for(2), 1000000u);
  EXPECT_EQ(cfg.truth_samples_for(100), 100000u);
  EXPECT_EQ(cfg.truth_samples_for(1000), 10000u);
}

TEST(Synthetic, ShapeOfSmallRun) {
  const auto report = run_fig1(small_config());
  EXPECT_EQ(report.format_version, kFormatVersion);
  // 2 class counts x (2 sigmoid + 4 softmax + 2 normcdf) methods.
  EXPECT_EQ(report.rows.size(), 16u);
  for (const auto& row : report.rows) {
    EXPECT_EQ(row.n_evaluated + row.n_excluded, 5u);
    if (row.n_evaluated > 0) {
      EXPECT_TRUE(std::isfinite(row.mean_kl));
      EXPECT_GE(row.mean_kl, 0.0);
    }
  }
  const auto csv = to_csv(report);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "method,C,mean_kl,std_kl,n_excluded");
}

TEST(Synthetic, DeterministicBytes) {
  auto cfg = small_config();
  const auto a = to_csv(run_fig1(cfg));
  cfg.threads = 1;
  EXPECT_EQ(to_csv(run_fig1(cfg)), a);
  cfg.master_seed = 8;
  EXPECT_NE(to_csv(run_fig1(cfg)), a);
}

TEST(Synthetic, ZeroSigmaIsExactForClosedForms) {
  auto cfg = small_config();
  for (auto* r : {&cfg.sigmoid, &cfg.softmax, &cfg.normcdf}) {
    r->sigma_lo = 0.0;
    r->sigma_hi = 0.0;
  }
  const auto report = run_fig1(cfg);
  for (const auto& row : report.rows) {
    if (row.method == "laplace_bridge") {
      EXPECT_EQ(row.n_excluded, 5u);  // zero total variance
      continue;
    }
    EXPECT_LE(row.mean_kl, 1e-6) << row.method << ' ' << row.classes;
  }
}

TEST(Synthetic, BudgetedMonteCarloLosesAtThousandClasses) {
  SyntheticConfig cfg;
  cfg.class_counts = {1000};
  cfg.activations = {McActivation::NormCdf};
  cfg.threads = resolve_threads();
  const auto report = run_fig1(cfg);
  EXPECT_GT(report.find("mc_normcdf", 1000)->mean_kl, report.find("closed_form_normcdf", 1000)->mean_kl);
}

TEST(Synthetic, EveryKlFiniteAndNonNegative) {
  for (const auto& row : default_report().rows) {
    if (row.n_evaluated == 0) {
      continue;
    }
    EXPECT_TRUE(std::isfinite(row.mean_kl)) << row.method;
    EXPECT_GE(row.mean_kl, 0.0) << row.method;
  }
}

TEST(Synthetic, BudgetedMonteCarloGrowsWithClasses) {
  const SyntheticConfig cfg;
  for (const std::string method : {"mc_sigmoid", "mc_softmax", "mc_normcdf"}) {
    int inversions = 0;
    for (std::size_t i = 1; i < cfg.class_counts.size(); ++i) {
      inversions += default_report().find(method, cfg.class_counts[i])->mean_kl <
                            default_report().find(method, cfg.class_counts[i - 1])->mean_kl
                        ? 1
                        : 0;
    }
    EXPECT_LE(inversions, 1) << method;
  }
}

TEST(Synthetic, ClosedFormFlatAcrossClasses) {
  for (const std::string method : {"closed_form_normcdf", "closed_form_sigmoid"}) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const int c : {2, 10, 100, 1000}) {
      const double kl = default_report().find(method, c)->mean_kl;
      lo = std::min(lo, kl);
      hi = std::max(hi, kl);
    }
    EXPECT_LE(hi / lo, 3.0) << method << " mean KL ranges over [" << lo << ", " << hi << "]";
  }
}

TEST(McScaling, PreconditionsAndDegenerateRegime) {
  SyntheticConfig cfg;
  cfg.class_counts = {10, 20};
  EXPECT_THROW(run_mc_scaling(cfg), ValidationError);
  cfg.class_counts = {10, 20, 50};
  EXPECT_THROW(run_mc_scaling(cfg), ValidationError);

  cfg.class_counts = {2, 10, 20};
  cfg.datasets_per_c = 3;
  for (auto* r : {&cfg.sigmoid, &cfg.softmax, &cfg.normcdf}) {
    r->sigma_hi = 0.0;
  }
  const auto report = run_mc_scaling(cfg);
  ASSERT_EQ(report.fits.size(), 3u);
  for (const auto& f : report.fits) {
    EXPECT_TRUE(f.degenerate) << f.method;
    EXPECT_TRUE(std::isnan(f.slope));
  }
}

TEST(McScaling, LinearInClasses) {
  SyntheticConfig cfg;
  cfg.class_counts = {10, 100, 1000};
  cfg.datasets_per_c = 30;
  cfg.threads = resolve_threads();
  const auto report = run_mc_scaling(cfg);
  for (const auto& f : report.fits) {
    EXPECT_FALSE(f.degenerate);
    EXPECT_GE(f.slope, 0.7) << f.method;
    EXPECT_LE(f.slope, 1.3) << f.method;
  }
}

TEST(McScaling, DoublingBudgetHalvesKl) {
  SyntheticConfig cfg;
  cfg.class_counts = {100};
  cfg.datasets_per_c = 50;
  cfg.high_truth = true;
  cfg.mc_only = true;
  cfg.activations = {McActivation::Sigmoid};
  cfg.threads = resolve_threads();
  const double base = run_fig1(cfg).find("mc_sigmoid", 100)->mean_kl;
  cfg.budget *= 2;
  const double doubled = run_fig1(cfg).find("mc_sigmoid", 100)->mean_kl;
  EXPECT_GE(base / doubled, 1.6);
  EXPECT_LE(base / doubled, 2.4);
}

TEST(LogLogFit, ExactPowerLaw) {
  const auto [slope, intercept] = loglog_fit({1.0, 10.0, 100.0}, {3.0, 30.0, 300.0});
  EXPECT_NEAR(slope, 1.0, 1e-14);
  EXPECT_NEAR(intercept, std::log(3.0), 1e-14);
  EXPECT_THROW(loglog_fit({1.0}, {1.0}), ValidationError);
}

TEST(SigmoidBound, ZeroVarianceBox) {
  TheoremCheckConfig cfg;
  cfg.box = {-1.0, 1.0, 0.0, 0.0};
  cfg.trials = 20;
  cfg.calibration_trials = 5;
  cfg.q_samples = 1000;
  cfg.truth_samples = 1000;
  cfg.threads = resolve_threads();
  const auto r = run_theorem_check(cfg);
  EXPECT_EQ(r.delta, 0.0);
  EXPECT_EQ(r.Delta, 0.0);
  EXPECT_EQ(r.M, 0.0);
  EXPECT_GT(r.u, 0.0);
  for (const auto& t : r.trials) {
    EXPECT_LE(t.kl, 1e-6);
  }
  EXPECT_TRUE(r.bound_satisfied);
}

TEST(SigmoidBound, DefaultBoxAndClassIndependentM) {
  TheoremCheckConfig cfg;
  cfg.trials = 20;
  cfg.calibration_trials = 10;
  cfg.q_samples = 20000;
  cfg.truth_samples = 20000;
  cfg.threads = resolve_threads();
  const auto a = run_theorem_check(cfg);
  EXPECT_LT(a.Delta, 1.0);
  EXPECT_TRUE(std::isfinite(a.M));
  EXPECT_NE(a.status, BoundStatus::Inapplicable);
  cfg.classes = 50;
  cfg.trials = 2;
  cfg.calibration_trials = 2;
  const auto b = run_theorem_check(cfg);
  EXPECT_EQ(a.M, b.M);
}

TEST(SigmoidBound, Validation) {
  TheoremCheckConfig cfg;
  cfg.box = {1.0, -1.0, 0.0, 1.0};
  EXPECT_THROW(run_theorem_check(cfg), ValidationError);
  cfg = TheoremCheckConfig{};
  cfg.classes = 1;
  EXPECT_THROW(run_theorem_check(cfg), ValidationError);
}

TEST(Serialisation, SidecarsCarryConfig) {
  const auto cfg = small_config();
  const auto report = run_fig1(cfg);
  const auto json = sidecar_json(cfg, report);
  EXPECT_NE(json.find("\"master_seed\": 7"), std::string::npos);
  EXPECT_NE(json.find(kFormatVersion), std::string::npos);
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(format_real(std::numeric_limits<double>::quiet_NaN()), "nan");
}
