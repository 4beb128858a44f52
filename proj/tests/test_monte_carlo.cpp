#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "simplex/bench.hpp"
#include "simplex/monte_carlo.hpp"
#include "simplex/specfun.hpp"

using namespace simplex;

TEST(NormalSampler, MomentsAndKolmogorovSmirnov) {
  NormalSampler normal(2024);
  const int n = 1000000;
  std::vector<double> z(n);
  oracle::Welford w;
  double m3 = 0.0;
  double m4 = 0.0;
  for (auto& v : z) {
    v = normal();
    w.add(v);
    m3 += v * v * v;
    m4 += v * v * v * v;
  }
  EXPECT_NEAR(w.mean, 0.0, 4.0 / std::sqrt(double(n)));
  EXPECT_NEAR(w.variance(), 1.0, 4.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(m3 / n, 0.0, 4.0 * std::sqrt(15.0 / n));
  EXPECT_NEAR(m4 / n, 3.0, 4.0 * std::sqrt(96.0 / n));

  std::sort(z.begin(), z.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = norm_cdf(z[i]);
    ks = std::max({ks, std::abs(f - double(i) / n), std::abs(f - double(i + 1) / n)});
  }
  EXPECT_LT(ks * std::sqrt(double(n)), 1.63);  // 1% critical value
}

TEST(NormalSampler, TailMass) {
  NormalSampler normal(7);
  const int n = 4000000;
  int beyond = 0;
  int beyond_far = 0;
  for (int i = 0; i < n; ++i) {
    const double v = std::abs(normal());
    beyond += v > 3.442619855899 ? 1 : 0;
    beyond_far += v > 4.0 ? 1 : 0;
  }
  const double p = 2.0 * norm_cdf(-3.442619855899);
  const double q = 2.0 * norm_cdf(-4.0);
  EXPECT_NEAR(double(beyond) / n, p, 4.0 * std::sqrt(p / n));
  EXPECT_NEAR(double(beyond_far) / n, q, 4.0 * std::sqrt(q / n));
}

TEST(NormalSampler, UniformIsOpen) {
  NormalSampler s(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Seeds, DeriveSeedSeparatesPaths) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 20; ++a) {
    for (std::uint64_t b = 0; b < 20; ++b) {
      seen.insert(derive_seed(5, {a, b}));
    }
  }
  EXPECT_EQ(seen.size(), 400u);
  EXPECT_NE(derive_seed(5, {1, 2}), derive_seed(5, {2, 1}));
  EXPECT_NE(derive_seed(5, {1}), derive_seed(6, {1}));
  static_assert(derive_seed(0, {}) == splitmix64(0));
}

TEST(SampleLogits, ZeroVarianceRowsEqualMean) {
  LogitGaussiand g{Eigen::Vector3d(1.0, -2.0, 0.5), Eigen::Vector3d::Zero(), std::nullopt};
  const auto y = sample_logits(g, McConfig{50, 3, std::nullopt});
  ASSERT_EQ(y.rows(), 50);
  for (Eigen::Index r = 0; r < y.rows(); ++r) {
    EXPECT_EQ(y.row(r).transpose(), g.mean);
  }
}

TEST(SampleLogits, SampleMeanCentralLimit) {
  LogitGaussiand g{Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(4.0, 1.0), std::nullopt};
  const auto y = sample_logits(g, McConfig{1000000, 11, std::nullopt});
  EXPECT_NEAR(y.col(0).mean(), 1.0, 3.0 * 2.0 / 1000.0);
}

TEST(SampleLogits, DiagonalCovarianceMatchesDiagonalPath) {
  LogitGaussiand g{Eigen::Vector3d(0.5, -1.0, 2.0), Eigen::Vector3d(0.5, 2.0, 1.0), std::nullopt};
  auto full = g;
  full.cov_full = Eigen::MatrixXd(g.var_diag.asDiagonal());
  const int n = 200000;
  const auto a = sample_logits(g, McConfig{std::uint64_t(n), 1, std::nullopt});
  const auto b = sample_logits(full, McConfig{std::uint64_t(n), 2, std::nullopt});
  for (int c = 0; c < 3; ++c) {
    const double va = (a.col(c).array() - a.col(c).mean()).square().sum() / (n - 1);
    const double vb = (b.col(c).array() - b.col(c).mean()).square().sum() / (n - 1);
    const double se_mean = std::sqrt(2.0 * g.var_diag(c) / n);
    const double se_var = g.var_diag(c) * std::sqrt(2.0 * 2.0 / (n - 1));
    EXPECT_NEAR(a.col(c).mean(), b.col(c).mean(), 3.0 * se_mean);
    EXPECT_NEAR(va, vb, 3.0 * se_var);
  }
}

TEST(SampleLogits, FullCovarianceCorrelation) {
  LogitGaussiand g{Eigen::Vector2d::Zero(), Eigen::Vector2d(1.0, 1.0), std::nullopt};
  Eigen::Matrix2d cov;
  cov << 1.0, 0.8, 0.8, 1.0;
  g.cov_full = cov;
  const int n = 200000;
  const auto y = sample_logits(g, McConfig{std::uint64_t(n), 4, std::nullopt});
  const double r = (y.col(0).array() * y.col(1).array()).mean();
  EXPECT_NEAR(r, 0.8, 4.0 * std::sqrt((1.0 + 0.64) / n));
}

TEST(SampleLogits, SingularCovarianceUsesJitter) {
  LogitGaussiand g{Eigen::Vector2d::Zero(), Eigen::Vector2d(1.0, 1.0), std::nullopt};
  Eigen::Matrix2d cov;
  cov << 1.0, 1.0, 1.0, 1.0;
  g.cov_full = cov;
  const auto y = sample_logits(g, McConfig{1000, 4, std::nullopt});
  EXPECT_LT((y.col(0) - y.col(1)).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(MomentOracle, Anchors) {
  LogitGaussiand zero{Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(), std::nullopt};
  const auto e = mc_moment_oracle(zero, ActivationKind::Exp, McConfig{1000, 1, std::nullopt});
  EXPECT_EQ(e.moments.m1, Eigen::Vector2d::Ones());
  EXPECT_EQ(e.moments.m2, Eigen::Vector2d::Ones());

  LogitGaussiand unit{Eigen::Vector2d::Zero(), Eigen::Vector2d::Ones(), std::nullopt};
  const auto n = mc_moment_oracle(unit, ActivationKind::NormCdf, McConfig{1000000, 2, std::nullopt});
  for (int c = 0; c < 2; ++c) {
    EXPECT_LE(std::abs(n.moments.m1(c) - 0.5), 4.0 * n.se_m1(c));
    EXPECT_LE(std::abs(n.moments.m2(c) - 1.0 / 3.0), 4.0 * n.se_m2(c));
  }
}

TEST(MomentOracle, StandardErrorScaling) {
  LogitGaussiand g{Eigen::Vector2d(0.3, -0.4), Eigen::Vector2d(1.0, 0.5), std::nullopt};
  double prev = 0.0;
  for (const std::uint64_t n : {1000, 10000, 100000}) {
    const double se = mc_moment_oracle(g, ActivationKind::Sigmoid, McConfig{n, 5, std::nullopt}).se_m1(0);
    if (prev > 0.0) {
      EXPECT_NEAR(prev / se, std::sqrt(10.0), 0.3 * std::sqrt(10.0));
    }
    prev = se;
  }
}

TEST(McConfig, BudgetMode) {
  McConfig cfg;
  cfg.budget = 10000;
  EXPECT_EQ(cfg.effective_samples(3), 3334u);
  EXPECT_EQ(cfg.effective_samples(1000), 10u);
  EXPECT_EQ(cfg.effective_samples(10000), 1u);
  LogitGaussiand g{Eigen::VectorXd::Zero(7), Eigen::VectorXd::Ones(7), std::nullopt};
  cfg.budget = 100;
  EXPECT_EQ(mc_predictive_run(g, McActivation::Softmax, cfg).samples, 15u);
  EXPECT_EQ(sample_logits(g, cfg).rows(), 15);
  cfg.budget = 0;
  EXPECT_THROW(cfg.validate(), ValidationError);
}

TEST(McPredictive, Deterministic) {
  LogitGaussiand g{Eigen::Vector3d(0.3, -0.1, 0.8), Eigen::Vector3d(0.5, 0.2, 1.0), std::nullopt};
  for (const auto act : {McActivation::Softmax, McActivation::NormCdf, McActivation::Sigmoid}) {
    EXPECT_EQ(mc_predictive(g, act, 10000, 8).probs(), mc_predictive(g, act, 10000, 8).probs());
    EXPECT_NE(mc_predictive(g, act, 10000, 8).probs(), mc_predictive(g, act, 10000, 9).probs());
  }
}

TEST(McPredictive, ThreadCountDoesNotChangeBenchResults) {
  bench::SyntheticConfig cfg;
  cfg.class_counts = {2, 10};
  cfg.datasets_per_c = 8;
  cfg.truth_samples = 2000;
  cfg.threads = 1;
  const auto one = bench::to_csv(bench::run_fig1(cfg));
  cfg.threads = 4;
  EXPECT_EQ(bench::to_csv(bench::run_fig1(cfg)), one);
}

TEST(NormalisedActivation, AliasingAndValues) {
  std::vector<double> y{1000.0, 999.0, -5.0};
  normalised_activation(McActivation::Softmax, y, y);
  EXPECT_NEAR(y[0], 1.0 / (1.0 + std::exp(-1.0) + std::exp(-1005.0)), 1e-15);
  std::vector<double> z{0.0, 0.0};
  std::vector<double> out(2);
  normalised_activation(McActivation::NormCdf, z, out);
  EXPECT_EQ(out[0], 0.5);
}
