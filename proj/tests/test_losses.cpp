#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "simplex/losses.hpp"

using namespace simplex;

TEST(CeLoss, Anchors) {
  EXPECT_NEAR(ce_loss(Eigen::Vector4d::Constant(0.7), 2), std::log(4.0), 1e-15);
  EXPECT_NEAR(ce_loss(Eigen::Vector2d(1e6, 0.0), 0), 0.0, 1e-15);
  EXPECT_NEAR(ce_loss(Eigen::Vector2d(0.0, std::log(3.0)), 0), std::log(4.0), 1e-15);
  EXPECT_THROW(ce_loss(Eigen::Vector2d(0.0, 0.0), 2), ValidationError);
  EXPECT_THROW(ce_loss(Eigen::Vector2d(0.0, 0.0), -1), ValidationError);
}

TEST(BceLoss, Anchors) {
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(5);
  EXPECT_NEAR(bce_loss(zero, 3, ActivationKind::Sigmoid), 5.0 * std::log(2.0), 1e-14);
  EXPECT_NEAR(bce_loss(zero, 0, ActivationKind::NormCdf), 5.0 * std::log(2.0), 1e-14);
  EXPECT_NEAR(bce_loss(zero, 0, ActivationKind::NormCdf, true), std::log(2.0), 1e-15);
  Eigen::VectorXd sure = Eigen::VectorXd::Constant(4, -40.0);
  sure(1) = 40.0;
  EXPECT_NEAR(bce_loss(sure, 1, ActivationKind::Sigmoid), 0.0, 1e-15);
  EXPECT_NEAR(bce_loss(sure, 1, ActivationKind::NormCdf), 0.0, 1e-15);
  EXPECT_THROW(bce_loss(zero, 0, ActivationKind::Exp), ValidationError);
}

TEST(BceLoss, FiniteForExtremeLogits) {
  Eigen::Vector3d v(-1e3, 1e3, 50.0);
  EXPECT_TRUE(std::isfinite(bce_loss(v, 0, ActivationKind::NormCdf)));
  EXPECT_TRUE(std::isfinite(bce_loss(v, 0, ActivationKind::Sigmoid)));
}

TEST(BceLoss, StrictlyProperPerClass) {
  // Expected per-class loss t * L(f, 1) + (1 - t) * L(f, 0) is minimised where act(f) = t.
  for (const auto act : {ActivationKind::Sigmoid, ActivationKind::NormCdf}) {
    for (const double t : {0.1, 0.5, 0.9}) {
      double best_f = 0.0;
      double best = std::numeric_limits<double>::infinity();
      for (double f = -4.0; f <= 4.0; f += 1e-3) {
        // Two-class vector with class 1 pinned at 0 so only class 0 moves.
        const Eigen::Vector2d v(f, 0.0);
        const double loss = t * bce_loss(v, 0, act) + (1.0 - t) * bce_loss(v, 1, act);
        if (loss < best) {
          best = loss;
          best_f = f;
        }
      }
      const double p = act == ActivationKind::Sigmoid ? sigmoid(best_f) : norm_cdf(best_f);
      EXPECT_NEAR(p, t, 1e-3) << t;
    }
  }
}

TEST(HetBceLoss, Anchors) {
  MomentPaird half{Eigen::VectorXd::Constant(4, 0.5), Eigen::VectorXd::Constant(4, 0.3), {}};
  EXPECT_NEAR(het_bce_loss(half, 2), 4.0 * std::log(2.0), 1e-14);
  MomentPaird hand{Eigen::Vector2d(0.9, 0.2), Eigen::Vector2d(0.85, 0.1), {}};
  EXPECT_NEAR(het_bce_loss(hand, 0), -(std::log(0.9) + std::log(0.8)), 1e-15);
  MomentPaird bad{Eigen::Vector2d(1.0, 0.2), Eigen::Vector2d(1.0, 0.1), {}};
  EXPECT_THROW(het_bce_loss(bad, 0), ValidationError);
}

TEST(HetBceLoss, ZeroVarianceReducesToBce) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const auto act : {ActivationKind::Sigmoid, ActivationKind::NormCdf}) {
    for (int i = 0; i < 100; ++i) {
      LogitGaussiand g{Eigen::VectorXd(6), Eigen::VectorXd::Zero(6), std::nullopt};
      for (int c = 0; c < 6; ++c) {
        g.mean(c) = u(rng);
      }
      const auto m = pushforward_moments(g, act);
      EXPECT_NEAR(het_bce_loss(m, i % 6), bce_loss(g.mean, i % 6, act), 1e-12);
    }
  }
}

TEST(RegularisedCe, Anchors) {
  const Eigen::Vector3d v(0.2, -1.0, 0.5);
  EXPECT_EQ(regularised_ce_loss(v, 1, 0.0, RegulariserVariant::Quadratic), ce_loss(v, 1));
  EXPECT_NEAR(regularised_ce_loss(Eigen::Vector2d(0.0, 0.0), 0, 1.0, RegulariserVariant::Quadratic),
              std::log(2.0) + 1.0, 1e-15);
  const Eigen::Vector2d normalised(std::log(0.25), std::log(0.75));
  EXPECT_NEAR(regularised_ce_loss(normalised, 0, 3.0, RegulariserVariant::Log), ce_loss(normalised, 0), 1e-15);
  EXPECT_THROW(regularised_ce_loss(v, 0, -1.0, RegulariserVariant::Log), ValidationError);
  EXPECT_THROW(regularised_ce_loss(Eigen::Vector2d(800.0, 0.0), 0, 1.0, RegulariserVariant::Quadratic), OverflowError);
  EXPECT_TRUE(std::isfinite(regularised_ce_loss(Eigen::Vector2d(800.0, 0.0), 0, 1.0, RegulariserVariant::Log)));
}

TEST(Losses, FiniteAndNonNegative) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int i = 0; i < 500; ++i) {
    Eigen::VectorXd v(5);
    for (int c = 0; c < 5; ++c) {
      v(c) = u(rng);
    }
    const int label = i % 5;
    for (const double loss :
         {ce_loss(v, label), bce_loss(v, label, ActivationKind::Sigmoid), bce_loss(v, label, ActivationKind::NormCdf),
          regularised_ce_loss(v, label, 0.5, RegulariserVariant::Log)}) {
      EXPECT_TRUE(std::isfinite(loss));
      EXPECT_GE(loss, 0.0);
    }
  }
}
