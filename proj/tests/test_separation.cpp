#include <gtest/gtest.h>

#include "support.hpp"

using namespace rlab;

TEST(Theta, ClosedForms) {
  EXPECT_DOUBLE_EQ(theta(PowerLog{2, 2, 0, 1}, 0.25), 4.0);
  EXPECT_DOUBLE_EQ(theta(PowerLog{1, 1, 0, 1}, 0.5), 2.0);
  const double lam = 0.3, q = 2, a = -1, p = 4;
  const double expected = std::pow(lam, -q / p) * std::pow(std::log(2.0), a * q) / std::pow(std::log(2 / lam), a * q);
  EXPECT_NEAR(theta(PowerLog{p, q, a, 1}, lam), expected, 1e-14);
}

TEST(Theta, NumericMatchesClosedForm) {
  CounterRng rng(29, 0);
  for (int i = 0; i < 20; ++i) {
    const double p = rng.uniform(0.5, 6.0), q = rng.uniform(0.5, 6.0), a = rng.uniform(-2.0, 2.0);
    const double lam = rng.uniform(0.05, 0.95);
    const PowerLog w{p, q, a, 1.0};
    EXPECT_LE(relative_error(theta_numeric(w, lam), theta_closed_form(w, lam)), 1e-6);
  }
}

TEST(Theta, ApproachesOneForNegativeLogPower) {
  const PowerLog w{kInf, 2, -1, 1};
  EXPECT_NEAR(theta_numeric(w, 1 - 1e-6), 1.0, 1e-3);
}

TEST(Theta, ConstantWeightIsReciprocal) {
  const Weight w = Tabulated{{1.0}, {1.0}, 1.0};
  EXPECT_NEAR(theta_numeric(w, 0.4), 2.5, 1e-9);
}

TEST(AlphaNorm, Formula) {
  EXPECT_DOUBLE_EQ(alpha_norm_epsilon(1, 1.5, 2), 0.5);
  EXPECT_DOUBLE_EQ(alpha_norm_epsilon(0.5, 1, 4), 1.0);
  EXPECT_NEAR(alpha_norm_epsilon(0.5, 1, 1.21), 0.01, 1e-14);
}

TEST(SeparationCertificate, LorentzCaseMatchesGridOracle) {
  const LambdaParams params(2, PowerLog{2, 2, 0, 1});
  const auto c = separation_certificate(params, 1, 2);
  double best = 0.0;
  for (int i = 1; i < 100000; ++i) {
    const double lam = i / 100000.0;
    best = std::max(best, std::sqrt(lam) * (2 - 1 / std::sqrt(1 - lam)));
  }
  EXPECT_GT(c.epsilon, 0.0);
  EXPECT_NEAR(c.epsilon, best, 1e-9);
  EXPECT_GE(c.epsilon, best - 1e-12);
}

TEST(SeparationCertificate, NoPositiveEpsilon) {
  const LambdaParams params(2, PowerLog{2, 2, 0, 1});
  EXPECT_THROW(separation_certificate(params, 1.999, 2.0), NoPositiveEpsilon);
}

TEST(PlaneQuasinorm, ExactValues) {
  EXPECT_EQ(plane_counterexample_qnorm(1, 0), 2.0);
  EXPECT_EQ(plane_counterexample_qnorm(-1, 0.3), 1.3);
  EXPECT_EQ(plane_counterexample_qnorm(0, 0.3), 0.3);
}

TEST(Falsifier, DefeatsPlaneQuasinorm) {
  const auto qn = builtin_quasinorm("plane");
  const auto hit = falsify_uniform_separation(qn, 1.5, 2.0, 0.1, 1000, 7);
  ASSERT_TRUE(hit.has_value());
  EXPECT_LE(hit->f_norm, 1.5);
  EXPECT_GE(hit->g_norm, 2.0);
  EXPECT_LT(hit->sum_norm, 0.1);
}

TEST(Falsifier, EuclideanNormSurvives) {
  EXPECT_FALSE(falsify_uniform_separation(builtin_quasinorm("euclid"), 1, 2, 0.5, 2000, 1).has_value());
}

TEST(Falsifier, Deterministic) {
  const auto qn = builtin_quasinorm("plane");
  const auto a = falsify_uniform_separation(qn, 1.5, 2.0, 0.01, 1000, 3);
  const auto b = falsify_uniform_separation(qn, 1.5, 2.0, 0.01, 1000, 3);
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->f, b->f);
  EXPECT_EQ(a->trial, b->trial);
}
