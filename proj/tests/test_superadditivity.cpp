#include <gtest/gtest.h>

#include "support.hpp"

using namespace rlab;

TEST(Envelope, ConstantWeight) {
  const Weight one = Weight::constant(1.0, 1.0);
  EXPECT_NEAR(monotone_envelope(one, 1, 1, 0.3).value, 1.0, 1e-12);
  EXPECT_NEAR(monotone_envelope(one, 1, 2, 0.3).value, std::sqrt(0.3), 1e-12);
}

TEST(Envelope, LogWeightDiverges) {
  EXPECT_FALSE(monotone_envelope(PowerLog{kInf, 2, -1, 1}, 2, 2, 0.5).finite);
}

TEST(Envelope, Nondecreasing) {
  const Weight w = PowerLog{3, 2, 0.5, 1};
  // u increases along the grid, so t decreases
  const auto g = detail::envelope_grid(w, 2, 4, std::log(2.0), 500.0, 2000, {});
  for (std::size_t i = 1; i < g.log_F.size(); ++i) ASSERT_LE(g.log_F[i], g.log_F[i - 1]);
  double prev = 0.0;
  for (double t = 1e-4; t <= 1.0; t *= 1.7) {
    const double f = monotone_envelope(w, 2, 4, t).value;
    ASSERT_GE(f, prev * (1 - 1e-9));
    prev = f;
  }
}

TEST(SuperaddClassify, LambdaExamples) {
  const Weight one = Weight::constant(1.0, 1.0);
  EXPECT_EQ(superadd_classify_lambda(one, 1, 1).superadditive, Verdict::yes);
  EXPECT_EQ(superadd_classify_lambda(one, 2, 1).superadditive, Verdict::no);
  for (double g : {1.0, 2.0, 4.0, 100.0})
    EXPECT_EQ(superadd_classify_lambda(PowerLog{kInf, 2, -1, 1}, 2, g).superadditive, Verdict::no);
}

TEST(SuperaddClassify, ParameterRule) {
  EXPECT_EQ(superadd_classify_lz(2, 3, 0, 4).superadditive, Verdict::yes);
  EXPECT_EQ(superadd_classify_lz(3, 2, 0, 3).superadditive, Verdict::yes);
  EXPECT_EQ(superadd_classify_lz(kInf, 2, -1, 5).superadditive, Verdict::no);
  EXPECT_THROW(superadd_classify_lz(kInf, 2, 0, 5), PreconditionError);
}

TEST(SuperaddClassify, PositiveVerdictHasConstants) {
  const auto v = superadd_classify_lambda(PowerLog{2, 2, 0, 1}, 2, 4);
  ASSERT_EQ(v.superadditive, Verdict::yes);
  ASSERT_TRUE(v.equivalence_constants);
  EXPECT_LE(v.equivalence_constants->first, v.equivalence_constants->second);
}

TEST(EqualSplit, Family) {
  const auto fam = equal_split_family(0.8, 4, 1.0);
  ASSERT_EQ(fam.size(), 4u);
  EXPECT_DOUBLE_EQ(fam[0].breakpoints()[0], 0.2);
  EXPECT_EQ(equal_split_family(0.8, 1, 1.0)[0], StepProfile::characteristic(0.8, 1.0));
  EXPECT_EQ(disjoint_sum(fam), StepProfile::characteristic(0.8, 1.0));
}

TEST(EmpiricalSuperadd, L1IsExactlyAdditive) {
  const LambdaParams l1(1, PowerLog{1, 1, 0, 1});
  for (std::uint64_t seed : {0u, 1u, 7u, 42u}) EXPECT_EQ(empirical_superadd_constant(l1, 1, {}, seed).constant, 1.0);
}

TEST(EmpiricalSuperadd, L2EqualSplitsGiveOne) {
  const LambdaParams l2(2, PowerLog{2, 2, 0, 1});
  for (long k : {1, 3, 16}) EXPECT_NEAR(superadd_ratio(equal_split_family(0.5, k, 1.0), l2, 2), 1.0, 1e-14);
}

TEST(EmpiricalSuperadd, LogWeightRatioGrows) {
  const LambdaParams params(2, PowerLog{kInf, 2, -1, 1});
  const auto r = empirical_superadd_constant(params, 2, {1 << 16, 0}, 0);
  for (std::size_t i = 1; i < r.growth.size(); ++i) ASSERT_GT(r.growth[i].ratio, r.growth[i - 1].ratio);
  for (const auto& row : r.growth) {
    const double t = 0.5, k = static_cast<double>(row.k);
    EXPECT_NEAR(row.ratio, k * std::log(2 / t) / std::log(2 * k / t), 1e-12 * row.ratio);
  }
}

TEST(EmpiricalSuperadd, PositiveVerdictBounded) {
  const LambdaParams params(2, PowerLog{1.5, 2, 0, 1});
  ASSERT_EQ(superadd_classify_lambda(params.weight, 2, 2).superadditive, Verdict::yes);
  const auto r = empirical_superadd_constant(params, 2, {1 << 12, 50}, 5);
  EXPECT_LT(r.growth.back().ratio, 1.0 + 1e-12);
  EXPECT_LE(r.constant, 4.0);
}

TEST(EmpiricalSuperadd, EnvelopePrimitiveIsSuperadditive) {
  const Weight w = PowerLog{1.5, 2, 0.5, 1};
  for (double s : {0.05, 0.2})
    for (double t : {0.1, 0.3})
      EXPECT_GE(envelope_primitive(w, 2, 2, s + t) * (1 + 1e-6), envelope_primitive(w, 2, 2, s) + envelope_primitive(w, 2, 2, t));
}
