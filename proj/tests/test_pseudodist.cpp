#include <gtest/gtest.h>

#include <cmath>

#include "ccsp/errors.hpp"
#include "ccsp/oracle.hpp"
#include "ccsp/pseudodist.hpp"
#include "fixtures.hpp"

using namespace ccsp;

TEST(Pseudodist, EntryCount) {
  EXPECT_EQ(pd_entry_count(3, 3), 27u);
  EXPECT_EQ(pd_entry_count(4, 2), 1u + 8u + 24u);
  EXPECT_EQ(PseudoDistribution::uniform(5, 3).num_entries(), pd_entry_count(5, 3));
}

TEST(Pseudodist, UniformValueIsAQuarter) {
  const auto inst = gen_random_nae3(7, 2);
  EXPECT_NEAR(pd_val(inst, PseudoDistribution::uniform(7, 3)), 0.25, 1e-12);
}

TEST(Pseudodist, PointMassMatchesAssignmentValue) {
  const auto inst = gen_random_nae3(8, 6);
  const Assignment a = Assignment::from_string("01101001");
  EXPECT_NEAR(pd_val(inst, PseudoDistribution::point_mass(a, 3)), val_assignment(inst, a), 1e-12);
}

TEST(Pseudodist, MixturesAreConsistent) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto base = ccsp::testing::random_assignment(7, rng);
    const auto mu = ccsp::testing::noisy_mixture(base, 4, 3, 0.3, 0.4, rng);
    const auto rep = pd_check(mu, 1e-12);
    EXPECT_TRUE(rep.passes);
    EXPECT_GE(rep.min_probability, 0.0);
  }
}

TEST(Pseudodist, CheckFindsInconsistency) {
  auto mu = PseudoDistribution::uniform(4, 2);
  auto pair = mu.local(singleton(0) | singleton(1));
  pair[0] += 0.1;
  pair[3] -= 0.1;
  EXPECT_TRUE(pd_check(mu, 1e-9).passes == false);
}

TEST(Pseudodist, ConditioningLowersDegree) {
  const auto mu = PseudoDistribution::uniform(6, 4);
  const auto c = pd_condition(mu, singleton(2) | singleton(4), singleton(2));
  EXPECT_EQ(c.degree(), 2);
  EXPECT_NEAR(c.prob_one(2), 1.0, 1e-12);
  EXPECT_NEAR(c.prob_one(4), 0.0, 1e-12);
  EXPECT_NEAR(c.prob_one(0), 0.5, 1e-12);
}

TEST(Pseudodist, ConditioningOnANullEventThrows) {
  const auto mu = PseudoDistribution::point_mass(Assignment::from_string("0000"), 3);
  try {
    pd_condition(mu, singleton(1), singleton(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupportedConditioning);
  }
}

TEST(Pseudodist, TotalProbability) {
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const auto base = ccsp::testing::random_assignment(6, rng);
    const auto mu = ccsp::testing::noisy_mixture(base, 4, 4, 0.4, 0.5, rng);
    const VarSet s = singleton(1);
    const double p1 = mu.prob_one(1);
    if (p1 < 1e-6 || p1 > 1 - 1e-6) continue;
    const auto c0 = pd_condition(mu, s, 0), c1 = pd_condition(mu, s, s);
    const VarSet t = singleton(0) | singleton(3) | singleton(5);
    const auto full = mu.local(t), a = c0.local(t), b = c1.local(t);
    for (std::size_t j = 0; j < full.size(); ++j)
      EXPECT_NEAR(full[j], (1 - p1) * a[j] + p1 * b[j], 1e-12);
  }
}

TEST(Pseudodist, FixPreservesOtherMarginals) {
  Rng rng(2);
  const auto base = ccsp::testing::random_assignment(8, rng);
  const auto mu = ccsp::testing::noisy_mixture(base, 3, 3, 0.3, 0.3, rng);
  const VarSet s = singleton(0) | singleton(5);
  const auto f = pd_fix(mu, s, singleton(5));
  EXPECT_EQ(f.prob_one(0), 0.0);
  EXPECT_EQ(f.prob_one(5), 1.0);
  for (int v : {1, 2, 3, 4, 6, 7}) EXPECT_NEAR(f.prob_one(v), mu.prob_one(v), 1e-12);
  EXPECT_TRUE(pd_check(f, 1e-12).passes);
}

TEST(Pseudodist, MarginalizeSumsOut) {
  LocalDistribution l{singleton(0) | singleton(1), {0.1, 0.2, 0.3, 0.4}};
  const auto m0 = marginalize(l, singleton(0));
  EXPECT_NEAR(m0.probs[0], 0.3, 1e-12);
  EXPECT_NEAR(m0.probs[1], 0.7, 1e-12);
  const auto m1 = marginalize(l, singleton(1));
  EXPECT_NEAR(m1.probs[1], 0.6, 1e-12);
}

TEST(Pseudodist, CorrelationOfCopiedBitIsLn2) {
  const auto mu = PseudoDistribution::mixture(
      3, 3, {Assignment::from_string("000"), Assignment::from_string("110")}, {1, 1});
  EXPECT_NEAR(pd_correlation_diag(mu, singleton(0) | singleton(1)), std::log(2.0), 1e-12);
  EXPECT_NEAR(pd_correlation_diag(mu, singleton(0) | singleton(2)), 0.0, 1e-12);
}

TEST(Pseudodist, RestrictReindexes) {
  const auto mu = PseudoDistribution::product({0.1, 0.2, 0.3, 0.4, 0.5}, 3);
  const auto r = pd_restrict(mu, singleton(1) | singleton(3));
  EXPECT_EQ(r.n(), 2);
  EXPECT_NEAR(r.prob_one(0), 0.2, 1e-12);
  EXPECT_NEAR(r.prob_one(1), 0.4, 1e-12);
}

TEST(Pseudodist, ClampRemovesTinyNegatives) {
  auto mu = PseudoDistribution::uniform(3, 2);
  mu.local(singleton(0))[0] = -1e-12;
  mu.local(singleton(0))[1] = 1.0;
  pd_clamp(mu, 1e-9);
  EXPECT_EQ(mu.local(singleton(0))[0], 0.0);
  mu.local(singleton(1))[0] = -0.1;
  EXPECT_THROW(pd_clamp(mu, 1e-9), Error);
}

TEST(Pseudodist, ValueNeverBelowOptimumForTrueDistributions) {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = gen_random_nae3(8, rng.next());
    const auto base = ccsp::testing::random_assignment(8, rng);
    const auto mu = ccsp::testing::noisy_mixture(base, 3, 3, 0.5, 0.5, rng);
    EXPECT_GE(pd_val(inst, mu) + 1e-12, brute_opt(inst).value);
  }
}
