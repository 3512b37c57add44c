#include <gtest/gtest.h>

#include <cmath>

#include "ccsp/min2sat.hpp"
#include "ccsp/oracle.hpp"
#include "fixtures.hpp"

using namespace ccsp;

namespace {

Nae3Instance single_clause() {
  Nae3Instance inst(3);
  inst.set_clause_sorted(0, 1, 2, 0);
  return inst;
}

}  // namespace

TEST(Induce, OneFixedMemberGivesABinaryClause) {
  PartialAssignment alpha(3);
  alpha.fix(0, 0);
  auto ts = induce_2sat(single_clause(), alpha);
  ASSERT_EQ(ts.clauses.size(), 1u);
  EXPECT_EQ(ts.m, 2);
  EXPECT_EQ(ts.original, (std::vector<int>{1, 2}));
  EXPECT_EQ(to_dimacs(ts), "p cnf 2 1\n1 2 0\n");

  PartialAssignment beta(3);
  beta.fix(0, 1);
  ts = induce_2sat(single_clause(), beta);
  EXPECT_EQ(to_dimacs(ts), "p cnf 2 1\n-1 -2 0\n");
}

TEST(Induce, TwoFixedMembers) {
  PartialAssignment same(3);
  same.fix(0, 0);
  same.fix(1, 0);
  auto ts = induce_2sat(single_clause(), same);
  EXPECT_EQ(to_dimacs(ts), "p cnf 1 1\n1 0\n");

  PartialAssignment differ(3);
  differ.fix(0, 0);
  differ.fix(1, 1);
  ts = induce_2sat(single_clause(), differ);
  EXPECT_TRUE(ts.clauses.empty());
  EXPECT_EQ(ts.dropped, 1u);
}

TEST(Induce, ViolationsMatchTheInstance) {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 8;
    const auto inst = gen_random_nae3(n, rng.next());
    // Every triple must keep a fixed member, so fix all but two variables.
    PartialAssignment alpha(n);
    const int keep1 = static_cast<int>(rng.below(n));
    int keep2 = static_cast<int>(rng.below(n - 1));
    if (keep2 >= keep1) ++keep2;
    for (int v = 0; v < n; ++v)
      if (v != keep1 && v != keep2) alpha.fix(static_cast<std::size_t>(v), static_cast<int>(rng.below(2)));
    const auto ts = induce_2sat(inst, alpha);
    std::uint64_t fixed_violations = 0;
    inst.for_each_constraint([&](int a, int b, int c, std::uint64_t rank) {
      if (alpha.is_fixed(a) && alpha.is_fixed(b) && alpha.is_fixed(c))
        fixed_violations += inst.violated(rank, alpha.value(a), alpha.value(b), alpha.value(c));
    });
    for (std::uint64_t m = 0; m < 4; ++m) {
      const auto x = Assignment::from_mask(2, m);
      PartialAssignment full = alpha;
      for (int i = 0; i < 2; ++i)
        full.fix(static_cast<std::size_t>(ts.original[static_cast<std::size_t>(i)]), x[static_cast<std::size_t>(i)]);
      EXPECT_EQ(count_violated(inst, full.to_assignment()), fixed_violations + count_violated(ts, x));
    }
  }
}

TEST(Metric, PointMassIsFeasibleAndExact) {
  const auto inst = gen_random_nae3(6, 2);
  PartialAssignment alpha(6);
  alpha.fix(0, 1);
  alpha.fix(3, 0);
  const auto ts = induce_2sat(inst, alpha);
  const Assignment a = Assignment::from_string("101011");
  const auto metric = pd_to_metric(ts, PseudoDistribution::point_mass(a, 3));
  EXPECT_TRUE(check_metric(metric).feasible(1e-12));
  Assignment x(static_cast<std::size_t>(ts.m));
  for (int i = 0; i < ts.m; ++i) x[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(ts.original[static_cast<std::size_t>(i)])];
  EXPECT_NEAR(metric.objective, static_cast<double>(count_violated(ts, x)), 1e-12);
}

TEST(Metric, MixtureIsFeasible) {
  Rng rng(5);
  const auto inst = gen_random_nae3(9, 5);
  const auto base = ccsp::testing::random_assignment(9, rng);
  const auto mu = ccsp::testing::noisy_mixture(base, 3, 4, 0.4, 0.4, rng);
  PartialAssignment alpha(9);
  alpha.fix(2, base[2]);
  const auto ts = induce_2sat(inst, alpha);
  EXPECT_TRUE(check_metric(pd_to_metric(ts, mu)).feasible(1e-9));
}

TEST(TwoSat, BruteMatchesEnumeration) {
  TwoSatInstance ts;
  ts.m = 2;
  ts.clauses = {{0, 1, Polarity::kPositive, Polarity::kPositive},
                {0, 1, Polarity::kNegative, Polarity::kNegative},
                {0, 0, Polarity::kPositive, Polarity::kPositive},
                {1, 1, Polarity::kPositive, Polarity::kPositive}};
  const auto r = twosat_brute(ts);
  EXPECT_EQ(r.violated, 1u);
  EXPECT_EQ(r.assignment.to_string(), "01");
}

TEST(TwoSat, KprtOnSatisfiableIntegralMetric) {
  Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pl = gen_planted_nae3(10, 0.0, rng.next());
    PartialAssignment alpha(10);
    for (int v = 0; v < 4; ++v) alpha.fix(static_cast<std::size_t>(v), pl.planted[static_cast<std::size_t>(v)]);
    const auto ts = induce_2sat(pl.instance, alpha);
    const auto metric = pd_to_metric(ts, PseudoDistribution::point_mass(pl.planted, 3));
    Rng r2(static_cast<std::uint64_t>(trial));
    EXPECT_EQ(kprt_round(ts, metric, r2).violated, 0u);
  }
}
