#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ccsp/instance.hpp"
#include "ccsp/pseudodist.hpp"
#include "ccsp/rng.hpp"

namespace ccsp {

/// Clause p1(x_v) = 1 OR p2(x_w) = 1. A unit clause has v == w and p1 == p2.
struct TwoClause {
  int v = 0;
  int w = 0;
  Polarity p1 = Polarity::kPositive;
  Polarity p2 = Polarity::kPositive;
};

/// 2-CNF deletion instance over the unfixed variables, re-indexed 0..m-1.
struct TwoSatInstance {
  int m = 0;
  std::vector<TwoClause> clauses;
  /// original[i] = instance variable of 2-SAT variable i.
  std::vector<int> original;
  /// Constraints with two fixed, differing literals (always satisfied).
  std::uint64_t dropped = 0;
};

/// Literal node index: 2*var + polarity (0 = x, 1 = not x).
inline int literal(int var, Polarity p) { return 2 * var + static_cast<int>(p); }
inline int negate_literal(int lit) { return lit ^ 1; }

TwoSatInstance induce_2sat(const Nae3Instance& inst, const PartialAssignment& alpha);

bool clause_satisfied(const TwoClause& c, const Assignment& x);
std::uint64_t count_violated(const TwoSatInstance& ts, const Assignment& x);

/// Directed distances over the 2m literals, d[l1 * 2m + l2].
struct MetricSolution {
  int m = 0;
  std::vector<double> dist;
  double objective = 0.0;

  double operator()(int l1, int l2) const {
    return dist[static_cast<std::size_t>(l1) * static_cast<std::size_t>(2 * m) +
                static_cast<std::size_t>(l2)];
  }
};

/// d(l1, l2) = Pr[l1 = 1 and l2 = 0] under mu (degree >= 3).
MetricSolution pd_to_metric(const TwoSatInstance& ts, const PseudoDistribution& mu);

struct MetricCheck {
  double min_distance = 0.0;
  /// max over v of 1 - (d(v, not v) + d(not v, v)), floored at 0.
  double antipodal_violation = 0.0;
  /// max over literal triples of d(a, c) - d(a, b) - d(b, c), floored at 0.
  double triangle_violation = 0.0;
  bool feasible(double tol) const {
    return min_distance >= -tol && antipodal_violation <= tol && triangle_violation <= tol;
  }
};

MetricCheck check_metric(const MetricSolution& metric);

struct TwoSatResult {
  Assignment assignment;
  std::uint64_t violated = 0;
};

struct KprtOptions {
  int trials = 8;
  double feasibility_tol = 1e-9;
};

/// Region growing on the implication graph: balls of radius below 1/4 around
/// literals that are at least 1/2 away from their negation, cut with an
/// exponential radius at scale 1/log(2m).
TwoSatResult kprt_round(const TwoSatInstance& ts, const MetricSolution& metric, Rng& rng,
                        const KprtOptions& opts = {});

inline constexpr int kTwoSatBruteCap = 20;

/// Exact minimum by enumeration; ties go to the lexicographically smallest.
TwoSatResult twosat_brute(const TwoSatInstance& ts, int cap = kTwoSatBruteCap);

/// DIMACS-style 2-CNF block: signed 1-based literals, units on their own.
std::string to_dimacs(const TwoSatInstance& ts);

}  // namespace ccsp
