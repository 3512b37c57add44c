#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ccsp/instance.hpp"
#include "ccsp/pseudodist.hpp"
#include "ccsp/rng.hpp"

namespace ccsp {

/// Parameters of the stage loop. tau and epsilon <= 0 mean "derive from n":
/// tau = L^2 and epsilon = 1/(10 L) with L = max(log2 n, log_floor).
struct RoundingConfig {
  double tau = 0.0;
  double epsilon = 0.0;
  int t_pairs = 2;
  int r_max = 4;
  int samples_per_stage = 200;
  int n_bruteforce = 14;
  double delta_2sat_threshold_factor = 0.1;
  double log_floor = 2.0;
  std::uint64_t seed = 1;
};

/// L = max(log2 n, log_floor).
double log_term(int n, double log_floor);

/// Fills in derived tau and epsilon and validates the rest.
RoundingConfig resolve_config(const RoundingConfig& cfg, int n);

struct FixedSet {
  VarSet vars = 0;
  /// Ruling value of each member (bit v).
  VarSet values = 0;
};

/// Variables v of w whose minority value has probability at most xi.
FixedSet fixed_set(const PseudoDistribution& mu, VarSet w, double xi);

struct LpClassValues {
  /// lp[i]: violation mass of constraints with exactly i unfixed members.
  std::array<double, 4> lp{};
  double total() const { return lp[0] + lp[1] + lp[2] + lp[3]; }
};

LpClassValues lp_class_values(const Nae3Instance& inst, const PseudoDistribution& mu,
                              VarSet unfixed);

/// tau L^3 lp3 + L^2 lp2 + L lp1 + lp0.
double aggregate_value(const LpClassValues& lpv, double tau, double L);

/// Average violation over the present triples inside `unfixed` (0 if none).
double unfixed_delta(const Nae3Instance& inst, const PseudoDistribution& mu, VarSet unfixed);

/// {tau delta, 2 tau delta} plus every bias of an unfixed variable inside that
/// range, ascending and deduplicated. Values at or above 1/2 are dropped.
std::vector<double> threshold_candidates(const PseudoDistribution& mu, VarSet unfixed, double tau,
                                         double delta);

struct ThresholdCheck {
  double theta = 0.0;
  FixedSet fixed;
  double aggregate_before = 0.0;
  double aggregate_after = 0.0;
  double bound = 0.0;
  bool passes = false;
};

ThresholdCheck bounded_increase_check(const Nae3Instance& inst, const PseudoDistribution& mu,
                                      VarSet unfixed, double theta, double tau, double delta,
                                      double L);

struct Conditioning {
  VarSet vars = 0;
  VarSet values = 0;
  int fixed_count = 0;
  double aggregate = 0.0;
  bool meets_fix_count = false;
};

/// Sampled search for a conditioning event; returns false when no sample keeps
/// the aggregate within (1 + epsilon). Throws kBudget when the degree leaves
/// no room to condition.
bool condition_search(const Nae3Instance& inst, const PseudoDistribution& mu, VarSet unfixed,
                      const RoundingConfig& cfg, Rng& rng, Conditioning& out);

struct StageRecord {
  int stage = 0;
  int n_unfixed = 0;
  int degree = 0;
  double delta = 0.0;
  int cond_size = 0;
  int fixed_count = 0;
  double theta = 0.0;
  /// Whether some candidate threshold passed the bounded-increase test.
  bool threshold_found = false;
  LpClassValues lp_before;
  LpClassValues lp_after;
  double aggregate_before = 0.0;
  double aggregate_after = 0.0;
  /// "threshold", "stall", "min2sat" or "bruteforce".
  std::string branch;
};

struct RoundingTrace {
  std::vector<StageRecord> stages;
  /// Stages that skipped conditioning because the degree ran out.
  int degree_exhausted = 0;
};

struct RoundingResult {
  Assignment assignment;
  RoundingTrace trace;
};

/// Conditioning-and-thresholding rounding of a pseudodistribution.
RoundingResult round_pd(const Nae3Instance& inst, const PseudoDistribution& mu,
                        const RoundingConfig& cfg);

/// Ablation: one random pair per stage, threshold at 2 delta, no aggregate
/// bookkeeping.
Assignment round_simple(const Nae3Instance& inst, const PseudoDistribution& mu,
                        const RoundingConfig& cfg);

/// Number of u in w such that at least a gamma_rate fraction of the pairs of w
/// form, with u, a triple whose violation probability is at most gamma_unsat
/// and whose other two mapped literals agree with probability at least
/// gamma_fix.
int count_fixable(const Nae3Instance& inst, const PseudoDistribution& mu, VarSet w,
                  double gamma_unsat, double gamma_fix, double gamma_rate);

/// d[j][i]: violation mass, after thresholding at theta, of the constraints
/// with j unfixed members before and i after. Zero above the diagonal.
using DeltaMatrix = std::array<std::array<double, 4>, 4>;

DeltaMatrix delta_transfer_diag(const Nae3Instance& inst, const PseudoDistribution& mu,
                                VarSet unfixed, double theta);

}  // namespace ccsp
