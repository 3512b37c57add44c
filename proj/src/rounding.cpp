#include "ccsp/rounding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "ccsp/errors.hpp"
#include "ccsp/min2sat.hpp"
#include "ccsp/oracle.hpp"

namespace ccsp {
namespace {

// Violation probability of sorted triple `rank` given its 8 local entries
// (index bit 2 = smallest member).
template <class Prob>
double violation_from(const Nae3Instance& inst, std::uint64_t rank, Prob&& prob) {
  double s = 0.0;
  for (int idx = 0; idx < 8; ++idx)
    if (inst.violated(rank, (idx >> 2) & 1, (idx >> 1) & 1, idx & 1)) s += prob(idx);
  return s;
}

// Triple violations of mu conditioned on (c, gamma), without materializing it.
struct ConditionedView {
  const PseudoDistribution& mu;
  VarSet c;
  VarSet gamma;
  double norm;

  double prob(VarSet t, VarSet values) const {
    if ((values ^ gamma) & c & t) return 0.0;
    const VarSet u = c | t;
    return mu.local(u)[gather_index(u, (values & t) | (gamma & c))] / norm;
  }
  double prob_one(int v) const { return prob(singleton(v), singleton(v)); }
  double violation(const Nae3Instance& inst, int a, int b, int cc, std::uint64_t rank) const {
    const VarSet t = singleton(a) | singleton(b) | singleton(cc);
    return violation_from(inst, rank, [&](int idx) { return prob(t, scatter_index(t, static_cast<std::uint32_t>(idx))); });
  }
};

// Violation of triple {a,b,c} after forcing the members in `fixed` to their
// ruling values; equals the value under pd_fix.
double fixed_violation(const Nae3Instance& inst, const PseudoDistribution& mu, int a, int b, int c,
                       std::uint64_t rank, const FixedSet& fixed) {
  const VarSet t = singleton(a) | singleton(b) | singleton(c);
  const auto local = mu.local(t);
  const VarSet f = fixed.vars & t;
  double s = 0.0;
  for (std::uint32_t idx = 0; idx < 8; ++idx) {
    const VarSet vals = (scatter_index(t, idx) & ~f) | (fixed.values & f);
    const std::uint32_t j = gather_index(t, vals);
    if (inst.violated(rank, (j >> 2) & 1, (j >> 1) & 1, j & 1)) s += local[idx];
  }
  return s;
}

template <class Viol>
LpClassValues class_values(const Nae3Instance& inst, VarSet unfixed, Viol&& viol) {
  LpClassValues out;
  inst.for_each_constraint([&](int a, int b, int c, std::uint64_t rank) {
    const VarSet t = singleton(a) | singleton(b) | singleton(c);
    out.lp[static_cast<std::size_t>(set_size(t & unfixed))] += viol(a, b, c, rank);
  });
  return out;
}

std::uint64_t triples_inside(const Nae3Instance& inst, VarSet w) {
  std::uint64_t count = 0;
  inst.for_each_constraint([&](int a, int b, int c, std::uint64_t) {
    count += contains(w, a) && contains(w, b) && contains(w, c);
  });
  return count;
}

double bias(double p_one) { return std::min(p_one, 1.0 - p_one); }

// Unfixed variable furthest from 1/2, with its ruling value.
FixedSet most_biased(const PseudoDistribution& mu, VarSet unfixed) {
  int best = -1;
  double best_bias = 2.0;
  for (VarSet r = unfixed; r; r &= r - 1) {
    const int v = std::countr_zero(r);
    const double b = bias(mu.prob_one(v));
    if (b < best_bias) {
      best_bias = b;
      best = v;
    }
  }
  FixedSet f;
  f.vars = singleton(best);
  if (mu.prob_one(best) >= 0.5) f.values = singleton(best);
  return f;
}

void apply_fixed(PartialAssignment& alpha, const FixedSet& f) {
  for (VarSet r = f.vars; r; r &= r - 1) {
    const int v = std::countr_zero(r);
    alpha.fix(static_cast<std::size_t>(v), contains(f.values, v) ? 1 : 0);
  }
}

VarSet sample_local(const PseudoDistribution& mu, VarSet s, Rng& rng) {
  const auto local = mu.local(s);
  double u = rng.uniform();
  std::uint32_t idx = 0;
  for (; idx + 1 < local.size(); ++idx) {
    u -= local[idx];
    if (u < 0.0) break;
  }
  return scatter_index(s, idx);
}

Assignment finish_bruteforce(const Nae3Instance& inst, const PartialAssignment& alpha) {
  return completion_opt(inst, alpha).assignment;
}

}  // namespace

double log_term(int n, double log_floor) {
  return std::max(std::log2(static_cast<double>(std::max(n, 1))), log_floor);
}

RoundingConfig resolve_config(const RoundingConfig& cfg, int n) {
  RoundingConfig out = cfg;
  const double L = log_term(n, cfg.log_floor);
  if (out.tau <= 0.0) out.tau = L * L;
  if (out.epsilon <= 0.0) out.epsilon = 1.0 / (10.0 * L);
  require(out.tau >= 1.0, ErrorCode::kInvalidArgument, "tau must be at least 1");
  require(out.epsilon > 0.0 && out.epsilon < 1.0, ErrorCode::kInvalidArgument,
          "epsilon must lie in (0, 1)");
  require(out.t_pairs >= 1, ErrorCode::kInvalidArgument, "t_pairs must be positive");
  require(out.r_max >= 0, ErrorCode::kInvalidArgument, "r_max must be nonnegative");
  require(out.samples_per_stage >= 0, ErrorCode::kInvalidArgument,
          "samples_per_stage must be nonnegative");
  require(out.n_bruteforce >= 3, ErrorCode::kInvalidArgument, "n_bruteforce must be at least 3");
  require(out.n_bruteforce <= kBruteForceCap, ErrorCode::kInvalidArgument,
          "n_bruteforce exceeds the exhaustive search cap");
  return out;
}

FixedSet fixed_set(const PseudoDistribution& mu, VarSet w, double xi) {
  FixedSet f;
  for (VarSet r = w; r; r &= r - 1) {
    const int v = std::countr_zero(r);
    const double p = mu.prob_one(v);
    if (bias(p) > xi) continue;
    f.vars |= singleton(v);
    if (p >= 1.0 - xi) f.values |= singleton(v);
  }
  return f;
}

LpClassValues lp_class_values(const Nae3Instance& inst, const PseudoDistribution& mu,
                              VarSet unfixed) {
  require(mu.degree() >= 3, ErrorCode::kInvalidArgument, "LP classes need degree at least 3");
  return class_values(inst, unfixed, [&](int a, int b, int c, std::uint64_t) {
    return triple_violation(inst, mu, a, b, c);
  });
}

double aggregate_value(const LpClassValues& lpv, double tau, double L) {
  return tau * L * L * L * lpv.lp[3] + L * L * lpv.lp[2] + L * lpv.lp[1] + lpv.lp[0];
}

double unfixed_delta(const Nae3Instance& inst, const PseudoDistribution& mu, VarSet unfixed) {
  const std::uint64_t count = triples_inside(inst, unfixed);
  if (count == 0) return 0.0;
  return lp_class_values(inst, mu, unfixed).lp[3] / static_cast<double>(count);
}

std::vector<double> threshold_candidates(const PseudoDistribution& mu, VarSet unfixed, double tau,
                                         double delta) {
  const double lo = tau * delta, hi = 2.0 * tau * delta;
  std::vector<double> out{lo, hi};
  for (VarSet r = unfixed; r; r &= r - 1) {
    const double b = bias(mu.prob_one(std::countr_zero(r)));
    if (b >= lo && b <= hi) out.push_back(b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  std::erase_if(out, [](double t) { return t >= 0.5; });
  return out;
}

ThresholdCheck bounded_increase_check(const Nae3Instance& inst, const PseudoDistribution& mu,
                                      VarSet unfixed, double theta, double tau, double delta,
                                      double L) {
  require(theta >= 0.0 && theta < 0.5, ErrorCode::kInvalidArgument,
          "threshold must lie in [0, 1/2)");
  ThresholdCheck chk;
  chk.theta = theta;
  chk.fixed = fixed_set(mu, unfixed, theta);
  chk.aggregate_before = aggregate_value(lp_class_values(inst, mu, unfixed), tau, L);
  const LpClassValues after =
      class_values(inst, unfixed & ~chk.fixed.vars, [&](int a, int b, int c, std::uint64_t rank) {
        return fixed_violation(inst, mu, a, b, c, rank, chk.fixed);
      });
  chk.aggregate_after = aggregate_value(after, tau, L);
  const double m = static_cast<double>(binomial(set_size(unfixed), 3));
  chk.bound = (6.0 / L) * chk.aggregate_before + 12.0 * tau * delta * L * L * m;
  chk.passes = chk.aggregate_after - chk.aggregate_before <= chk.bound + 1e-9;
  return chk;
}

bool condition_search(const Nae3Instance& inst, const PseudoDistribution& mu, VarSet unfixed,
                      const RoundingConfig& cfg, Rng& rng, Conditioning& out) {
  const int room = mu.degree() - 3;
  if (room < 1) fail(ErrorCode::kBudget, "degree " + std::to_string(mu.degree()) +
                                             " leaves no room for conditioning");
  const auto vu = members(unfixed);
  if (vu.empty()) return false;
  const double L = log_term(inst.n(), cfg.log_floor);
  const double delta = unfixed_delta(inst, mu, unfixed);
  const double a_mu = aggregate_value(lp_class_values(inst, mu, unfixed), cfg.tau, L);
  const double a_cap = (1.0 + cfg.epsilon) * a_mu + 1e-12;
  const double fix_goal = static_cast<double>(vu.size()) / 100.0;

  bool found = false;
  for (int i = 0; i < cfg.samples_per_stage; ++i) {
    const int extra = i % (cfg.r_max + 1);
    const int size = std::min(2 * cfg.t_pairs + extra, room);
    VarSet c = 0;
    for (int k = 0; k < size; ++k) c |= singleton(vu[rng.below(vu.size())]);
    const VarSet gamma = sample_local(mu, c, rng);
    const double norm = mu.local(c)[gather_index(c, gamma)];
    if (!(norm > kSupportFloor)) continue;
    const ConditionedView view{mu, c, gamma, norm};

    const LpClassValues lpv = class_values(inst, unfixed, [&](int a, int b, int cc, std::uint64_t rank) {
      return view.violation(inst, a, b, cc, rank);
    });
    const double agg = aggregate_value(lpv, cfg.tau, L);
    if (agg > a_cap) continue;
    int fixed = 0;
    for (int v : vu) fixed += bias(view.prob_one(v)) <= cfg.tau * delta;
    const bool enough = fixed >= fix_goal;
    if (!found || fixed > out.fixed_count) {
      out = {c, gamma, fixed, agg, enough};
      found = true;
    }
    if (enough) return true;
  }
  return found;
}

RoundingResult round_pd(const Nae3Instance& inst, const PseudoDistribution& mu_star,
                        const RoundingConfig& config) {
  require(inst.n() == mu_star.n(), ErrorCode::kInvalidArgument,
          "pseudodistribution and instance sizes differ");
  require(mu_star.degree() >= 3, ErrorCode::kInvalidArgument, "rounding needs degree at least 3");
  const RoundingConfig cfg = resolve_config(config, inst.n());
  const double L = log_term(inst.n(), cfg.log_floor);
  Rng root(cfg.seed);
  Rng cond_rng = root.split("condition");
  Rng kprt_rng = root.split("kprt");

  RoundingResult res;
  PartialAssignment alpha(static_cast<std::size_t>(inst.n()));
  PseudoDistribution mu = mu_star;
  for (int stage = 0;; ++stage) {
    const VarSet vu = alpha.unfixed_set();
    StageRecord rec;
    rec.stage = stage;
    rec.n_unfixed = set_size(vu);
    rec.degree = mu.degree();
    rec.lp_before = lp_class_values(inst, mu, vu);
    rec.aggregate_before = aggregate_value(rec.lp_before, cfg.tau, L);

    if (rec.n_unfixed <= cfg.n_bruteforce) {
      res.assignment = finish_bruteforce(inst, alpha);
      rec.branch = "bruteforce";
      rec.fixed_count = rec.n_unfixed;
      const PseudoDistribution done = PseudoDistribution::point_mass(res.assignment, 3);
      rec.lp_after = lp_class_values(inst, done, 0);
      rec.aggregate_after = aggregate_value(rec.lp_after, cfg.tau, L);
      res.trace.stages.push_back(rec);
      return res;
    }

    const std::uint64_t inside = triples_inside(inst, vu);
    rec.delta = inside ? rec.lp_before.lp[3] / static_cast<double>(inside) : 0.0;
    if (rec.delta > cfg.delta_2sat_threshold_factor / cfg.tau) {
      const TwoSatInstance ts = induce_2sat(inst, alpha);
      const TwoSatResult sol = ts.m <= kTwoSatBruteCap
                                   ? twosat_brute(ts)
                                   : kprt_round(ts, pd_to_metric(ts, mu), kprt_rng);
      // Variables in no 2-clause are unconstrained by the 2-SAT instance; they
      // take their majority value under mu.
      std::vector<char> touched(static_cast<std::size_t>(ts.m), 0);
      for (const auto& c : ts.clauses)
        touched[static_cast<std::size_t>(c.v)] = touched[static_cast<std::size_t>(c.w)] = 1;
      for (int i = 0; i < ts.m; ++i) {
        const int v = ts.original[static_cast<std::size_t>(i)];
        const int bit = touched[static_cast<std::size_t>(i)] ? sol.assignment[static_cast<std::size_t>(i)]
                                                             : (mu.prob_one(v) >= 0.5 ? 1 : 0);
        alpha.fix(static_cast<std::size_t>(v), bit);
      }
      res.assignment = alpha.to_assignment();
      rec.branch = "min2sat";
      rec.fixed_count = rec.n_unfixed;
      const PseudoDistribution done = PseudoDistribution::point_mass(res.assignment, 3);
      rec.lp_after = lp_class_values(inst, done, 0);
      rec.aggregate_after = aggregate_value(rec.lp_after, cfg.tau, L);
      res.trace.stages.push_back(rec);
      return res;
    }

    PseudoDistribution tilde;
    bool conditioned = false;
    try {
      Conditioning cond;
      if (condition_search(inst, mu, vu, cfg, cond_rng, cond)) {
        tilde = pd_condition(mu, cond.vars, cond.values);
        rec.cond_size = set_size(cond.vars);
        conditioned = true;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kBudget) throw;
      ++res.trace.degree_exhausted;
    }
    const PseudoDistribution& base = conditioned ? tilde : mu;

    ThresholdCheck chosen;
    for (double theta : threshold_candidates(base, vu, cfg.tau, rec.delta)) {
      ThresholdCheck chk = bounded_increase_check(inst, base, vu, theta, cfg.tau, rec.delta, L);
      if (chk.passes) {
        chosen = chk;
        rec.threshold_found = true;
      }
    }
    FixedSet f = rec.threshold_found ? chosen.fixed : fixed_set(base, vu, 0.0);
    rec.theta = rec.threshold_found ? chosen.theta : 0.0;
    rec.branch = "threshold";
    if (f.vars == 0) {
      f = most_biased(base, vu);
      rec.branch = "stall";
    }
    mu = pd_fix(base, f.vars, f.values);
    apply_fixed(alpha, f);
    rec.fixed_count = set_size(f.vars);
    rec.lp_after = lp_class_values(inst, mu, vu & ~f.vars);
    rec.aggregate_after = aggregate_value(rec.lp_after, cfg.tau, L);
    res.trace.stages.push_back(rec);
  }
}

Assignment round_simple(const Nae3Instance& inst, const PseudoDistribution& mu_star,
                        const RoundingConfig& config) {
  require(inst.n() == mu_star.n(), ErrorCode::kInvalidArgument,
          "pseudodistribution and instance sizes differ");
  require(mu_star.degree() >= 3, ErrorCode::kInvalidArgument, "rounding needs degree at least 3");
  const RoundingConfig cfg = resolve_config(config, inst.n());
  Rng rng = Rng(cfg.seed).split("simple");
  PartialAssignment alpha(static_cast<std::size_t>(inst.n()));
  PseudoDistribution mu = mu_star;
  while (true) {
    // Variables that are already integral need no rounding.
    const FixedSet integral = fixed_set(mu, alpha.unfixed_set(), 0.0);
    apply_fixed(alpha, integral);
    const VarSet vu = alpha.unfixed_set();
    if (vu == 0) return alpha.to_assignment();
    const double delta = unfixed_delta(inst, mu, vu);

    PseudoDistribution tilde;
    bool conditioned = false;
    if (mu.degree() >= 5 && set_size(vu) >= 2) {
      const auto vars = members(vu);
      const int x = vars[rng.below(vars.size())];
      int y = x;
      while (y == x) y = vars[rng.below(vars.size())];
      const VarSet pair = singleton(x) | singleton(y);
      const VarSet beta = sample_local(mu, pair, rng);
      if (mu.local(pair)[gather_index(pair, beta)] > kSupportFloor) {
        tilde = pd_condition(mu, pair, beta);
        conditioned = true;
      }
    }
    const PseudoDistribution& base = conditioned ? tilde : mu;
    FixedSet f = fixed_set(base, vu, std::min(2.0 * cfg.tau * delta, 0.49));
    if (f.vars == 0) f = most_biased(base, vu);
    mu = pd_fix(base, f.vars, f.values);
    apply_fixed(alpha, f);
  }
}

int count_fixable(const Nae3Instance& inst, const PseudoDistribution& mu, VarSet w,
                  double gamma_unsat, double gamma_fix, double gamma_rate) {
  require(set_size(w) >= 3, ErrorCode::kInvalidArgument, "fixable count needs |W| >= 3");
  require(mu.degree() >= 3, ErrorCode::kInvalidArgument, "fixable count needs degree at least 3");
  const auto vars = members(w);
  // Pairs are drawn from all of C(W, 2); pairs containing u never qualify.
  const double pairs = static_cast<double>(binomial(static_cast<int>(vars.size()), 2));
  int count = 0;
  for (int u : vars) {
    std::uint64_t good = 0;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const int v = vars[i];
      if (v == u) continue;
      for (std::size_t j = i + 1; j < vars.size(); ++j) {
        const int x = vars[j];
        if (x == u) continue;
        std::array<int, 3> t{u, v, x};
        std::sort(t.begin(), t.end());
        if (!inst.has(t[0], t[1], t[2])) continue;
        if (triple_violation(inst, mu, t[0], t[1], t[2]) > gamma_unsat) continue;
        // Mapped literal values of v and x agree.
        const int pv = static_cast<int>(inst.polarity(u, v, x, 1));
        const int px = static_cast<int>(inst.polarity(u, v, x, 2));
        const VarSet pair = singleton(v) | singleton(x);
        const auto local = mu.local(pair);
        double agree = 0.0;
        for (std::uint32_t idx = 0; idx < 4; ++idx) {
          const VarSet vals = scatter_index(pair, idx);
          const int bv = static_cast<int>((vals >> v) & 1U) ^ pv;
          const int bx = static_cast<int>((vals >> x) & 1U) ^ px;
          if (bv == bx) agree += local[idx];
        }
        if (agree >= gamma_fix) ++good;
      }
    }
    if (static_cast<double>(good) >= gamma_rate * pairs) ++count;
  }
  return count;
}

DeltaMatrix delta_transfer_diag(const Nae3Instance& inst, const PseudoDistribution& mu,
                                VarSet unfixed, double theta) {
  require(theta >= 0.0 && theta < 0.5, ErrorCode::kInvalidArgument,
          "threshold must lie in [0, 1/2)");
  const FixedSet f = fixed_set(mu, unfixed, theta);
  const VarSet after = unfixed & ~f.vars;
  DeltaMatrix d{};
  inst.for_each_constraint([&](int a, int b, int c, std::uint64_t rank) {
    const VarSet t = singleton(a) | singleton(b) | singleton(c);
    d[static_cast<std::size_t>(set_size(t & unfixed))][static_cast<std::size_t>(set_size(t & after))] +=
        fixed_violation(inst, mu, a, b, c, rank, f);
  });
  return d;
}

}  // namespace ccsp
