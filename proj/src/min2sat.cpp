#include "ccsp/min2sat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "ccsp/errors.hpp"

namespace ccsp {

TwoSatInstance induce_2sat(const Nae3Instance& inst, const PartialAssignment& alpha) {
  require(alpha.size() == static_cast<std::size_t>(inst.n()), ErrorCode::kInvalidArgument,
          "partial assignment length differs from the variable count");
  TwoSatInstance ts;
  ts.original = alpha.unfixed();
  ts.m = static_cast<int>(ts.original.size());
  std::vector<int> index(static_cast<std::size_t>(inst.n()), -1);
  for (int i = 0; i < ts.m; ++i) index[static_cast<std::size_t>(ts.original[static_cast<std::size_t>(i)])] = i;

  inst.for_each_constraint([&](int a, int b, int c, std::uint64_t rank) {
    const std::array<int, 3> vars{a, b, c};
    const std::uint8_t neg = inst.neg_mask(rank);
    std::array<int, 3> free_pos{};
    std::array<int, 3> mapped{};  // mapped literal of fixed members
    int n_free = 0, n_fixed = 0;
    for (int j = 0; j < 3; ++j) {
      const auto v = static_cast<std::size_t>(vars[static_cast<std::size_t>(j)]);
      if (alpha.is_fixed(v))
        mapped[static_cast<std::size_t>(n_fixed++)] = alpha.value(v) ^ ((neg >> j) & 1);
      else
        free_pos[static_cast<std::size_t>(n_free++)] = j;
    }
    // A free member's clause literal is true iff its mapped value differs
    // from the fixed mapped value b, i.e. its polarity is neg ^ b.
    auto lit_pol = [&](int pos, int b) {
      return static_cast<Polarity>(((neg >> pos) & 1) ^ b);
    };
    if (n_free == 2) {
      const int b = mapped[0];
      const int p = free_pos[0], q = free_pos[1];
      ts.clauses.push_back({index[static_cast<std::size_t>(vars[static_cast<std::size_t>(p)])],
                            index[static_cast<std::size_t>(vars[static_cast<std::size_t>(q)])],
                            lit_pol(p, b), lit_pol(q, b)});
    } else if (n_free == 1) {
      if (mapped[0] != mapped[1]) {
        ++ts.dropped;
        return;
      }
      const int p = free_pos[0];
      const int v = index[static_cast<std::size_t>(vars[static_cast<std::size_t>(p)])];
      ts.clauses.push_back({v, v, lit_pol(p, mapped[0]), lit_pol(p, mapped[0])});
    }
  });
  return ts;
}

bool clause_satisfied(const TwoClause& c, const Assignment& x) {
  return apply(c.p1, x[static_cast<std::size_t>(c.v)]) == 1 ||
         apply(c.p2, x[static_cast<std::size_t>(c.w)]) == 1;
}

std::uint64_t count_violated(const TwoSatInstance& ts, const Assignment& x) {
  require(x.size() == static_cast<std::size_t>(ts.m), ErrorCode::kInvalidArgument,
          "assignment length differs from the 2-SAT variable count");
  std::uint64_t count = 0;
  for (const auto& c : ts.clauses) count += !clause_satisfied(c, x);
  return count;
}

MetricSolution pd_to_metric(const TwoSatInstance& ts, const PseudoDistribution& mu) {
  require(mu.degree() >= 3 && mu.max_size() >= std::min(3, mu.n()), ErrorCode::kInvalidArgument,
          "metric conversion needs degree at least 3");
  MetricSolution ms;
  ms.m = ts.m;
  const int lits = 2 * ts.m;
  ms.dist.assign(static_cast<std::size_t>(lits) * static_cast<std::size_t>(lits), 0.0);
  for (int l1 = 0; l1 < lits; ++l1)
    for (int l2 = 0; l2 < lits; ++l2) {
      const int v1 = l1 / 2, v2 = l2 / 2;
      const int p1 = l1 & 1, p2 = l2 & 1;
      const int o1 = ts.original[static_cast<std::size_t>(v1)];
      const int o2 = ts.original[static_cast<std::size_t>(v2)];
      double d;
      if (v1 == v2) {
        // Same variable: Pr[l1 = 1, l2 = 0] is 0 for equal literals and
        // Pr[l1 = 1] for complementary ones.
        const double p_one = mu.prob_one(o1);
        d = l1 == l2 ? 0.0 : (p1 ? 1.0 - p_one : p_one);
      } else {
        // Pr[x_o1 = 1 ^ p1, x_o2 = p2].
        const VarSet s = singleton(o1) | singleton(o2);
        const VarSet vals = (static_cast<VarSet>(1 ^ p1) << o1) | (static_cast<VarSet>(p2) << o2);
        d = mu.local(s)[gather_index(s, vals)];
      }
      ms.dist[static_cast<std::size_t>(l1) * static_cast<std::size_t>(lits) + static_cast<std::size_t>(l2)] = d;
    }
  for (const auto& c : ts.clauses) {
    const int a = literal(c.v, c.p1), b = literal(c.w, c.p2);
    ms.objective += 0.5 * (ms(negate_literal(a), b) + ms(negate_literal(b), a));
  }
  return ms;
}

MetricCheck check_metric(const MetricSolution& metric) {
  MetricCheck chk;
  const int lits = 2 * metric.m;
  for (int a = 0; a < lits; ++a)
    for (int b = 0; b < lits; ++b) chk.min_distance = std::min(chk.min_distance, metric(a, b));
  for (int v = 0; v < metric.m; ++v)
    chk.antipodal_violation =
        std::max(chk.antipodal_violation, 1.0 - metric(2 * v, 2 * v + 1) - metric(2 * v + 1, 2 * v));
  for (int a = 0; a < lits; ++a)
    for (int b = 0; b < lits; ++b) {
      const double ab = metric(a, b);
      for (int c = 0; c < lits; ++c)
        chk.triangle_violation = std::max(chk.triangle_violation, metric(a, c) - ab - metric(b, c));
    }
  return chk;
}

namespace {

struct Edge {
  int to;
  double length;
};

}  // namespace

TwoSatResult kprt_round(const TwoSatInstance& ts, const MetricSolution& metric, Rng& rng,
                        const KprtOptions& opts) {
  require(metric.m == ts.m, ErrorCode::kContract, "metric and instance sizes differ");
  const MetricCheck chk = check_metric(metric);
  if (!chk.feasible(opts.feasibility_tol))
    fail(ErrorCode::kContract, "metric solution is infeasible (triangle violation " +
                                   std::to_string(chk.triangle_violation) + ")");
  TwoSatResult best{Assignment(static_cast<std::size_t>(ts.m)),
                    std::numeric_limits<std::uint64_t>::max()};
  if (ts.m == 0) {
    best.violated = ts.clauses.size();
    return best;
  }

  // Implication graph: clause (a or b) gives not a -> b and not b -> a.
  const int lits = 2 * ts.m;
  std::vector<std::vector<Edge>> graph(static_cast<std::size_t>(lits));
  for (const auto& c : ts.clauses) {
    const int a = literal(c.v, c.p1), b = literal(c.w, c.p2);
    graph[static_cast<std::size_t>(negate_literal(a))].push_back({b, metric(negate_literal(a), b)});
    if (a != b)
      graph[static_cast<std::size_t>(negate_literal(b))].push_back({a, metric(negate_literal(b), a)});
  }

  const double rate = 4.0 * std::log(static_cast<double>(lits));
  const double cut_mass = 1.0 - std::exp(-rate / 4.0);
  std::vector<double> dist(static_cast<std::size_t>(lits));
  std::vector<int> order(static_cast<std::size_t>(ts.m));
  for (int trial = 0; trial < std::max(1, opts.trials); ++trial) {
    std::vector<int> value(static_cast<std::size_t>(ts.m), -1);
    for (int i = 0; i < ts.m; ++i) order[static_cast<std::size_t>(i)] = i;
    for (int i = ts.m - 1; i > 0; --i)
      std::swap(order[static_cast<std::size_t>(i)],
                order[rng.below(static_cast<std::uint64_t>(i) + 1)]);

    for (int v : order) {
      if (value[static_cast<std::size_t>(v)] >= 0) continue;
      const int center = metric(2 * v, 2 * v + 1) >= 0.5 ? 2 * v : 2 * v + 1;
      // Exponential radius truncated to [0, 1/4).
      const double radius = -std::log(1.0 - rng.uniform() * cut_mass) / rate;

      std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
      using Item = std::pair<double, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      dist[static_cast<std::size_t>(center)] = 0.0;
      heap.push({0.0, center});
      std::vector<int> ball;
      while (!heap.empty()) {
        const auto [du, u] = heap.top();
        heap.pop();
        if (du > dist[static_cast<std::size_t>(u)] || du > radius) continue;
        ball.push_back(u);
        for (const auto& e : graph[static_cast<std::size_t>(u)]) {
          if (value[static_cast<std::size_t>(e.to / 2)] >= 0) continue;
          const double nd = du + e.length;
          if (nd < dist[static_cast<std::size_t>(e.to)]) {
            dist[static_cast<std::size_t>(e.to)] = nd;
            heap.push({nd, e.to});
          }
        }
      }
      for (int lit : ball) {
        const auto var = static_cast<std::size_t>(lit / 2);
        if (value[var] >= 0) continue;
        const double mine = dist[static_cast<std::size_t>(lit)];
        const double other = dist[static_cast<std::size_t>(negate_literal(lit))];
        int bit = 1 ^ (lit & 1);  // make the literal true
        if (other <= radius && (other < mine || (other == mine && bit == 1)))
          bit = (lit & 1);  // the negation is closer (or tied): keep it, ties to 0
        value[var] = bit;
      }
    }
    Assignment x(static_cast<std::size_t>(ts.m));
    for (int i = 0; i < ts.m; ++i) x[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(value[static_cast<std::size_t>(i)]);
    const std::uint64_t count = count_violated(ts, x);
    if (count < best.violated) best = {std::move(x), count};
  }
  return best;
}

TwoSatResult twosat_brute(const TwoSatInstance& ts, int cap) {
  require(ts.m <= cap && ts.m <= 62, ErrorCode::kSize,
          std::to_string(ts.m) + " variables exceed the exhaustive 2-SAT cap of " +
              std::to_string(cap));
  std::vector<std::vector<std::size_t>> touching(static_cast<std::size_t>(ts.m));
  for (std::size_t i = 0; i < ts.clauses.size(); ++i) {
    touching[static_cast<std::size_t>(ts.clauses[i].v)].push_back(i);
    if (ts.clauses[i].w != ts.clauses[i].v) touching[static_cast<std::size_t>(ts.clauses[i].w)].push_back(i);
  }
  auto violated = [&](const TwoClause& c, std::uint64_t mask) {
    return apply(c.p1, static_cast<int>((mask >> c.v) & 1U)) == 0 &&
           apply(c.p2, static_cast<int>((mask >> c.w) & 1U)) == 0;
  };
  std::uint64_t mask = 0;
  std::uint64_t count = 0;
  for (const auto& c : ts.clauses) count += violated(c, mask);
  std::uint64_t best = count, best_mask = 0;
  const std::uint64_t steps = std::uint64_t{1} << ts.m;
  for (std::uint64_t i = 1; i < steps; ++i) {
    const int v = std::countr_zero(i);
    const std::uint64_t flipped = mask ^ (std::uint64_t{1} << v);
    for (std::size_t ci : touching[static_cast<std::size_t>(v)]) {
      count -= violated(ts.clauses[ci], mask);
      count += violated(ts.clauses[ci], flipped);
    }
    mask = flipped;
    const std::uint64_t diff = mask ^ best_mask;
    if (count < best || (count == best && diff && !((mask >> std::countr_zero(diff)) & 1U))) {
      best = count;
      best_mask = mask;
    }
  }
  return {Assignment::from_mask(ts.m, best_mask), best};
}

std::string to_dimacs(const TwoSatInstance& ts) {
  std::ostringstream out;
  out << "p cnf " << ts.m << ' ' << ts.clauses.size() << '\n';
  auto lit = [](int v, Polarity p) { return p == Polarity::kPositive ? v + 1 : -(v + 1); };
  for (const auto& c : ts.clauses) {
    if (c.v == c.w && c.p1 == c.p2)
      out << lit(c.v, c.p1) << " 0\n";
    else
      out << lit(c.v, c.p1) << ' ' << lit(c.w, c.p2) << " 0\n";
  }
  return out.str();
}

}  // namespace ccsp
