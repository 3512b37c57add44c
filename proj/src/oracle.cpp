#include "ccsp/oracle.hpp"

#include <cmath>
#include <limits>

#include "ccsp/errors.hpp"

namespace ccsp {

namespace {

struct Incidence {
  std::uint64_t rank;
  int a, b, c;
};

// Present triples through each variable, sorted members.
std::vector<std::vector<Incidence>> incidences(const Nae3Instance& inst) {
  std::vector<std::vector<Incidence>> inc(static_cast<std::size_t>(inst.n()));
  inst.for_each_constraint([&](int a, int b, int c, std::uint64_t rank) {
    for (int v : {a, b, c}) inc[static_cast<std::size_t>(v)].push_back({rank, a, b, c});
  });
  return inc;
}

bool violated_under(const Nae3Instance& inst, const Incidence& t, std::uint64_t mask) {
  return inst.violated(t.rank, (mask >> t.a) & 1U, (mask >> t.b) & 1U, (mask >> t.c) & 1U);
}

// Lexicographic comparison of bit strings with variable 0 first.
bool lex_less(std::uint64_t x, std::uint64_t y) {
  const std::uint64_t diff = x ^ y;
  return diff && !((x >> std::countr_zero(diff)) & 1U);
}

}  // namespace

OptResult completion_opt(const Nae3Instance& inst, const PartialAssignment& alpha, int cap) {
  require(alpha.size() == static_cast<std::size_t>(inst.n()), ErrorCode::kInvalidArgument,
          "partial assignment length differs from the variable count");
  require(inst.n() <= 64, ErrorCode::kSize, "exhaustive search supports at most 64 variables");
  const auto free_vars = alpha.unfixed();
  require(static_cast<int>(free_vars.size()) <= cap, ErrorCode::kSize,
          std::to_string(free_vars.size()) + " unfixed variables exceed the exhaustive cap of " +
              std::to_string(cap));
  std::uint64_t mask = 0;
  for (int v : alpha.fixed())
    if (alpha.value(static_cast<std::size_t>(v))) mask |= std::uint64_t{1} << v;

  const auto inc = incidences(inst);
  std::uint64_t count = count_violated(inst, Assignment::from_mask(inst.n(), mask));
  std::uint64_t best = count;
  std::uint64_t best_mask = mask;
  // Gray code: step i flips the free variable at position ctz(i).
  const std::uint64_t steps = std::uint64_t{1} << free_vars.size();
  for (std::uint64_t i = 1; i < steps; ++i) {
    const int v = free_vars[static_cast<std::size_t>(std::countr_zero(i))];
    const std::uint64_t flipped = mask ^ (std::uint64_t{1} << v);
    for (const auto& t : inc[static_cast<std::size_t>(v)]) {
      count -= violated_under(inst, t, mask);
      count += violated_under(inst, t, flipped);
    }
    mask = flipped;
    if (count < best || (count == best && lex_less(mask, best_mask))) {
      best = count;
      best_mask = mask;
    }
  }
  OptResult res{Assignment::from_mask(inst.n(), best_mask), best, 0.0};
  res.value = inst.num_constraints()
                  ? static_cast<double>(best) / static_cast<double>(inst.num_constraints())
                  : 0.0;
  return res;
}

OptResult brute_opt(const Nae3Instance& inst, int cap) {
  require(inst.n() <= cap, ErrorCode::kSize,
          "n=" + std::to_string(inst.n()) + " exceeds the exhaustive cap of " + std::to_string(cap));
  return completion_opt(inst, PartialAssignment(static_cast<std::size_t>(inst.n())), cap);
}

double safe_ratio(double num, double den) {
  if (den == 0.0) return num == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

RatioReport ratio_report(const Nae3Instance& inst, double lp_value,
                         const std::vector<NamedAssignment>& outputs, int cap) {
  RatioReport rep;
  rep.n = inst.n();
  rep.lp_value = lp_value;
  if (inst.n() <= cap) rep.opt = brute_opt(inst, cap).value;
  for (const auto& out : outputs) {
    RatioEntry e;
    e.name = out.name;
    e.violated = count_violated(inst, out.assignment);
    e.value = val_assignment(inst, out.assignment);
    e.ratio_lp = safe_ratio(e.value, std::max(lp_value, 0.0));
    if (rep.opt) e.ratio_opt = safe_ratio(e.value, *rep.opt);
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

}  // namespace ccsp
