#include "ccsp/kcsp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ccsp/errors.hpp"
#include "ccsp/rng.hpp"

namespace ccsp {
namespace {

// A constraint seen from the prefix order: its table rank and the prefix
// positions of its members, sorted by original variable (table order).
struct Check {
  std::uint64_t rank;
  std::vector<int> pos;
};

bool passes(const KcspInstance& inst, const Check& c, std::uint64_t survivor) {
  std::uint32_t idx = 0;
  for (int p : c.pos) idx = (idx << 1) | static_cast<std::uint32_t>((survivor >> p) & 1U);
  return inst.satisfied(c.rank, idx);
}

}  // namespace

DecideResult decide_csp(const KcspInstance& inst, const DecideOptions& opts) {
  require(inst.complete(), ErrorCode::kIncomplete, "decision requires a complete instance");
  const int n = inst.n(), k = inst.k();
  require(n <= 64, ErrorCode::kSize, "decision supports at most 64 variables");

  DecideResult res;
  res.order.resize(static_cast<std::size_t>(n));
  std::iota(res.order.begin(), res.order.end(), 0);
  if (opts.shuffle) {
    Rng rng(opts.seed);
    for (int i = n - 1; i > 0; --i)
      std::swap(res.order[static_cast<std::size_t>(i)],
                res.order[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  }

  // checks[i]: constraints whose last member in the order sits at position i.
  std::vector<std::vector<Check>> checks(static_cast<std::size_t>(n));
  for_each_lex_subset(n, k, [&](const std::vector<int>& positions) {
    std::vector<std::pair<int, int>> by_var;
    for (int p : positions) by_var.emplace_back(res.order[static_cast<std::size_t>(p)], p);
    std::sort(by_var.begin(), by_var.end());
    Check c;
    std::vector<int> vars;
    for (auto [v, p] : by_var) {
      vars.push_back(v);
      c.pos.push_back(p);
    }
    c.rank = colex_rank(vars);
    checks[static_cast<std::size_t>(positions.back())].push_back(std::move(c));
  });

  const double cap = opts.survivor_cap_multiple * std::pow(static_cast<double>(n), k - 1);
  auto record = [&](int prefix, std::uint64_t count) {
    const double ratio = static_cast<double>(count) / std::pow(static_cast<double>(prefix), k - 1);
    res.steps.push_back({prefix, count, ratio});
    res.max_survivors = std::max(res.max_survivors, count);
    res.max_ratio = std::max(res.max_ratio, ratio);
    if (static_cast<double>(count) > cap)
      fail(ErrorCode::kContract, std::to_string(count) + " survivors after " +
                                     std::to_string(prefix) + " variables exceed the cap of " +
                                     std::to_string(static_cast<std::uint64_t>(cap)));
  };

  // Survivors are bit masks over prefix positions.
  std::vector<std::uint64_t> survivors(std::size_t{1} << (k - 1));
  std::iota(survivors.begin(), survivors.end(), std::uint64_t{0});
  record(k - 1, survivors.size());
  std::vector<std::uint64_t> next;
  for (int i = k - 1; i < n && !survivors.empty(); ++i) {
    next.clear();
    for (std::uint64_t s : survivors)
      for (std::uint64_t bit = 0; bit < 2; ++bit) {
        const std::uint64_t ext = s | (bit << i);
        bool ok = true;
        const int first = opts.incremental ? i : 0;
        for (int j = first; j <= i && ok; ++j)
          for (const Check& c : checks[static_cast<std::size_t>(j)])
            if (!passes(inst, c, ext)) {
              ok = false;
              break;
            }
        if (ok) next.push_back(ext);
      }
    survivors.swap(next);
    record(i + 1, survivors.size());
  }

  res.satisfiable = !survivors.empty();
  for (std::uint64_t s : survivors) {
    Assignment a(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p)
      a[static_cast<std::size_t>(res.order[static_cast<std::size_t>(p)])] =
          static_cast<std::uint8_t>((s >> p) & 1U);
    res.solutions.push_back(std::move(a));
  }
  std::sort(res.solutions.begin(), res.solutions.end(),
            [](const Assignment& x, const Assignment& y) { return x.bits() < y.bits(); });
  return res;
}

CountResult count_satisfying(const KcspInstance& inst, const DecideOptions& opts) {
  const DecideResult d = decide_csp(inst, opts);
  return {d.solutions.size(), d.max_survivors, d.max_ratio, d.steps};
}

std::uint64_t exhaustive_count(const KcspInstance& inst) {
  require(inst.n() <= 24, ErrorCode::kSize, "exhaustive enumeration supports at most 24 variables");
  std::uint64_t count = 0;
  const std::uint64_t total = std::uint64_t{1} << inst.n();
  for (std::uint64_t m = 0; m < total; ++m)
    count += count_violated(inst, Assignment::from_mask(inst.n(), m)) == 0;
  return count;
}

bool exhaustive_satisfiable(const KcspInstance& inst) {
  require(inst.n() <= 24, ErrorCode::kSize, "exhaustive enumeration supports at most 24 variables");
  const std::uint64_t total = std::uint64_t{1} << inst.n();
  for (std::uint64_t m = 0; m < total; ++m)
    if (count_violated(inst, Assignment::from_mask(inst.n(), m)) == 0) return true;
  return false;
}

}  // namespace ccsp
