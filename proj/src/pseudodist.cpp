#include "ccsp/pseudodist.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "ccsp/errors.hpp"

namespace ccsp {

namespace {

constexpr std::uint64_t kMaxEntries = std::uint64_t{1} << 28;

// Sums out index bit q of a vector of length 2^m.
void sum_out(const std::vector<double>& in, int q, std::vector<double>& out) {
  out.assign(in.size() / 2, 0.0);
  const std::size_t low = (std::size_t{1} << q) - 1;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t base = ((i & ~low) << 1) | (i & low);
    out[i] = in[base] + in[base | (std::size_t{1} << q)];
  }
}

VarSet positions_to_set(const std::vector<int>& vars, std::uint32_t positions) {
  VarSet s = 0;
  while (positions) {
    s |= singleton(vars[static_cast<std::size_t>(std::countr_zero(positions))]);
    positions &= positions - 1;
  }
  return s;
}

}  // namespace

std::uint64_t pd_entry_count(int n, int degree) {
  std::uint64_t total = 0;
  for (int s = 0; s <= std::min(n, degree); ++s) {
    const std::uint64_t c = binomial(n, s);
    if (s >= 63 || c > (UINT64_MAX >> s) || total > UINT64_MAX - (c << s)) return UINT64_MAX;
    total += c << s;
  }
  return total;
}

PseudoDistribution::PseudoDistribution(int n, int degree)
    : n_(n), degree_(degree), max_size_(std::min(n, degree)) {
  require(n >= 0 && n <= kMaxSetVars, ErrorCode::kSize,
          "pseudodistributions support at most 64 variables");
  require(degree >= 0, ErrorCode::kInvalidArgument, "degree must be nonnegative");
  const std::uint64_t entries = pd_entry_count(n, degree);
  require(entries <= kMaxEntries, ErrorCode::kSize,
          "pseudodistribution would need " + std::to_string(entries) + " entries");
  offsets_.assign(static_cast<std::size_t>(max_size_) + 2, 0);
  for (int s = 0; s <= max_size_; ++s)
    offsets_[static_cast<std::size_t>(s) + 1] =
        offsets_[static_cast<std::size_t>(s)] + (binomial(n, s) << s);
  data_.assign(entries, 0.0);
  data_[0] = 1.0;
}

PseudoDistribution PseudoDistribution::uniform(int n, int degree) {
  return product(std::vector<double>(static_cast<std::size_t>(n), 0.5), degree);
}

PseudoDistribution PseudoDistribution::product(const std::vector<double>& p_one, int degree) {
  PseudoDistribution mu(static_cast<int>(p_one.size()), degree);
  for (double p : p_one)
    require(p >= 0.0 && p <= 1.0, ErrorCode::kInvalidArgument, "probability outside [0, 1]");
  mu.for_each_local_mut([&](VarSet s, std::span<double> probs) {
    const auto vars = members(s);
    for (std::size_t idx = 0; idx < probs.size(); ++idx) {
      double p = 1.0;
      for (std::size_t j = 0; j < vars.size(); ++j) {
        const bool one = (idx >> (vars.size() - 1 - j)) & 1U;
        const double q = p_one[static_cast<std::size_t>(vars[j])];
        p *= one ? q : 1.0 - q;
      }
      probs[idx] = p;
    }
  });
  return mu;
}

PseudoDistribution PseudoDistribution::point_mass(const Assignment& a, int degree) {
  return mixture(static_cast<int>(a.size()), degree, {a}, {1.0});
}

PseudoDistribution PseudoDistribution::mixture(int n, int degree,
                                               const std::vector<Assignment>& support,
                                               const std::vector<double>& weights) {
  require(!support.empty() && support.size() == weights.size(), ErrorCode::kInvalidArgument,
          "mixture needs one weight per support point");
  double total = 0.0;
  for (double w : weights) {
    require(w >= 0.0, ErrorCode::kInvalidArgument, "mixture weights must be nonnegative");
    total += w;
  }
  require(total > 0.0, ErrorCode::kInvalidArgument, "mixture weights sum to zero");
  std::vector<VarSet> masks;
  for (const auto& a : support) {
    require(a.size() == static_cast<std::size_t>(n), ErrorCode::kInvalidArgument,
            "support assignment has the wrong length");
    masks.push_back(a.to_mask());
  }
  PseudoDistribution mu(n, degree);
  mu.for_each_local_mut([&](VarSet s, std::span<double> probs) {
    std::fill(probs.begin(), probs.end(), 0.0);
    for (std::size_t i = 0; i < masks.size(); ++i)
      probs[gather_index(s, masks[i])] += weights[i] / total;
  });
  mu.data_[0] = 1.0;
  return mu;
}

PdCheckReport pd_check(const PseudoDistribution& mu, double tol) {
  PdCheckReport rep;
  std::vector<std::vector<double>> marg;
  mu.for_each_local([&](VarSet u, std::span<const double> probs) {
    double sum = 0.0;
    for (double p : probs) {
      sum += p;
      rep.min_probability = std::min(rep.min_probability, p);
    }
    if (std::abs(sum - 1.0) > rep.max_sum_deviation) {
      rep.max_sum_deviation = std::abs(sum - 1.0);
      rep.worst_sum_set = u;
    }
    const int s = set_size(u);
    if (s == 0) return;
    // Marginals onto every proper subset, each derived from a parent one
    // member larger, so the cost per local is O(3^|U|).
    const auto vars = members(u);
    const std::uint32_t full = (std::uint32_t{1} << s) - 1;
    marg.resize(std::size_t{1} << s);
    marg[full].assign(probs.begin(), probs.end());
    for (std::uint32_t p = full; p-- > 0;) {
      const int j = std::countr_zero(~p);
      const std::uint32_t parent = p | (std::uint32_t{1} << j);
      const int q = std::popcount(parent >> (j + 1));
      sum_out(marg[parent], q, marg[p]);
      const VarSet t = positions_to_set(vars, p);
      const auto stored = mu.local(t);
      for (std::size_t i = 0; i < stored.size(); ++i) {
        const double dev = std::abs(stored[i] - marg[p][i]);
        if (dev > rep.max_consistency_deviation) {
          rep.max_consistency_deviation = dev;
          rep.worst_super = u;
          rep.worst_sub = t;
          rep.worst_beta = static_cast<std::uint32_t>(i);
        }
      }
    }
  });
  rep.passes = rep.max_sum_deviation <= tol && rep.max_consistency_deviation <= tol &&
               rep.min_probability >= -tol;
  return rep;
}

LocalDistribution marginalize(const LocalDistribution& local, VarSet target) {
  require((target & ~local.subset) == 0, ErrorCode::kInvalidArgument,
          "marginal target is not a subset of the local");
  LocalDistribution out{target, std::vector<double>(std::size_t{1} << set_size(target), 0.0)};
  for (std::size_t idx = 0; idx < local.probs.size(); ++idx) {
    const VarSet vals = scatter_index(local.subset, static_cast<std::uint32_t>(idx));
    out.probs[gather_index(target, vals)] += local.probs[idx];
  }
  return out;
}

LocalDistribution pd_marginal(const PseudoDistribution& mu, VarSet s) {
  require(set_size(s) <= mu.max_size(), ErrorCode::kInvalidArgument,
          "subset is larger than the degree");
  require(mu.n() == 64 || (s >> mu.n()) == 0, ErrorCode::kInvalidArgument,
          "subset contains a variable out of range");
  const auto probs = mu.local(s);
  return {s, std::vector<double>(probs.begin(), probs.end())};
}

PseudoDistribution pd_condition(const PseudoDistribution& mu, VarSet s, VarSet values,
                                double floor) {
  const int size = set_size(s);
  require(size <= mu.degree() - 1 && size <= mu.max_size(), ErrorCode::kInvalidArgument,
          "conditioning set must be smaller than the degree");
  values &= s;
  const double pb = mu.local(s)[gather_index(s, values)];
  if (!(pb > floor))
    fail(ErrorCode::kUnsupportedConditioning,
         "conditioning event has probability " + std::to_string(pb));
  PseudoDistribution out(mu.n(), mu.degree() - size);
  out.for_each_local_mut([&](VarSet t, std::span<double> probs) {
    const VarSet u = s | t;
    const auto src = mu.local(u);
    for (std::size_t idx = 0; idx < probs.size(); ++idx) {
      const VarSet vt = scatter_index(t, static_cast<std::uint32_t>(idx));
      if ((vt ^ values) & s & t) {
        probs[idx] = 0.0;
        continue;
      }
      probs[idx] = src[gather_index(u, vt | values)] / pb;
    }
  });
  return out;
}

PseudoDistribution pd_fix(const PseudoDistribution& mu, VarSet s, VarSet values) {
  values &= s;
  PseudoDistribution out(mu);
  std::vector<double> keep_marg;
  out.for_each_local_mut([&](VarSet t, std::span<double> probs) {
    if ((t & s) == 0) return;
    const VarSet keep = t & ~s;
    keep_marg.assign(std::size_t{1} << set_size(keep), 0.0);
    for (std::size_t idx = 0; idx < probs.size(); ++idx) {
      const VarSet vt = scatter_index(t, static_cast<std::uint32_t>(idx));
      keep_marg[gather_index(keep, vt)] += probs[idx];
    }
    for (std::size_t idx = 0; idx < probs.size(); ++idx) {
      const VarSet vt = scatter_index(t, static_cast<std::uint32_t>(idx));
      probs[idx] = ((vt ^ values) & s & t) ? 0.0 : keep_marg[gather_index(keep, vt)];
    }
  });
  return out;
}

PseudoDistribution pd_restrict(const PseudoDistribution& mu, VarSet w) {
  require(mu.n() == 64 || (w >> mu.n()) == 0, ErrorCode::kInvalidArgument,
          "restriction set contains a variable out of range");
  const auto vars = members(w);
  PseudoDistribution out(static_cast<int>(vars.size()), mu.degree());
  out.for_each_local_mut([&](VarSet t, std::span<double> probs) {
    VarSet orig = 0;
    for (VarSet r = t; r; r &= r - 1) orig |= singleton(vars[static_cast<std::size_t>(std::countr_zero(r))]);
    const auto src = mu.local(orig);
    std::copy(src.begin(), src.end(), probs.begin());
  });
  return out;
}

double triple_violation(const Nae3Instance& inst, const PseudoDistribution& mu, int a, int b,
                        int c) {
  const auto rank = Nae3Instance::triple_rank(a, b, c);
  const auto probs = mu.local(singleton(a) | singleton(b) | singleton(c));
  double p = 0.0;
  for (int j = 0; j < 8; ++j)
    if (inst.violated(rank, (j >> 2) & 1, (j >> 1) & 1, j & 1)) p += probs[static_cast<std::size_t>(j)];
  return p;
}

namespace {

void require_val_inputs(const Nae3Instance& inst, const PseudoDistribution& mu) {
  require(mu.degree() >= 3 && mu.max_size() >= 3, ErrorCode::kInvalidArgument,
          "objective evaluation needs degree at least 3");
  require(inst.n() == mu.n(), ErrorCode::kInvalidArgument,
          "instance and pseudodistribution disagree on n");
}

}  // namespace

double pd_val(const Nae3Instance& inst, const PseudoDistribution& mu) {
  require_val_inputs(inst, mu);
  double total = 0.0;
  inst.for_each_constraint(
      [&](int a, int b, int c, std::uint64_t) { total += triple_violation(inst, mu, a, b, c); });
  return inst.num_constraints() ? total / static_cast<double>(inst.num_constraints()) : 0.0;
}

double pd_val(const Nae3Instance& inst, const PseudoDistribution& mu, VarSet w) {
  require_val_inputs(inst, mu);
  double total = 0.0;
  std::uint64_t count = 0;
  inst.for_each_constraint([&](int a, int b, int c, std::uint64_t) {
    if (!contains(w, a) || !contains(w, b) || !contains(w, c)) return;
    total += triple_violation(inst, mu, a, b, c);
    ++count;
  });
  return count ? total / static_cast<double>(count) : 0.0;
}

double pd_correlation_diag(const PseudoDistribution& mu, VarSet t) {
  require(set_size(t) >= 2 && set_size(t) <= mu.max_size(), ErrorCode::kInvalidArgument,
          "correlation diagnostic needs 2 <= |T| <= degree");
  const auto vars = members(t);
  const auto probs = mu.local(t);
  double kl = 0.0;
  for (std::size_t idx = 0; idx < probs.size(); ++idx) {
    if (probs[idx] <= 0.0) continue;
    double q = 1.0;
    for (std::size_t j = 0; j < vars.size(); ++j) {
      const double p1 = mu.prob_one(vars[j]);
      q *= ((idx >> (vars.size() - 1 - j)) & 1U) ? p1 : 1.0 - p1;
    }
    if (q <= 0.0) return std::numeric_limits<double>::infinity();
    kl += probs[idx] * std::log(probs[idx] / q);
  }
  return std::max(kl, 0.0);
}

void pd_clamp(PseudoDistribution& mu, double tol) {
  mu.for_each_local_mut([&](VarSet s, std::span<double> probs) {
    double sum = 0.0;
    for (double& p : probs) {
      if (p < -tol)
        fail(ErrorCode::kDecode, "local probability " + std::to_string(p) + " on subset mask " +
                                     std::to_string(s) + " is below -tolerance");
      if (p < 0.0) p = 0.0;
      sum += p;
    }
    if (sum > 0.0)
      for (double& p : probs) p /= sum;
  });
}

void write_dump(std::ostream& out, const PseudoDistribution& mu) {
  mu.for_each_local([&](VarSet s, std::span<const double> probs) {
    out << '{';
    bool first = true;
    for (int v : members(s)) {
      out << (first ? "" : ",") << v;
      first = false;
    }
    out << "}:";
    for (double p : probs) out << ' ' << p;
    out << '\n';
  });
}

}  // namespace ccsp
