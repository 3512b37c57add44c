#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "ccsp/combinatorics.hpp"
#include "ccsp/instance.hpp"

namespace ccsp {

/// Conditioning on events below this probability is refused.
inline constexpr double kSupportFloor = 1e-9;

/// One local distribution, probabilities indexed like gather_index.
struct LocalDistribution {
  VarSet subset = 0;
  std::vector<double> probs;

  std::vector<int> vars() const { return members(subset); }
};

/// Degree-d family of local distributions, one per subset of size at most
/// min(d, n). Locals are stored densely: all subsets of one size sit in colex
/// rank order, each followed by its 2^|S| probabilities.
class PseudoDistribution {
 public:
  PseudoDistribution() = default;
  /// All locals zero except the empty one, which is 1.
  PseudoDistribution(int n, int degree);

  static PseudoDistribution uniform(int n, int degree);
  /// Independent bits with Pr[v = 1] = p_one[v].
  static PseudoDistribution product(const std::vector<double>& p_one, int degree);
  static PseudoDistribution point_mass(const Assignment& a, int degree);
  /// Convex combination of global assignments; weights are normalized.
  static PseudoDistribution mixture(int n, int degree, const std::vector<Assignment>& support,
                                    const std::vector<double>& weights);

  int n() const { return n_; }
  int degree() const { return degree_; }
  /// Largest stored subset size, min(degree, n).
  int max_size() const { return max_size_; }
  std::uint64_t num_entries() const { return data_.size(); }

  std::uint64_t offset(VarSet s) const {
    return offsets_[static_cast<std::size_t>(set_size(s))] +
           (colex_rank(s) << set_size(s));
  }
  std::span<double> local(VarSet s) {
    return {data_.data() + offset(s), std::size_t{1} << set_size(s)};
  }
  std::span<const double> local(VarSet s) const {
    return {data_.data() + offset(s), std::size_t{1} << set_size(s)};
  }
  /// Pr[v = 1].
  double prob_one(int v) const { return data_[offsets_[1] + 2 * static_cast<std::uint64_t>(v) + 1]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  /// Calls f(S, probs) for every stored local, by size then colex rank.
  template <class F>
  void for_each_local(F&& f) const {
    for (int s = 0; s <= max_size_; ++s) {
      const std::uint64_t width = std::uint64_t{1} << s;
      for_each_colex_subset(n_, s, [&](VarSet set, std::uint64_t rank) {
        f(set, std::span<const double>(data_.data() + offsets_[static_cast<std::size_t>(s)] +
                                           rank * width,
                                       width));
      });
    }
  }

  template <class F>
  void for_each_local_mut(F&& f) {
    for (int s = 0; s <= max_size_; ++s) {
      const std::uint64_t width = std::uint64_t{1} << s;
      for_each_colex_subset(n_, s, [&](VarSet set, std::uint64_t rank) {
        f(set, std::span<double>(data_.data() + offsets_[static_cast<std::size_t>(s)] +
                                     rank * width,
                                 width));
      });
    }
  }

  friend bool operator==(const PseudoDistribution&, const PseudoDistribution&) = default;

 private:
  int n_ = 0;
  int degree_ = 0;
  int max_size_ = 0;
  std::vector<std::uint64_t> offsets_;
  std::vector<double> data_;
};

/// Number of stored probabilities for (n, degree), saturating.
std::uint64_t pd_entry_count(int n, int degree);

struct PdCheckReport {
  double max_sum_deviation = 0.0;
  double max_consistency_deviation = 0.0;
  double min_probability = 0.0;
  VarSet worst_sum_set = 0;
  // Worst consistency witness: the stored local of `worst_sub` against the
  // marginal of the stored local of `worst_super` at assignment `worst_beta`.
  VarSet worst_super = 0;
  VarSet worst_sub = 0;
  std::uint32_t worst_beta = 0;
  bool passes = true;
};

PdCheckReport pd_check(const PseudoDistribution& mu, double tol);

/// Marginal of a local distribution onto target ⊆ local.subset.
LocalDistribution marginalize(const LocalDistribution& local, VarSet target);

/// Stored local for s; |s| must not exceed max_size().
LocalDistribution pd_marginal(const PseudoDistribution& mu, VarSet s);

/// mu conditioned on the variables of s taking the values in `values` (bit v =
/// value of v; bits outside s are ignored). The result has degree
/// degree() - |s|.
PseudoDistribution pd_condition(const PseudoDistribution& mu, VarSet s, VarSet values,
                                double floor = kSupportFloor);

/// mu with the variables of s forced to `values`; every other single-variable
/// marginal is unchanged.
PseudoDistribution pd_fix(const PseudoDistribution& mu, VarSet s, VarSet values);

/// Restriction to the variables of w, re-indexed to 0..|w|-1 in ascending order.
PseudoDistribution pd_restrict(const PseudoDistribution& mu, VarSet w);

/// Violation probability of the present triple a < b < c under mu.
double triple_violation(const Nae3Instance& inst, const PseudoDistribution& mu, int a, int b,
                        int c);

/// Average violation probability over present triples.
double pd_val(const Nae3Instance& inst, const PseudoDistribution& mu);
/// Same, over present triples inside w.
double pd_val(const Nae3Instance& inst, const PseudoDistribution& mu, VarSet w);

/// KL divergence of mu_T from the product of its single-variable marginals.
/// Returns +infinity when the joint puts mass where the product has none.
double pd_correlation_diag(const PseudoDistribution& mu, VarSet t);

/// Sets entries in [-tol, 0) to zero and renormalizes each local; anything
/// more negative throws a decode error.
void pd_clamp(PseudoDistribution& mu, double tol);

/// Debug dump, one line per subset: "{a,b}: p0 p1 ...".
void write_dump(std::ostream& out, const PseudoDistribution& mu);

}  // namespace ccsp
