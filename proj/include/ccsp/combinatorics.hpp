#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace ccsp {

/// Variable subset of a universe of at most 64 variables, one bit per variable.
using VarSet = std::uint64_t;

inline constexpr int kMaxSetVars = 64;

/// Binomial coefficient C(n, k); saturates at UINT64_MAX instead of wrapping.
std::uint64_t binomial(int n, int k);

/// Sum of C(n, j) for j = 0..k.
std::uint64_t binomial_prefix(int n, int k);

inline int set_size(VarSet s) { return std::popcount(s); }
inline VarSet singleton(int v) { return VarSet{1} << v; }
inline bool contains(VarSet s, int v) { return (s >> v) & 1U; }

/// Colexicographic rank of a k-subset among all k-subsets of [n]. The rank does
/// not depend on n, which is what makes it usable as a flat-array index.
std::uint64_t colex_rank(VarSet s);

/// Inverse of colex_rank for subsets of size k.
VarSet colex_unrank(std::uint64_t rank, int k);

/// Colex rank of a sorted index list.
std::uint64_t colex_rank(const std::vector<int>& sorted_vars);

/// Members of s in ascending order.
std::vector<int> members(VarSet s);

VarSet make_set(const std::vector<int>& vars);

/// Index of an assignment over `s` given as a value mask over variables: the
/// smallest variable of `s` is the most significant bit of the index.
inline std::uint32_t gather_index(VarSet s, VarSet values) {
  std::uint32_t idx = 0;
  while (s) {
    const int v = std::countr_zero(s);
    idx = (idx << 1) | static_cast<std::uint32_t>((values >> v) & 1U);
    s &= s - 1;
  }
  return idx;
}

/// Inverse of gather_index: value mask (restricted to s) for an assignment index.
inline VarSet scatter_index(VarSet s, std::uint32_t idx) {
  VarSet values = 0;
  int pos = set_size(s) - 1;
  while (s) {
    const int v = std::countr_zero(s);
    if ((idx >> pos) & 1U) values |= singleton(v);
    --pos;
    s &= s - 1;
  }
  return values;
}

/// Calls f(subset) for every k-subset of [n] in lexicographic order of the
/// sorted member lists.
template <class F>
void for_each_lex_subset(int n, int k, F&& f) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    f(static_cast<const std::vector<int>&>(idx));
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

/// Calls f(set, rank) for every k-subset of [n] in colex order, so `rank`
/// counts up from 0 (Gosper's hack walks k-bit masks in increasing value).
template <class F>
void for_each_colex_subset(int n, int k, F&& f) {
  if (k < 0 || k > n) return;
  if (k == 0) {
    f(VarSet{0}, std::uint64_t{0});
    return;
  }
  const VarSet first = k == 64 ? ~VarSet{0} : (VarSet{1} << k) - 1;
  const VarSet last = first << (n - k);
  VarSet s = first;
  for (std::uint64_t rank = 0;; ++rank) {
    f(s, rank);
    if (s == last) return;
    const VarSet c = s & (~s + 1);
    const VarSet r = s + c;
    s = (((r ^ s) >> 2) / c) | r;
  }
}

/// Calls f(subset_mask) for every subset of `s` (including empty and s itself).
template <class F>
void for_each_subset(VarSet s, F&& f) {
  VarSet sub = s;
  while (true) {
    f(sub);
    if (sub == 0) return;
    sub = (sub - 1) & s;
  }
}

}  // namespace ccsp
