#include "ccsp/combinatorics.hpp"

#include <array>
#include <limits>

#include "ccsp/errors.hpp"

namespace ccsp {

namespace {

constexpr int kTable = 128;

struct BinomialTable {
  std::array<std::array<std::uint64_t, kTable>, kTable> c{};
  BinomialTable() {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    for (int n = 0; n < kTable; ++n) {
      c[n][0] = 1;
      for (int k = 1; k <= n; ++k) {
        const std::uint64_t a = c[n - 1][k - 1];
        const std::uint64_t b = k <= n - 1 ? c[n - 1][k] : 0;
        c[n][k] = (a > kMax - b) ? kMax : a + b;
      }
    }
  }
};

const BinomialTable& table() {
  static const BinomialTable t;
  return t;
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (n < kTable) return table().c[n][k];
  // Multiplicative formula for the rare large-n case.
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (r > std::numeric_limits<std::uint64_t>::max() / num)
      return std::numeric_limits<std::uint64_t>::max();
    r = r * num / static_cast<std::uint64_t>(i);
  }
  return r;
}

std::uint64_t binomial_prefix(int n, int k) {
  std::uint64_t total = 0;
  for (int j = 0; j <= k && j <= n; ++j) total += binomial(n, j);
  return total;
}

std::uint64_t colex_rank(VarSet s) {
  std::uint64_t rank = 0;
  int j = 1;
  while (s) {
    const int v = std::countr_zero(s);
    rank += binomial(v, j);
    ++j;
    s &= s - 1;
  }
  return rank;
}

std::uint64_t colex_rank(const std::vector<int>& sorted_vars) {
  std::uint64_t rank = 0;
  for (std::size_t j = 0; j < sorted_vars.size(); ++j)
    rank += binomial(sorted_vars[j], static_cast<int>(j) + 1);
  return rank;
}

VarSet colex_unrank(std::uint64_t rank, int k) {
  VarSet s = 0;
  for (int j = k; j >= 1; --j) {
    int v = j - 1;
    while (binomial(v + 1, j) <= rank) ++v;
    rank -= binomial(v, j);
    s |= singleton(v);
  }
  return s;
}

std::vector<int> members(VarSet s) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(set_size(s)));
  while (s) {
    out.push_back(std::countr_zero(s));
    s &= s - 1;
  }
  return out;
}

VarSet make_set(const std::vector<int>& vars) {
  VarSet s = 0;
  for (int v : vars) {
    require(v >= 0 && v < kMaxSetVars, ErrorCode::kInvalidArgument,
            "variable index out of range for a 64-variable set");
    s |= singleton(v);
  }
  return s;
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kMissingConstraint: return "missing-constraint";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kSize: return "size";
    case ErrorCode::kUnsupportedConditioning: return "unsupported-conditioning";
    case ErrorCode::kBudget: return "budget";
    case ErrorCode::kDecode: return "decode";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kIterationLimit: return "iteration-limit";
    case ErrorCode::kIncomplete: return "incomplete";
    case ErrorCode::kContract: return "contract";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace ccsp
