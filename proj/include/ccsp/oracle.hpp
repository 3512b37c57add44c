#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccsp/instance.hpp"

namespace ccsp {

inline constexpr int kBruteForceCap = 24;

struct OptResult {
  Assignment assignment;
  std::uint64_t violated = 0;
  /// violated / number of constraints.
  double value = 0.0;
};

/// Exact minimizer over all 2^n assignments; ties go to the lexicographically
/// smallest bit string (variable 0 first).
OptResult brute_opt(const Nae3Instance& inst, int cap = kBruteForceCap);

/// Exact minimizer over the completions of a partial assignment.
OptResult completion_opt(const Nae3Instance& inst, const PartialAssignment& alpha,
                         int cap = kBruteForceCap);

/// num/den with 0/0 = 1 and x/0 = +infinity for x > 0.
double safe_ratio(double num, double den);

struct NamedAssignment {
  std::string name;
  Assignment assignment;
};

struct RatioEntry {
  std::string name;
  double value = 0.0;
  std::uint64_t violated = 0;
  double ratio_lp = 0.0;
  std::optional<double> ratio_opt;
};

struct RatioReport {
  int n = 0;
  double lp_value = 0.0;
  std::optional<double> opt;
  std::vector<RatioEntry> entries;
};

/// Values of the named outputs against the LP value and, when n <= cap, the
/// exact optimum.
RatioReport ratio_report(const Nae3Instance& inst, double lp_value,
                         const std::vector<NamedAssignment>& outputs, int cap = kBruteForceCap);

}  // namespace ccsp
