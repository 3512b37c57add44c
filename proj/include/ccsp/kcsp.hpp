#pragma once

#include <cstdint>
#include <vector>

#include "ccsp/instance.hpp"

namespace ccsp {

struct DecideOptions {
  /// Check only the constraints that contain the newest variable.
  bool incremental = true;
  /// Seeded variable order instead of input order.
  bool shuffle = false;
  std::uint64_t seed = 0;
  /// Abort when survivors exceed this multiple of n^(k-1).
  double survivor_cap_multiple = 64.0;
};

struct StepStats {
  /// Number of variables in the prefix.
  int prefix = 0;
  std::uint64_t survivors = 0;
  /// survivors / prefix^(k-1).
  double ratio = 0.0;
};

struct DecideResult {
  bool satisfiable = false;
  /// Every satisfying assignment, in original variable indices.
  std::vector<Assignment> solutions;
  std::vector<int> order;
  std::vector<StepStats> steps;
  std::uint64_t max_survivors = 0;
  double max_ratio = 0.0;
};

/// Extends all satisfying assignments of growing variable prefixes.
DecideResult decide_csp(const KcspInstance& inst, const DecideOptions& opts = {});

struct CountResult {
  std::uint64_t count = 0;
  std::uint64_t max_survivors = 0;
  double max_ratio = 0.0;
  std::vector<StepStats> steps;
};

CountResult count_satisfying(const KcspInstance& inst, const DecideOptions& opts = {});

/// Reference verdict by enumerating all 2^n assignments (n <= 24).
bool exhaustive_satisfiable(const KcspInstance& inst);
std::uint64_t exhaustive_count(const KcspInstance& inst);

}  // namespace ccsp
