#pragma once

#include <cstdint>
#include <string>

#include "ccsp/errors.hpp"
#include "ccsp/instance.hpp"
#include "ccsp/kcsp.hpp"
#include "ccsp/rounding.hpp"
#include "ccsp/salp.hpp"
#include "json.hpp"

namespace ccsp {

inline constexpr const char* kReportSchema = "ccsp-report/1";

const char* toolkit_version();

struct SolveOptions {
  int degree = 3;
  SaLpOptions lp;
  RoundingConfig rounding;
  bool emit_trace = false;
  /// Exact optimum is computed only up to this many variables.
  int opt_cap = 20;
  /// Also run the one-pair ablation rounding.
  bool simple_baseline = true;
};

/// Relaxation, rounding and ratio measurement for one instance.
nlohmann::json run_solve(const Nae3Instance& inst, const SolveOptions& opts);

/// Verdict and survivor statistics; the witness is verified before it is
/// emitted.
nlohmann::json run_decide(const KcspInstance& inst, const DecideOptions& opts, bool emit_witness);

/// Exhaustive reference answers: OPT for NAE instances, the verdict for k-CSPs.
/// With `count`, also the number of optimal (or satisfying) assignments.
nlohmann::json run_oracle(const AnyInstance& inst, bool count);

/// Runs a grid of planted instances. Suite keys: n, p, seeds, degree (arrays)
/// and an optional config object with rounding overrides.
nlohmann::json run_bench(const nlohmann::json& suite);

nlohmann::json error_record(ErrorCode code, const std::string& message);

/// Median of the finite values, NaN if there are none.
double median_of(std::vector<double> values);

/// Hex form of content_hash.
std::string hash_string(const AnyInstance& inst);

}  // namespace ccsp
