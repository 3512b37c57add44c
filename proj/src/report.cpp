#include "ccsp/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ccsp/oracle.hpp"
#include "ccsp/pseudodist.hpp"

namespace ccsp {
namespace {

using nlohmann::json;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// JSON has no infinity; ratios with a zero denominator become null.
json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json stage_json(const StageRecord& s) {
  json j{{"stage", s.stage},
         {"n_unfixed", s.n_unfixed},
         {"degree", s.degree},
         {"delta", s.delta},
         {"cond_size", s.cond_size},
         {"fixed_count", s.fixed_count},
         {"theta", s.theta},
         {"threshold_found", s.threshold_found},
         {"aggregate_before", s.aggregate_before},
         {"aggregate_after", s.aggregate_after},
         {"branch", s.branch}};
  for (int i = 0; i < 4; ++i) {
    j["lp" + std::to_string(i) + "_before"] = s.lp_before.lp[static_cast<std::size_t>(i)];
    j["lp" + std::to_string(i) + "_after"] = s.lp_after.lp[static_cast<std::size_t>(i)];
  }
  return j;
}

json config_json(const SolveOptions& o, const RoundingConfig& r) {
  return {{"degree", o.degree},
          {"lp_form", o.lp.form == LpForm::kLocals ? "locals" : "moments"},
          {"max_variables", o.lp.max_variables},
          {"allow_incomplete", o.lp.allow_incomplete},
          {"tau", r.tau},
          {"epsilon", r.epsilon},
          {"t_pairs", r.t_pairs},
          {"r_max", r.r_max},
          {"samples", r.samples_per_stage},
          {"n_bruteforce", r.n_bruteforce},
          {"delta_2sat_threshold_factor", r.delta_2sat_threshold_factor},
          {"log_floor", r.log_floor},
          {"seed", r.seed},
          {"opt_cap", o.opt_cap}};
}

json envelope(const std::string& command, const AnyInstance& inst) {
  return {{"schema", kReportSchema},
          {"version", toolkit_version()},
          {"command", command},
          {"instance_hash", hash_string(inst)}};
}

}  // namespace

const char* toolkit_version() { return CCSP_VERSION; }

std::string hash_string(const AnyInstance& inst) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(content_hash(inst)));
  return buf;
}

double median_of(std::vector<double> values) {
  std::erase_if(values, [](double x) { return !std::isfinite(x); });
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t h = values.size() / 2;
  return values.size() % 2 ? values[h] : 0.5 * (values[h - 1] + values[h]);
}

json error_record(ErrorCode code, const std::string& message) {
  return {{"schema", kReportSchema},
          {"version", toolkit_version()},
          {"error", {{"code", static_cast<int>(code)}, {"name", error_code_name(code)}, {"message", message}}}};
}

json run_solve(const Nae3Instance& inst, const SolveOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  require(opts.degree >= 3, ErrorCode::kInvalidArgument, "degree must be at least 3");
  require(inst.n() >= 3, ErrorCode::kInvalidArgument, "instance needs at least 3 variables");
  const RoundingConfig cfg = resolve_config(opts.rounding, inst.n());
  json rep = envelope("solve", inst);
  rep["n"] = inst.n();
  rep["m"] = inst.num_constraints();
  rep["complete"] = inst.complete();
  rep["seed"] = cfg.seed;
  rep["config"] = config_json(opts, cfg);

  const LpProblem prob = build_sa_lp(inst, opts.degree, opts.lp);
  const LpSolution sol = solve_lp(prob);
  if (sol.status != LpStatus::kOptimal)
    fail(ErrorCode::kIterationLimit, std::string("relaxation stopped with status ") +
                                         lp_status_name(sol.status));
  const PseudoDistribution mu = lp_to_pd(prob, sol);
  const PdCheckReport chk = pd_check(mu, 1e-6);
  const double lp_time = seconds_since(t0);
  rep["lp"] = {{"value", sol.objective},
               {"iterations", sol.iterations},
               {"residual", sol.residual},
               {"rows", prob.core.rows()},
               {"cols", prob.core.cols()},
               {"pd_check",
                {{"passes", chk.passes},
                 {"max_sum_deviation", chk.max_sum_deviation},
                 {"max_consistency_deviation", chk.max_consistency_deviation},
                 {"min_probability", chk.min_probability}}}};

  const RoundingResult rounded = round_pd(inst, mu, cfg);
  std::vector<NamedAssignment> outputs{{"round_pd", rounded.assignment}};
  if (opts.simple_baseline) outputs.push_back({"round_simple", round_simple(inst, mu, cfg)});
  const RatioReport rr = ratio_report(inst, sol.objective, outputs, opts.opt_cap);

  json outs = json::array();
  for (std::size_t i = 0; i < rr.entries.size(); ++i) {
    const RatioEntry& e = rr.entries[i];
    json o{{"name", e.name},
           {"assignment", outputs[i].assignment.to_string()},
           {"val", e.value},
           {"violated", e.violated},
           {"ratio_lp", finite_or_null(e.ratio_lp)}};
    o["ratio_opt"] = e.ratio_opt ? finite_or_null(*e.ratio_opt) : json(nullptr);
    outs.push_back(o);
  }
  rep["outputs"] = outs;
  rep["opt"] = rr.opt ? json(*rr.opt) : json(nullptr);
  const double floor_lp = std::max(sol.objective, 1.0 / static_cast<double>(inst.num_constraints()));
  rep["val"] = rr.entries.front().value;
  rep["ratio"] = rr.entries.front().value / floor_lp;

  const auto& stages = rounded.trace.stages;
  json tr{{"stages", stages.size()},
          {"final_branch", stages.back().branch},
          {"degree_exhausted", rounded.trace.degree_exhausted},
          {"thresholds_found",
           std::count_if(stages.begin(), stages.end(), [](const StageRecord& s) { return s.threshold_found; })},
          {"stalls", std::count_if(stages.begin(), stages.end(),
                                   [](const StageRecord& s) { return s.branch == "stall"; })}};
  if (opts.emit_trace) {
    json recs = json::array();
    for (const auto& s : stages) recs.push_back(stage_json(s));
    tr["records"] = recs;
  }
  rep["trace"] = tr;
  rep["wall_time"] = {{"lp", lp_time}, {"total", seconds_since(t0)}};
  return rep;
}

json run_decide(const KcspInstance& inst, const DecideOptions& opts, bool emit_witness) {
  const auto t0 = std::chrono::steady_clock::now();
  const DecideResult d = decide_csp(inst, opts);
  json rep = envelope("decide", inst);
  rep["n"] = inst.n();
  rep["k"] = inst.k();
  rep["verdict"] = d.satisfiable ? "yes" : "no";
  rep["config"] = {{"incremental", opts.incremental},
                   {"shuffle", opts.shuffle},
                   {"seed", opts.seed},
                   {"survivor_cap_multiple", opts.survivor_cap_multiple}};
  rep["count"] = d.solutions.size();
  rep["max_survivors"] = d.max_survivors;
  rep["max_ratio"] = d.max_ratio;
  json steps = json::array();
  for (const auto& s : d.steps)
    steps.push_back({{"prefix", s.prefix}, {"survivors", s.survivors}, {"ratio", s.ratio}});
  rep["steps"] = steps;
  if (emit_witness && d.satisfiable) {
    const Assignment& w = d.solutions.front();
    if (count_violated(inst, w) != 0)
      fail(ErrorCode::kContract, "witness " + w.to_string() + " violates a constraint");
    rep["witness"] = w.to_string();
  }
  rep["wall_time"] = {{"total", seconds_since(t0)}};
  return rep;
}

json run_oracle(const AnyInstance& any, bool count) {
  const auto t0 = std::chrono::steady_clock::now();
  json rep;
  if (const auto* nae = std::get_if<Nae3Instance>(&any)) {
    const OptResult r = brute_opt(*nae);
    rep = envelope("oracle", any);
    rep["n"] = nae->n();
    rep["opt"] = r.value;
    rep["opt_violated"] = r.violated;
    rep["assignment"] = r.assignment.to_string();
    rep["verdict"] = r.violated == 0 ? "yes" : "no";
    if (count) {
      std::uint64_t optimal = 0;
      const std::uint64_t total = std::uint64_t{1} << nae->n();
      for (std::uint64_t m = 0; m < total; ++m)
        optimal += count_violated(*nae, Assignment::from_mask(nae->n(), m)) == r.violated;
      rep["count"] = optimal;
    }
  } else {
    const auto& kc = std::get<KcspInstance>(any);
    rep = envelope("oracle", any);
    rep["n"] = kc.n();
    rep["k"] = kc.k();
    if (count) {
      const std::uint64_t c = exhaustive_count(kc);
      rep["count"] = c;
      rep["verdict"] = c ? "yes" : "no";
    } else {
      rep["verdict"] = exhaustive_satisfiable(kc) ? "yes" : "no";
    }
  }
  rep["wall_time"] = {{"total", seconds_since(t0)}};
  return rep;
}

json run_bench(const json& suite) {
  const auto t0 = std::chrono::steady_clock::now();
  auto list = [&](const char* key, json fallback) {
    return suite.contains(key) ? suite.at(key) : fallback;
  };
  const json ns = list("n", json::array());
  const json ps = list("p", json::array({0.0}));
  const json seeds = list("seeds", json::array({1}));
  const json degrees = list("degree", json::array({3}));
  const json cfg = list("config", json::object());

  SolveOptions base;
  base.rounding.tau = cfg.value("tau", 0.0);
  base.rounding.epsilon = cfg.value("epsilon", 0.0);
  base.rounding.t_pairs = cfg.value("t_pairs", 2);
  base.rounding.r_max = cfg.value("r_max", 4);
  base.rounding.samples_per_stage = cfg.value("samples", 200);
  base.rounding.n_bruteforce = cfg.value("n_bruteforce", 14);
  base.opt_cap = cfg.value("opt_cap", 20);
  base.lp.max_variables = cfg.value("max_variables", base.lp.max_variables);

  json runs = json::array();
  std::vector<double> ratios, ratios_opt, stages;
  int failures = 0;
  for (const auto& n : ns)
    for (const auto& p : ps)
      for (const auto& seed : seeds)
        for (const auto& d : degrees) {
          json rec{{"n", n}, {"p", p}, {"seed", seed}, {"degree", d}};
          try {
            const PlantedInstance pl =
                gen_planted_nae3(n.get<int>(), p.get<double>(), seed.get<std::uint64_t>());
            SolveOptions o = base;
            o.degree = d.get<int>();
            o.rounding.seed = seed.get<std::uint64_t>();
            const json r = run_solve(pl.instance, o);
            rec["status"] = "ok";
            rec["planted_violated"] = pl.violated_count;
            rec["instance_hash"] = r["instance_hash"];
            rec["lp_value"] = r["lp"]["value"];
            rec["val"] = r["val"];
            rec["ratio"] = r["ratio"];
            rec["opt"] = r["opt"];
            rec["ratio_opt"] = r["outputs"][0]["ratio_opt"];
            rec["stages"] = r["trace"]["stages"];
            rec["final_branch"] = r["trace"]["final_branch"];
            rec["wall_time"] = r["wall_time"]["total"];
            ratios.push_back(r["ratio"].get<double>());
            if (!r["outputs"][0]["ratio_opt"].is_null())
              ratios_opt.push_back(r["outputs"][0]["ratio_opt"].get<double>());
            stages.push_back(r["trace"]["stages"].get<double>());
          } catch (const Error& e) {
            rec["status"] = "error";
            rec["error"] = {{"code", static_cast<int>(e.code())},
                            {"name", error_code_name(e.code())},
                            {"message", e.what()}};
            ++failures;
          }
          runs.push_back(rec);
        }

  auto med = [](const std::vector<double>& v) { return finite_or_null(median_of(v)); };
  json agg{{"schema", kReportSchema},
           {"version", toolkit_version()},
           {"command", "bench"},
           {"suite", suite},
           {"runs", runs},
           {"aggregate",
            {{"count", runs.size()},
             {"completed", runs.size() - static_cast<std::size_t>(failures)},
             {"failures", failures},
             {"median_ratio", med(ratios)},
             {"median_ratio_opt", med(ratios_opt)},
             {"median_stages", med(stages)}}},
           {"wall_time", {{"total", seconds_since(t0)}}}};
  return agg;
}

}  // namespace ccsp
