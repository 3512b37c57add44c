// ccsp command-line front end. Talks to the toolkit only through ccsp.h.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ccsp/ccsp.h"
#include "json.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitContract = 4;

int exit_code_for(ccsp_status s) {
  switch (s) {
    case CCSP_OK:
      return kExitOk;
    case CCSP_INVALID_ARGUMENT:
      return kExitUsage;
    case CCSP_MISSING_CONSTRAINT:
    case CCSP_PARSE:
    case CCSP_SIZE:
    case CCSP_BUDGET:
    case CCSP_INCOMPLETE:
    case CCSP_IO:
      return kExitInput;
    default:
      return kExitContract;
  }
}

// Owns a string returned by the library.
struct Owned {
  char* p = nullptr;
  ~Owned() { ccsp_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct Instance {
  ccsp_instance* p = nullptr;
  ~Instance() { ccsp_instance_free(p); }
};

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
  return static_cast<bool>(f);
}

// Prints the error record and returns the process exit code.
int report_failure(ccsp_status s, const std::string& report_path = "") {
  Owned rec;
  ccsp_error_json(s, &rec.p);
  std::cerr << rec.str();
  if (!report_path.empty()) write_file(report_path, rec.str());
  return exit_code_for(s);
}

int emit(const std::string& text, const std::string& report_path) {
  if (report_path.empty()) {
    std::cout << text;
    return kExitOk;
  }
  if (!write_file(report_path, text)) {
    std::cerr << "cannot write " << report_path << '\n';
    return kExitInput;
  }
  return kExitOk;
}

struct GenArgs {
  std::string kind;
  int n = 0;
  double p = 0.0;
  double eps = 0.0;
  int max_n = 64;
  std::string input;
  std::uint64_t seed = 1;
  std::string out;
  std::string sidecar;
  std::string format = "nae3";
};

int cmd_gen(const GenArgs& a) {
  Instance inst;
  Owned side;
  ccsp_status s = CCSP_OK;
  if (a.kind == "random") {
    s = ccsp_gen_random(a.n, a.seed, &inst.p);
  } else if (a.kind == "planted") {
    s = ccsp_gen_planted(a.n, a.p, a.seed, &inst.p, &side.p);
  } else {
    if (a.input.empty()) {
      std::cerr << "gen dense needs --input with a clause file\n";
      return kExitUsage;
    }
    Instance base;
    s = ccsp_instance_read(a.input.c_str(), &base.p);
    if (s == CCSP_OK) s = ccsp_gen_dense(base.p, a.eps, a.max_n, &inst.p);
  }
  if (s != CCSP_OK) return report_failure(s);
  if (a.format == "kcsp") {
    Instance k;
    s = ccsp_to_kcsp(inst.p, &k.p);
    if (s != CCSP_OK) return report_failure(s);
    std::swap(inst.p, k.p);
  }
  Owned text;
  s = ccsp_instance_text(inst.p, &text.p);
  if (s != CCSP_OK) return report_failure(s);
  int rc = emit(text.str(), a.out);
  if (rc != kExitOk) return rc;
  if (side.p) {
    const std::string path = !a.sidecar.empty() ? a.sidecar : (a.out.empty() ? "" : a.out + ".planted.json");
    if (!path.empty()) rc = emit(side.str(), path);
  }
  return rc;
}

struct SolveArgs {
  std::string path;
  std::string report;
  std::string lp_form = "moments";
  std::string export_lp;
  bool no_baseline = false;
};

int cmd_solve(const SolveArgs& a, ccsp_solve_options o) {
  o.lp_form = a.lp_form == "locals" ? 1 : 0;
  o.simple_baseline = a.no_baseline ? 0 : 1;
  Instance inst;
  ccsp_status s = ccsp_instance_read(a.path.c_str(), &inst.p);
  if (s == CCSP_OK && !a.export_lp.empty())
    s = ccsp_export_lp(inst.p, o.degree, o.lp_form, a.export_lp.c_str());
  Owned rep;
  if (s == CCSP_OK) s = ccsp_solve(inst.p, &o, &rep.p);
  if (s != CCSP_OK) return report_failure(s, a.report);
  return emit(rep.str(), a.report);
}

struct DecideArgs {
  std::string path;
  std::string report;
  bool full_check = false;
};

int cmd_decide(const DecideArgs& a, ccsp_decide_options o) {
  o.incremental = a.full_check ? 0 : 1;
  Instance inst;
  ccsp_status s = ccsp_instance_read(a.path.c_str(), &inst.p);
  Owned rep;
  if (s == CCSP_OK) s = ccsp_decide(inst.p, &o, &rep.p);
  if (s != CCSP_OK) return report_failure(s, a.report);
  const json j = json::parse(rep.str());
  std::cout << j["verdict"].get<std::string>() << '\n';
  if (j.contains("witness")) std::cout << j["witness"].get<std::string>() << '\n';
  if (!a.report.empty()) return emit(rep.str(), a.report);
  return kExitOk;
}

int cmd_oracle(const std::string& path, bool exhaustive, const std::string& report) {
  Instance inst;
  ccsp_status s = ccsp_instance_read(path.c_str(), &inst.p);
  Owned rep;
  if (s == CCSP_OK) s = ccsp_oracle(inst.p, exhaustive ? 1 : 0, &rep.p);
  if (s != CCSP_OK) return report_failure(s, report);
  return emit(rep.str(), report);
}

int cmd_bench(const std::string& suite_path, const std::string& out_dir) {
  std::ifstream f(suite_path);
  if (!f) {
    std::cerr << "cannot read " << suite_path << '\n';
    return kExitInput;
  }
  std::stringstream buf;
  buf << f.rdbuf();
  Owned rep;
  const ccsp_status s = ccsp_bench(buf.str().c_str(), &rep.p);
  if (s != CCSP_OK) return report_failure(s);
  std::string target;
  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    target = (std::filesystem::path(out_dir) / "bench.json").string();
  }
  const int rc = emit(rep.str(), target);
  if (rc != kExitOk) return rc;
  const json j = json::parse(rep.str());
  return j["aggregate"]["failures"].get<int>() > 0 ? kExitContract : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complete Min-NAE-3-SAT toolkit: Sherali-Adams relaxation, rounding, k-CSP decision"};
  app.set_version_flag("--version", std::string(ccsp_version()));
  app.set_config("--config", "", "Configuration file (TOML/INI); flags take precedence");
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate an instance");
  g->add_option("kind", gen.kind, "random | planted | dense")
      ->required()
      ->check(CLI::IsMember({"random", "planted", "dense"}));
  g->add_option("-n", gen.n, "Number of variables");
  g->add_option("-p", gen.p, "Corruption probability (planted)")->check(CLI::Range(0.0, 1.0));
  g->add_option("--eps", gen.eps, "Density parameter (dense)");
  g->add_option("--max-n", gen.max_n, "Variable cap for dense instances");
  g->add_option("--input", gen.input, "Clause file (dense)");
  g->add_option("--seed", gen.seed, "Seed");
  g->add_option("-o,--out", gen.out, "Output path (default stdout)");
  g->add_option("--sidecar", gen.sidecar, "Planted sidecar path (default <out>.planted.json)");
  g->add_option("--format", gen.format, "nae3 | kcsp")->check(CLI::IsMember({"nae3", "kcsp"}));

  SolveArgs solve;
  ccsp_solve_options so;
  ccsp_solve_options_default(&so);
  bool allow_incomplete = false, emit_trace = false;
  auto* s = app.add_subcommand("solve", "Relax, round and measure");
  s->add_option("instance", solve.path, "Instance file")->required();
  s->add_option("--degree", so.degree, "Sherali-Adams degree (>= 3)");
  s->add_option("--tau", so.tau, "Aggregate weight (default log^2 n)");
  s->add_option("--epsilon", so.epsilon, "Aggregate slack (default 1/(10 log n))");
  s->add_option("--t-pairs", so.t_pairs, "Pairs per conditioning tuple");
  s->add_option("--r-max", so.r_max, "Extra conditioning budget");
  s->add_option("--samples", so.samples, "Conditioning samples per stage");
  s->add_option("--n-bruteforce", so.n_bruteforce, "Exhaustive completion size");
  s->add_option("--log-floor", so.log_floor, "Minimum value used for log n");
  s->add_option("--max-variables", so.max_variables, "Relaxation size budget");
  s->add_option("--opt-cap", so.opt_cap, "Compute the exact optimum up to this n");
  s->add_option("--lp-form", solve.lp_form, "moments | locals")
      ->check(CLI::IsMember({"moments", "locals"}));
  s->add_option("--export-lp", solve.export_lp, "Also write the relaxation as MPS");
  s->add_option("--seed", so.seed, "Seed");
  s->add_option("--report", solve.report, "Report path (default stdout)");
  s->add_flag("--allow-incomplete", allow_incomplete, "Accept instances with missing triples");
  s->add_flag("--emit-trace", emit_trace, "Include per-stage records");
  s->add_flag("--no-baseline", solve.no_baseline, "Skip the one-pair ablation rounding");

  DecideArgs dec;
  ccsp_decide_options dopt;
  ccsp_decide_options_default(&dopt);
  bool shuffle = false, witness = false;
  auto* d = app.add_subcommand("decide", "Decide satisfiability of a complete k-CSP");
  d->add_option("instance", dec.path, "Instance file")->required();
  d->add_flag("--emit-witness", witness, "Print a verified satisfying assignment");
  d->add_flag("--full-check", dec.full_check, "Re-check every prefix constraint");
  d->add_flag("--shuffle", shuffle, "Seeded variable order");
  d->add_option("--seed", dopt.seed, "Seed for --shuffle");
  d->add_option("--survivor-cap", dopt.survivor_cap_multiple, "Survivor cap as a multiple of n^(k-1)");
  d->add_option("--report", dec.report, "Report path");

  std::string oracle_path, oracle_report;
  bool exhaustive = false;
  auto* o = app.add_subcommand("oracle", "Exhaustive reference answer");
  o->add_option("instance", oracle_path, "Instance file")->required();
  o->add_flag("--exhaustive", exhaustive, "Also count optimal or satisfying assignments");
  o->add_option("--report", oracle_report, "Report path (default stdout)");

  std::string suite_path, out_dir;
  auto* b = app.add_subcommand("bench", "Run a grid of planted instances");
  b->add_option("suite", suite_path, "Suite JSON file")->required();
  b->add_option("--out-dir", out_dir, "Directory for bench.json (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (g->parsed()) return cmd_gen(gen);
  if (s->parsed()) {
    so.allow_incomplete = allow_incomplete ? 1 : 0;
    so.emit_trace = emit_trace ? 1 : 0;
    return cmd_solve(solve, so);
  }
  if (d->parsed()) {
    dopt.shuffle = shuffle ? 1 : 0;
    dopt.emit_witness = witness ? 1 : 0;
    return cmd_decide(dec, dopt);
  }
  if (o->parsed()) return cmd_oracle(oracle_path, exhaustive, oracle_report);
  return cmd_bench(suite_path, out_dir);
}
