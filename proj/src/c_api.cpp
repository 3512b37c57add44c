#include "ccsp/ccsp.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>

#include "ccsp/errors.hpp"
#include "ccsp/instance.hpp"
#include "ccsp/report.hpp"

struct ccsp_instance {
  ccsp::AnyInstance value;
};

namespace {

thread_local std::string g_last_error;

ccsp_status set_error(ccsp_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Runs f, translating exceptions into status codes.
template <class F>
ccsp_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return CCSP_OK;
  } catch (const ccsp::Error& e) {
    return set_error(static_cast<ccsp_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return set_error(CCSP_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(CCSP_SIZE, "out of memory");
  } catch (const std::exception& e) {
    return set_error(CCSP_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void need(const void* p, const char* what) {
  if (!p) ccsp::fail(ccsp::ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

const ccsp::Nae3Instance& nae_of(const ccsp_instance* inst) {
  need(inst, "instance");
  const auto* nae = std::get_if<ccsp::Nae3Instance>(&inst->value);
  if (!nae) ccsp::fail(ccsp::ErrorCode::kInvalidArgument, "expected an NAE-3-SAT instance");
  return *nae;
}

ccsp_instance* wrap(ccsp::AnyInstance v) { return new ccsp_instance{std::move(v)}; }

}  // namespace

extern "C" {

const char* ccsp_version(void) { return ccsp::toolkit_version(); }

const char* ccsp_last_error(void) { return g_last_error.c_str(); }

const char* ccsp_status_name(ccsp_status status) {
  if (status == CCSP_OK) return "ok";
  if (status == CCSP_INTERNAL) return "internal";
  return ccsp::error_code_name(static_cast<ccsp::ErrorCode>(status));
}

void ccsp_string_free(char* s) { std::free(s); }

void ccsp_solve_options_default(ccsp_solve_options* o) {
  if (!o) return;
  const ccsp::SolveOptions d;
  o->degree = d.degree;
  o->lp_form = 0;
  o->max_variables = d.lp.max_variables;
  o->allow_incomplete = 0;
  o->tau = d.rounding.tau;
  o->epsilon = d.rounding.epsilon;
  o->t_pairs = d.rounding.t_pairs;
  o->r_max = d.rounding.r_max;
  o->samples = d.rounding.samples_per_stage;
  o->n_bruteforce = d.rounding.n_bruteforce;
  o->delta_2sat_threshold_factor = d.rounding.delta_2sat_threshold_factor;
  o->log_floor = d.rounding.log_floor;
  o->seed = d.rounding.seed;
  o->emit_trace = 0;
  o->opt_cap = d.opt_cap;
  o->simple_baseline = 1;
}

void ccsp_decide_options_default(ccsp_decide_options* o) {
  if (!o) return;
  const ccsp::DecideOptions d;
  o->incremental = 1;
  o->shuffle = 0;
  o->seed = d.seed;
  o->survivor_cap_multiple = d.survivor_cap_multiple;
  o->emit_witness = 0;
}

ccsp_status ccsp_instance_read(const char* path, ccsp_instance** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "output");
    *out = wrap(ccsp::read_instance(path));
  });
}

ccsp_status ccsp_instance_parse(const char* text, ccsp_instance** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "output");
    *out = wrap(ccsp::parse_instance_string(text));
  });
}

ccsp_status ccsp_instance_write(const ccsp_instance* inst, const char* path) {
  return guarded([&] {
    need(inst, "instance");
    need(path, "path");
    ccsp::write_instance(std::filesystem::path(path), inst->value);
  });
}

ccsp_status ccsp_instance_text(const ccsp_instance* inst, char** out) {
  return guarded([&] {
    need(inst, "instance");
    need(out, "output");
    *out = dup_string(std::visit([](const auto& v) { return ccsp::to_text(v); }, inst->value));
  });
}

void ccsp_instance_free(ccsp_instance* inst) { delete inst; }

ccsp_status ccsp_instance_info(const ccsp_instance* inst, int* n, int* arity, int* is_nae,
                               uint64_t* constraints, int* complete) {
  return guarded([&] {
    need(inst, "instance");
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if (n) *n = v.n();
          if (constraints) *constraints = v.num_constraints();
          if (complete) *complete = v.complete() ? 1 : 0;
          if constexpr (std::is_same_v<T, ccsp::Nae3Instance>) {
            if (arity) *arity = 3;
            if (is_nae) *is_nae = 1;
          } else {
            if (arity) *arity = v.k();
            if (is_nae) *is_nae = 0;
          }
        },
        inst->value);
  });
}

ccsp_status ccsp_instance_hash(const ccsp_instance* inst, uint64_t* hash) {
  return guarded([&] {
    need(inst, "instance");
    need(hash, "output");
    *hash = ccsp::content_hash(inst->value);
  });
}

ccsp_status ccsp_gen_random(int n, uint64_t seed, ccsp_instance** out) {
  return guarded([&] {
    need(out, "output");
    *out = wrap(ccsp::gen_random_nae3(n, seed));
  });
}

ccsp_status ccsp_gen_planted(int n, double corruption, uint64_t seed, ccsp_instance** out,
                             char** sidecar_json) {
  return guarded([&] {
    need(out, "output");
    ccsp::PlantedInstance pl = ccsp::gen_planted_nae3(n, corruption, seed);
    if (sidecar_json) {
      const nlohmann::json side{{"schema", ccsp::kReportSchema},
                                {"version", ccsp::toolkit_version()},
                                {"instance_hash", ccsp::hash_string(pl.instance)},
                                {"n", n},
                                {"p", corruption},
                                {"seed", seed},
                                {"planted", pl.planted.to_string()},
                                {"violated_count", pl.violated_count},
                                {"val", ccsp::val_assignment(pl.instance, pl.planted)}};
      *sidecar_json = dup_string(side.dump(2) + "\n");
    }
    *out = wrap(std::move(pl.instance));
  });
}

ccsp_status ccsp_gen_dense(const ccsp_instance* clauses, double eps, int max_total_n,
                           ccsp_instance** out) {
  return guarded([&] {
    need(out, "output");
    const ccsp::Nae3Instance& base = nae_of(clauses);
    std::vector<ccsp::NaeClause> list;
    base.for_each_constraint([&](int a, int b, int c, std::uint64_t rank) {
      const std::uint8_t m = base.neg_mask(rank);
      list.push_back({{a, b, c},
                      {static_cast<ccsp::Polarity>(m & 1), static_cast<ccsp::Polarity>((m >> 1) & 1),
                       static_cast<ccsp::Polarity>((m >> 2) & 1)}});
    });
    *out = wrap(ccsp::densify_reduction(base.n(), list, eps, max_total_n > 0 ? max_total_n : 64));
  });
}

ccsp_status ccsp_to_kcsp(const ccsp_instance* inst, ccsp_instance** out) {
  return guarded([&] {
    need(out, "output");
    *out = wrap(ccsp::nae_to_kcsp(nae_of(inst)));
  });
}

ccsp_status ccsp_solve(const ccsp_instance* inst, const ccsp_solve_options* o, char** report_json) {
  return guarded([&] {
    need(o, "options");
    need(report_json, "output");
    const ccsp::Nae3Instance& nae = nae_of(inst);
    ccsp::SolveOptions s;
    s.degree = o->degree;
    s.lp.form = o->lp_form == 1 ? ccsp::LpForm::kLocals : ccsp::LpForm::kMoments;
    s.lp.max_variables = o->max_variables;
    s.lp.allow_incomplete = o->allow_incomplete != 0;
    s.rounding.tau = o->tau;
    s.rounding.epsilon = o->epsilon;
    s.rounding.t_pairs = o->t_pairs;
    s.rounding.r_max = o->r_max;
    s.rounding.samples_per_stage = o->samples;
    s.rounding.n_bruteforce = o->n_bruteforce;
    s.rounding.delta_2sat_threshold_factor = o->delta_2sat_threshold_factor;
    s.rounding.log_floor = o->log_floor;
    s.rounding.seed = o->seed;
    s.emit_trace = o->emit_trace != 0;
    s.opt_cap = o->opt_cap;
    s.simple_baseline = o->simple_baseline != 0;
    if (!s.lp.allow_incomplete && !nae.complete())
      ccsp::fail(ccsp::ErrorCode::kIncomplete,
                 "instance is not complete; pass --allow-incomplete to solve it anyway");
    *report_json = dup_string(ccsp::run_solve(nae, s).dump(2) + "\n");
  });
}

ccsp_status ccsp_decide(const ccsp_instance* inst, const ccsp_decide_options* o, char** report_json) {
  return guarded([&] {
    need(inst, "instance");
    need(o, "options");
    need(report_json, "output");
    ccsp::DecideOptions d;
    d.incremental = o->incremental != 0;
    d.shuffle = o->shuffle != 0;
    d.seed = o->seed;
    d.survivor_cap_multiple = o->survivor_cap_multiple;
    const ccsp::KcspInstance kc = std::holds_alternative<ccsp::KcspInstance>(inst->value)
                                      ? std::get<ccsp::KcspInstance>(inst->value)
                                      : ccsp::nae_to_kcsp(std::get<ccsp::Nae3Instance>(inst->value));
    *report_json = dup_string(ccsp::run_decide(kc, d, o->emit_witness != 0).dump(2) + "\n");
  });
}

ccsp_status ccsp_oracle(const ccsp_instance* inst, int count, char** report_json) {
  return guarded([&] {
    need(inst, "instance");
    need(report_json, "output");
    *report_json = dup_string(ccsp::run_oracle(inst->value, count != 0).dump(2) + "\n");
  });
}

ccsp_status ccsp_bench(const char* suite_json, char** report_json) {
  return guarded([&] {
    need(suite_json, "suite");
    need(report_json, "output");
    const auto suite = nlohmann::json::parse(suite_json);
    *report_json = dup_string(ccsp::run_bench(suite).dump(2) + "\n");
  });
}

ccsp_status ccsp_error_json(ccsp_status status, char** out) {
  if (!out) return CCSP_INVALID_ARGUMENT;
  const nlohmann::json j{{"schema", ccsp::kReportSchema},
                         {"version", ccsp::toolkit_version()},
                         {"error",
                          {{"code", static_cast<int>(status)},
                           {"name", ccsp_status_name(status)},
                           {"message", g_last_error}}}};
  *out = static_cast<char*>(std::malloc(j.dump().size() + 2));
  if (!*out) return CCSP_SIZE;
  const std::string s = j.dump() + "\n";
  std::memcpy(*out, s.c_str(), s.size() + 1);
  return CCSP_OK;
}

ccsp_status ccsp_export_lp(const ccsp_instance* inst, int degree, int lp_form, const char* path) {
  return guarded([&] {
    need(path, "path");
    ccsp::SaLpOptions o;
    o.form = lp_form == 1 ? ccsp::LpForm::kLocals : ccsp::LpForm::kMoments;
    o.allow_incomplete = true;
    const ccsp::LpProblem p = ccsp::build_sa_lp(nae_of(inst), degree, o);
    std::ofstream f(path);
    if (!f) ccsp::fail(ccsp::ErrorCode::kIo, std::string("cannot open ") + path);
    ccsp::write_lp(f, p);
  });
}

}  // extern "C"
