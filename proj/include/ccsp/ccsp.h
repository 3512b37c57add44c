/* C interface to the ccsp toolkit. Every call returns a ccsp_status; on
 * failure ccsp_last_error() holds a message for the calling thread. Strings
 * returned through char** are owned by the caller and released with
 * ccsp_string_free. */
#ifndef CCSP_CCSP_H
#define CCSP_CCSP_H

#include <stdint.h>

#if defined(_WIN32)
#define CCSP_API __declspec(dllexport)
#else
#define CCSP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ccsp_status {
  CCSP_OK = 0,
  CCSP_INVALID_ARGUMENT = 1,
  CCSP_MISSING_CONSTRAINT = 2,
  CCSP_PARSE = 3,
  CCSP_SIZE = 4,
  CCSP_UNSUPPORTED_CONDITIONING = 5,
  CCSP_BUDGET = 6,
  CCSP_DECODE = 7,
  CCSP_INFEASIBLE = 8,
  CCSP_ITERATION_LIMIT = 9,
  CCSP_INCOMPLETE = 10,
  CCSP_CONTRACT = 11,
  CCSP_IO = 12,
  CCSP_INTERNAL = 13
} ccsp_status;

typedef struct ccsp_instance ccsp_instance;

typedef struct ccsp_solve_options {
  int degree;
  int lp_form; /* 0 = moments, 1 = locals */
  uint64_t max_variables;
  int allow_incomplete;
  double tau;     /* <= 0: derived from n */
  double epsilon; /* <= 0: derived from n */
  int t_pairs;
  int r_max;
  int samples;
  int n_bruteforce;
  double delta_2sat_threshold_factor;
  double log_floor;
  uint64_t seed;
  int emit_trace;
  int opt_cap;
  int simple_baseline;
} ccsp_solve_options;

typedef struct ccsp_decide_options {
  int incremental;
  int shuffle;
  uint64_t seed;
  double survivor_cap_multiple;
  int emit_witness;
} ccsp_decide_options;

CCSP_API const char* ccsp_version(void);
CCSP_API const char* ccsp_last_error(void);
CCSP_API const char* ccsp_status_name(ccsp_status status);
CCSP_API void ccsp_string_free(char* s);

CCSP_API void ccsp_solve_options_default(ccsp_solve_options* opts);
CCSP_API void ccsp_decide_options_default(ccsp_decide_options* opts);

CCSP_API ccsp_status ccsp_instance_read(const char* path, ccsp_instance** out);
CCSP_API ccsp_status ccsp_instance_parse(const char* text, ccsp_instance** out);
CCSP_API ccsp_status ccsp_instance_write(const ccsp_instance* inst, const char* path);
CCSP_API ccsp_status ccsp_instance_text(const ccsp_instance* inst, char** out);
CCSP_API void ccsp_instance_free(ccsp_instance* inst);

/* arity is 3 for NAE instances. */
CCSP_API ccsp_status ccsp_instance_info(const ccsp_instance* inst, int* n, int* arity,
                                        int* is_nae, uint64_t* constraints, int* complete);
CCSP_API ccsp_status ccsp_instance_hash(const ccsp_instance* inst, uint64_t* hash);

CCSP_API ccsp_status ccsp_gen_random(int n, uint64_t seed, ccsp_instance** out);
/* sidecar_json receives the planted assignment and its violated count. */
CCSP_API ccsp_status ccsp_gen_planted(int n, double corruption, uint64_t seed, ccsp_instance** out,
                                      char** sidecar_json);
/* Dense instance from the clauses of an NAE instance; max_total_n <= 0 means 64. */
CCSP_API ccsp_status ccsp_gen_dense(const ccsp_instance* clauses, double eps, int max_total_n,
                                    ccsp_instance** out);
/* NAE instance rewritten as a 3-CSP with explicit truth tables. */
CCSP_API ccsp_status ccsp_to_kcsp(const ccsp_instance* inst, ccsp_instance** out);

/* The report functions write a JSON document to *report_json. */
CCSP_API ccsp_status ccsp_solve(const ccsp_instance* inst, const ccsp_solve_options* opts,
                                char** report_json);
CCSP_API ccsp_status ccsp_decide(const ccsp_instance* inst, const ccsp_decide_options* opts,
                                 char** report_json);
CCSP_API ccsp_status ccsp_oracle(const ccsp_instance* inst, int count, char** report_json);
/* Returns CCSP_OK even when individual runs fail; see aggregate.failures. */
CCSP_API ccsp_status ccsp_bench(const char* suite_json, char** report_json);
/* Machine-readable record for a status and the current error message. */
CCSP_API ccsp_status ccsp_error_json(ccsp_status status, char** out);

/* Writes the relaxation as free-format MPS. */
CCSP_API ccsp_status ccsp_export_lp(const ccsp_instance* inst, int degree, int lp_form,
                                    const char* path);

#ifdef __cplusplus
}
#endif

#endif /* CCSP_CCSP_H */
