/* multiga.h - C API for the multi-source genetic optimization engine.
 *
 * All functions returning mga_status set a thread-local message retrievable
 * through mga_last_error() on failure. Strings returned through char** out
 * parameters are owned by the caller and must be released with
 * mga_string_free(). Handles are released with their matching _free().
 */
#ifndef MULTIGA_H
#define MULTIGA_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mga_status {
    MGA_OK = 0,
    MGA_ERR_INVALID_ARG = 1,
    MGA_ERR_CONFIG = 2,
    MGA_ERR_IO = 3,
    MGA_ERR_PARSE = 4,
    MGA_ERR_BACKEND = 5,
    MGA_ERR_RUN = 6,
    MGA_ERR_CANCELLED = 7,
    MGA_ERR_UNKNOWN = 99
} mga_status;

typedef enum mga_termination {
    MGA_TERM_TARGET_REACHED = 0,
    MGA_TERM_BUDGET_EXHAUSTED = 1
} mga_termination;

const char* mga_version(void);

/* Thread-local message describing the most recent failure on this thread. */
const char* mga_last_error(void);
void mga_clear_last_error(void);

void mga_string_free(char* s);

/* --- Run hyperparameters ------------------------------------------------ */

typedef struct mga_ga_config {
    int32_t samples_per_generator; /* >= 1 */
    int32_t top_k;                 /* >= 1 */
    double retire_threshold;       /* in [0,1] */
    int32_t max_generations;       /* >= 1 */
    double target_fitness;         /* in [0,1] */
    uint64_t rng_seed;
    int32_t max_parallel_calls;    /* >= 1 */
    int32_t population_cap;        /* <= 0 means unbounded */
} mga_ga_config;

/* Defaults: s=1, k=3, tau=0.2, T=3, phi=0.95, seed=0, parallel=1, no cap. */
void mga_ga_config_defaults(mga_ga_config* out);

/* --- Task configs --------------------------------------------------------- */

typedef struct mga_taskspec mga_taskspec;

mga_status mga_taskspec_load(const char* path, mga_taskspec** out);
/* name is one of "sql", "meeting", "gpqa", "bbq". */
mga_status mga_taskspec_bundled(const char* name, mga_taskspec** out);
void mga_taskspec_free(mga_taskspec* task);
mga_status mga_taskspec_to_json(const mga_taskspec* task, char** out_json);
const char* mga_taskspec_id(const mga_taskspec* task);

/* --- Backends ------------------------------------------------------------ */

typedef struct mga_backend mga_backend;

/* profile_json: {"name", "endpoint", "model", "auth_token_env",
 * "temperature"?, "max_output_tokens"?, "timeout_ms"?, "max_retries"?,
 * "backoff_ms"?} */
mga_status mga_backend_http(const char* profile_json, mga_backend** out);

/* Deterministic scripted backend handing out replies in order; exhausting
 * the queue is an error. */
mga_status mga_backend_scripted_queue(const char* name, const char* const* replies,
                                      size_t n_replies, mga_backend** out);

/* Scripted backend as a pure function of the prompt. The callback returns a
 * malloc'd string (released by the library with free()), or NULL to signal
 * failure. */
typedef char* (*mga_reply_fn)(const char* system_text, const char* user_text, void* user_data);
mga_status mga_backend_scripted_fn(const char* name, mga_reply_fn fn, void* user_data,
                                   mga_backend** out);

void mga_backend_free(mga_backend* backend);
const char* mga_backend_name(const mga_backend* backend);
int64_t mga_backend_calls_served(const mga_backend* backend); /* scripted only; -1 otherwise */

/* Loads a {"generators":[...], "evaluator":{...}} config document. Each
 * entry is an HTTP profile or {"name", "scripted":{"replies":[...]}} /
 * {"name", "scripted":{"rules":[{"contains","reply"}...], "default"?}}. */
typedef struct mga_backend_set mga_backend_set;
mga_status mga_backend_set_load(const char* config_json, mga_backend_set** out);
void mga_backend_set_free(mga_backend_set* set);
size_t mga_backend_set_generator_count(const mga_backend_set* set);
/* Borrowed references, valid while the set lives. */
mga_backend* mga_backend_set_generator(const mga_backend_set* set, size_t index);
mga_backend* mga_backend_set_evaluator(const mga_backend_set* set);

/* --- Running one optimization -------------------------------------------- */

typedef struct mga_run_result mga_run_result;

/* context_json: flat {"placeholder": "text value", ...} object covering the
 * task's placeholders. For the sql task a "db_path" binding enables query
 * execution in the eval prompt. */
mga_status mga_run(const mga_ga_config* config, mga_backend* const* generators,
                   size_t n_generators, mga_backend* evaluator, const mga_taskspec* task,
                   const char* context_json, mga_run_result** out);

void mga_run_result_free(mga_run_result* result);
mga_status mga_run_result_best_content(const mga_run_result* result, char** out);
double mga_run_result_best_score(const mga_run_result* result);
mga_termination mga_run_result_termination(const mga_run_result* result);
int32_t mga_run_result_generations(const mga_run_result* result);
int64_t mga_run_result_generator_calls(const mga_run_result* result);
int64_t mga_run_result_evaluator_calls(const mga_run_result* result);
mga_status mga_run_result_to_json(const mga_run_result* result, char** out_json);

/* Renders the lineage tree / generation summary from a serialized run. */
mga_status mga_lineage_render(const char* run_result_json, char** out_text);
mga_status mga_summary_render(const char* run_result_json, char** out_text);

/* --- Benchmarks ----------------------------------------------------------- */

typedef struct mga_condition mga_condition;
mga_status mga_condition_new(const char* name, mga_backend* const* generators,
                             size_t n_generators, mga_condition** out);
void mga_condition_free(mga_condition* condition);

/* Returns 0 to keep going, nonzero to cancel after in-flight rows finish. */
typedef int32_t (*mga_progress_fn)(const char* condition, const char* row_id, int32_t correct,
                                   size_t completed, size_t total, void* user_data);

/* Runs dataset rows under every condition, scores each run's best candidate
 * against the row's gold data, checkpoints per-row outcomes under out_dir
 * (benchmark resumes from them after an interruption) and writes
 * report.json / report.txt there. task_kind is one of "sql", "meeting",
 * "gpqa", "bbq". example_store_path may be NULL. */
mga_status mga_benchmark_run(const char* dataset_path, const char* task_kind,
                             mga_condition* const* conditions, size_t n_conditions,
                             mga_backend* evaluator, const mga_taskspec* task,
                             const mga_ga_config* config, const char* out_dir,
                             int32_t parallel_rows, const char* example_store_path,
                             mga_progress_fn progress, void* progress_user_data,
                             char** out_report_json);

/* --- Small utilities exposed for tooling ---------------------------------- */

/* Parses an evaluator fitness reply (first decimal literal, clamped to
 * [0,1], two decimals). MGA_ERR_PARSE when no literal is present. */
mga_status mga_parse_fitness(const char* reply, double* out_score);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MULTIGA_H */
