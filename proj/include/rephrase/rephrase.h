/* Copyright 2026 The rephrase-eval Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

/* C interface to the rephrase-eval library.
 *
 * Conventions:
 *  - Every function returns an rp_status. On failure, rp_last_error() on the
 *    same thread describes the problem.
 *  - Structured results are returned as NUL-terminated UTF-8 JSON strings
 *    through a char** out-parameter and must be released with rp_string_free.
 *  - Handles are opaque and owned by the caller; release each with its _free
 *    or _destroy function. Passing NULL to a release function is a no-op.
 *  - Configuration objects are passed as JSON text; unknown keys are errors.
 */
#ifndef REPHRASE_REPHRASE_H_
#define REPHRASE_REPHRASE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(RP_BUILDING_LIBRARY)
#define RP_API __attribute__((visibility("default")))
#else
#define RP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rp_status {
  RP_OK = 0,
  RP_INVALID_ARGUMENT = 1,
  RP_IO_ERROR = 2,
  RP_PARSE_ERROR = 3,
  RP_VALIDATION_ERROR = 4,
  RP_BACKEND_ERROR = 5,
  RP_UNREACHABLE = 6,
  RP_STATE_ERROR = 7,
  RP_INTERNAL_ERROR = 8,
  /* Batch outcomes: the call succeeded and wrote its outputs, but some
   * instances failed (PARTIAL) or every instance failed because a backend or
   * provider could not be reached (RUN_UNREACHABLE). */
  RP_PARTIAL = 9,
  RP_RUN_UNREACHABLE = 10
} rp_status;

typedef struct rp_context rp_context;
typedef struct rp_corpus rp_corpus;
typedef struct rp_server rp_server;

typedef struct rp_agreement {
  double kappa;
  double observed_agreement;
  double expected_agreement;
  size_t confusion[5][5]; /* [rating_a - 1][rating_b - 1] */
  size_t n_items;
} rp_agreement;

RP_API const char* rp_version(void);
RP_API const char* rp_status_name(rp_status status);
/* Message for the last failed call on this thread; "" if none. */
RP_API const char* rp_last_error(void);
RP_API void rp_string_free(char* s);

/* Context: prompt templates. templates_dir may be NULL for the built-in set;
 * files missing from the directory fall back to the built-in ones. */
RP_API rp_status rp_context_create(const char* templates_dir, rp_context** out);
RP_API void rp_context_free(rp_context* ctx);

/* Corpus. */
RP_API rp_status rp_corpus_load(const char* path, rp_corpus** out);
RP_API size_t rp_corpus_size(const rp_corpus* corpus);
/* JSON of the record at index (id, hate_text, reference_text, ...). */
RP_API rp_status rp_corpus_record(const rp_corpus* corpus, size_t index, char** out_json);
RP_API rp_status rp_corpus_sample(const rp_corpus* corpus, size_t n, uint64_t seed, rp_corpus** out);
/* format: "jsonl", "csv" or NULL to infer from the extension. */
RP_API rp_status rp_corpus_write(const rp_corpus* corpus, const char* path, const char* format);
RP_API void rp_corpus_free(rp_corpus* corpus);

/* Prompts. kind: task | definition | demonstrations | cot;
 * probe: detection | spans | rephrasing. */
RP_API rp_status rp_prompts_list(const rp_context* ctx, char** out_json);
RP_API rp_status rp_prompt_render(const rp_context* ctx, const char* kind, const char* text,
                                  char** out_prompt);
RP_API rp_status rp_probe_render(const rp_context* ctx, const char* probe, const char* text,
                                 char** out_prompt);

/* Runs the three sub-task probes on one input and returns their responses in
 * order: detection, spans, rephrasing. backend_json as in rp_run's
 * "generation" object. */
RP_API rp_status rp_probe_run(const rp_context* ctx, const char* backend_json, const char* text,
                              char** out_json);

/* Pipeline. config_json keys:
 *   corpus, out, prompt, system_id, max_concurrency, resume, sample, seed,
 *   generation: {backend, model, temperature, max_tokens, timeout_ms,
 *                max_retries, seed, base_url, api_key, mock_rules}
 *   scoring:    {hybrid_threshold, bleu_max_order, providers, providers_file}
 * Writes the run directory and returns a summary (coverage, backend_calls,
 * cache_hits, status). Returns RP_PARTIAL / RP_RUN_UNREACHABLE for batch
 * outcomes; the summary is still set. */
RP_API rp_status rp_run(const rp_context* ctx, const char* config_json, char** out_summary);
/* config_json: {generations, system_id, corpus, out, max_concurrency, scoring} */
RP_API rp_status rp_import(const char* config_json, char** out_summary);
/* config_json: {run, max_concurrency, scoring} */
RP_API rp_status rp_score(const char* config_json, char** out_summary);

/* Report. config_json: {runs: [dir...], format: "markdown"|"csv",
 * with_failure_rate, force}. out_table gets the table text, out_sidecar the
 * unrounded aggregates (either may be NULL). */
RP_API rp_status rp_report(const char* config_json, char** out_table, char** out_sidecar);
/* {failed_ids, scored, rate} for a scores.jsonl file. */
RP_API rp_status rp_failures(const char* scores_path, char** out_json);
/* {rows, violations: [...]} for a CSV with cosine/HIR/Average columns. */
RP_API rp_status rp_check_table(const char* csv_path, double tolerance, char** out_json);

/* Agreement over ratings 1..5. */
RP_API rp_status rp_kappa(const int* a, const int* b, size_t n, rp_agreement* out);
/* Two JSONL files of annotation records (or {item_id, rating} /
 * {item_id, hir_rating, ...}) aligned by item_id. Returns per-metric and
 * pooled agreement as JSON. */
RP_API rp_status rp_kappa_files(const char* path_a, const char* path_b, char** out_json);

/* Annotation study. config_json: {systems: [{system_id, run}], per_system,
 * annotators, seed}. Returns {tasks, expected_records}. */
RP_API rp_status rp_study_create(const char* study_dir, const char* config_json, char** out_json);
RP_API rp_status rp_study_progress(const char* study_dir, char** out_json);
RP_API rp_status rp_study_results(const char* study_dir, int partial, char** out_json);

/* Annotation service over a study directory. static_dir may be NULL. */
RP_API rp_status rp_server_create(const char* study_dir, const char* static_dir, rp_server** out);
/* port 0 binds any free port; the bound port is written to out_port. */
RP_API rp_status rp_server_bind(rp_server* server, const char* host, int port, int* out_port);
/* Blocks until rp_server_stop is called from another thread. */
RP_API rp_status rp_server_listen(rp_server* server);
RP_API void rp_server_stop(rp_server* server);
RP_API void rp_server_destroy(rp_server* server);

#ifdef __cplusplus
}
#endif

#endif /* REPHRASE_REPHRASE_H_ */
