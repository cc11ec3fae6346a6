/* Copyright 2026 The Curate Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the curation library.
 *
 * All state lives in an opaque curate_context. Every call returns a
 * curate_status; on failure curate_last_error() holds a message until the
 * next call on the same context. A context must not be used from two threads
 * at once; distinct contexts are independent.
 *
 * Path arguments accept "-" for stdin (inputs) or stdout (outputs).
 */

#ifndef CURATE_CURATE_H_
#define CURATE_CURATE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CURATE_API __declspec(dllexport)
#else
#define CURATE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum curate_status {
  CURATE_OK = 0,
  CURATE_INVALID_ARGUMENT = 1, /* bad config value, flag or precondition */
  CURATE_DATA = 2,             /* malformed input, I/O failure */
  CURATE_SERVICE = 3,          /* assessment service failure */
  CURATE_INTERNAL = 4
} curate_status;

typedef struct curate_context curate_context;

CURATE_API const char* curate_version(void);

CURATE_API curate_context* curate_context_new(void);
CURATE_API void curate_context_free(curate_context* ctx);

/* Message of the last failed call, or "" when the last call succeeded. */
CURATE_API const char* curate_last_error(const curate_context* ctx);

/* Record-level errors (malformed lines, rejected samples) from the last stage
 * call. A stage that hit record errors still writes its output and then
 * returns CURATE_DATA. */
CURATE_API size_t curate_record_error_count(const curate_context* ctx);
CURATE_API const char* curate_record_error(const curate_context* ctx, size_t index);

/* Non-fatal notes from the last stage call, e.g. negative scores. */
CURATE_API size_t curate_warning_count(const curate_context* ctx);
CURATE_API const char* curate_warning(const curate_context* ctx, size_t index);

/* Configuration. Keys are listed by curate_config_key_name. "defaults" as a
 * path resets to built-in defaults. */
CURATE_API curate_status curate_config_load(curate_context* ctx, const char* path);
CURATE_API curate_status curate_config_set(curate_context* ctx, const char* key,
                                           const char* value);
/* Copies the value (NUL-terminated) into buf. *needed receives the size
 * including the terminator; a too-small buffer gives CURATE_INVALID_ARGUMENT. */
CURATE_API curate_status curate_config_get(curate_context* ctx, const char* key,
                                           char* buf, size_t buf_size, size_t* needed);
CURATE_API size_t curate_config_key_count(void);
CURATE_API const char* curate_config_key_name(size_t index);
/* CURATE_INVALID_ARGUMENT with every violation in curate_last_error. */
CURATE_API curate_status curate_config_validate(curate_context* ctx);

CURATE_API void curate_set_seed(curate_context* ctx, uint64_t seed);
CURATE_API void curate_set_jobs(curate_context* ctx, size_t jobs);
CURATE_API curate_status curate_set_quality_endpoint(curate_context* ctx,
                                                     const char* endpoint);
/* Deterministic offline judge. fail_every > 0 fails the first attempt of
 * every fail_every-th sample. */
CURATE_API void curate_set_quality_stub(curate_context* ctx, uint64_t seed,
                                        size_t fail_every);
/* Backoff waits are skipped when disabled (tests, dry runs). */
CURATE_API void curate_set_retry_sleep(curate_context* ctx, int enabled);

/* Pipeline stages. */
CURATE_API curate_status curate_score(curate_context* ctx, const char* corpus,
                                      const char* out);
CURATE_API curate_status curate_classify(curate_context* ctx, const char* corpus,
                                         const char* entropy, const char* out);
/* Returns CURATE_SERVICE when any sample could not be assessed; those samples
 * appear as {"id", "error"} lines in the output. */
CURATE_API curate_status curate_assess(curate_context* ctx, const char* corpus,
                                       const char* out);
CURATE_API curate_status curate_filter(curate_context* ctx, const char* corpus,
                                       const char* entropy, const char* quality,
                                       const char* out, const char* drops);
/* stage "S1".."S4"; size < 0 selects the largest feasible manifest;
 * schedule "linear" or "cosine". */
CURATE_API curate_status curate_curriculum(curate_context* ctx, const char* tiers,
                                           const char* out, const char* stage,
                                           double progress, int64_t size,
                                           const char* schedule);
CURATE_API curate_status curate_reward(curate_context* ctx, const char* corpus,
                                       const char* responses, const char* out);
CURATE_API curate_status curate_grpo(curate_context* ctx, const char* fixtures,
                                     const char* out);
/* CURATE_DATA when any case exceeds the fixture tolerance. */
CURATE_API curate_status curate_fusion_verify(curate_context* ctx, const char* fixture,
                                              const char* out);
CURATE_API curate_status curate_fusion_generate(curate_context* ctx, const char* out);
/* mode "distribution", "normalize" or "tiers"; format "text" or "jsonl". */
CURATE_API curate_status curate_stats(curate_context* ctx, const char* mode,
                                      const char* input, const char* format,
                                      const char* out);
/* Writes dir/corpus.jsonl and dir/depth/ with `count` synthetic samples. */
CURATE_API curate_status curate_synth(curate_context* ctx, const char* dir,
                                      size_t count);

/* Numeric entry points; all use the context's config. */
CURATE_API curate_status curate_depth_entropy(curate_context* ctx, const float* depth,
                                              size_t width, size_t height,
                                              double* out);
/* xyz holds n objects as x0,y0,z0,x1,... All count as visible foreground. */
CURATE_API curate_status curate_entropy_3d(curate_context* ctx, const double* xyz,
                                           size_t n, double* out);
/* tier receives 1..4. */
CURATE_API curate_status curate_classify_tier(curate_context* ctx, double h_total,
                                              const char* const* tags, size_t n_tags,
                                              int* tier);
/* keep receives 0 or 1; reason is "", "low-entropy" or "low-quality" and stays
 * valid for the life of the library. */
CURATE_API curate_status curate_retain(curate_context* ctx, double h_total,
                                       double mean_score, int* keep,
                                       const char** reason);
/* Boxes are x_min, y_min, x_max, y_max. */
CURATE_API curate_status curate_score_iou(curate_context* ctx, const double pred[4],
                                          const double gt[4], double* out);
/* task_kind: selection, matching, point, box, open_description. */
CURATE_API curate_status curate_compute_reward(curate_context* ctx, const char* response,
                                               const char* answer, const char* task_kind,
                                               double* r_format, double* r_correct,
                                               double* r_total);
CURATE_API curate_status curate_group_advantages(curate_context* ctx,
                                                 const double* rewards, size_t n,
                                                 double* out);
CURATE_API curate_status curate_normalize_scores(curate_context* ctx,
                                                 const double* scores, size_t n,
                                                 double* out);

#ifdef __cplusplus
}
#endif

#endif /* CURATE_CURATE_H_ */
