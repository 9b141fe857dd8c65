/* Copyright (C) 2026 trendcast contributors
 * SPDX-License-Identifier: Apache-2.0
 *
 * trendcast public C API.
 *
 * Discovers latent styles from item-level attribute data, reconstructs each
 * style's monthly popularity from transaction logs, and forecasts future
 * style and attribute popularity.
 *
 * Conventions:
 *   - Every function returns tc_status; TC_OK is 0.
 *   - On failure, tc_error_message() returns a thread-local description and
 *     tc_error_record() the same as a JSON object string.
 *   - Objects are opaque handles released with their tc_*_free function.
 *     Handles are immutable after creation and safe to share across threads.
 */

#ifndef TRENDCAST_H
#define TRENDCAST_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tc_status {
    TC_OK = 0,
    TC_ERROR_INVALID_ARGUMENT = 1,
    TC_ERROR_MISSING_INPUT = 2,
    TC_ERROR_VALIDATION = 3,
    TC_ERROR_PARSE = 4,
    TC_ERROR_IO = 5,
    TC_ERROR_NUMERIC = 6,
    TC_ERROR_INTERNAL = 7
} tc_status;

const char* tc_version(void);

/* Last error of the calling thread; empty string when no error occurred. */
const char* tc_error_message(void);

/* Last error as a JSON object: {"error":{"kind":...,"message":...}} */
const char* tc_error_record(void);

/* ------------------------------------------------------------------ */
/* Corpus: items + vocabulary (+ optional transactions).              */

typedef struct tc_corpus tc_corpus;

/* transactions_path may be NULL. augment is one of
 * "none", "tags", "text", "tags+text". */
tc_status tc_corpus_load(const char* items_path, const char* vocab_path,
                         const char* transactions_path, const char* augment,
                         tc_corpus** out);
void tc_corpus_free(tc_corpus* corpus);

size_t tc_corpus_items(const tc_corpus* corpus);
size_t tc_corpus_features(const tc_corpus* corpus);     /* rows incl. augmented */
size_t tc_corpus_attributes(const tc_corpus* corpus);   /* attribute rows only */
size_t tc_corpus_transactions(const tc_corpus* corpus);

/* ------------------------------------------------------------------ */
/* Style model (nonnegative factorization into K styles).             */

typedef struct tc_style_model tc_style_model;

tc_status tc_style_fit(const tc_corpus* corpus, int k, double sparsity, int max_iters,
                       double tol, uint64_t seed, tc_style_model** out);
tc_status tc_style_model_save(const tc_style_model* model, const char* path);
tc_status tc_style_model_load(const char* path, tc_style_model** out);
void tc_style_model_free(tc_style_model* model);

int tc_style_model_k(const tc_style_model* model);
size_t tc_style_model_features(const tc_style_model* model);
size_t tc_style_model_items(const tc_style_model* model);

/* Column k of W: p(feature | style), len must be >= feature count. */
tc_status tc_style_weights(const tc_style_model* model, int style, double* out, size_t len);

/* Column j of H: p(style | item), sums to 1; len must be >= K. */
tc_status tc_style_mixture(const tc_style_model* model, int item_index, double* out, size_t len);

/* ------------------------------------------------------------------ */
/* Trajectories.                                                      */

typedef struct tc_trajectories tc_trajectories;

/* Ranges are "YYYY-MM:YYYY-MM"; train/validation/test must be contiguous. */
tc_status tc_trajectories_compute(const tc_style_model* model, const tc_corpus* corpus,
                                  const char* train, const char* validation, const char* test,
                                  tc_trajectories** out);
void tc_trajectories_free(tc_trajectories* trajectories);

int tc_trajectories_styles(const tc_trajectories* trajectories);
int tc_trajectories_months(const tc_trajectories* trajectories);

/* Monthly popularity of one style; len must be >= month count. */
tc_status tc_trajectories_series(const tc_trajectories* trajectories, int style, double* out,
                                 size_t len);

/* ------------------------------------------------------------------ */
/* Forecasting a single series.                                       */

/* model: mean|last|drift|exp|ar|ars|var|arima|tlnn|ffnn.
 * params_json: hyperparameters, e.g. {"alpha":0.4} or {"p":2,"d":1,"q":1};
 * NULL or "" for defaults. out must hold `horizon` values. */
tc_status tc_forecast_series(const double* values, size_t n, const char* model,
                             const char* params_json, int horizon, uint64_t seed, double* out);

/* ------------------------------------------------------------------ */
/* Metrics.                                                           */

tc_status tc_mae(const double* truth, const double* predicted, size_t n, double* out);

/* Zero-truth terms are skipped; *skipped (optional) receives the count. */
tc_status tc_mape(const double* truth, const double* predicted, size_t n, double* out,
                  size_t* skipped);

tc_status tc_kl_divergence(const double* p, const double* q, size_t n, double epsilon,
                           double* out);

/* Scores are aligned by index; ties break toward the lower index. */
tc_status tc_rank_intersection(const double* predicted_scores, const double* true_scores,
                               size_t n, size_t top_n, double* out);

/* ------------------------------------------------------------------ */
/* Pipeline commands (the CLI surface).                               */

/* command: synth | discover | trajectories | forecast | evaluate |
 *          dynamics | attributes | report | sweep-k
 * config_json carries the run configuration; see the README for fields.
 * Artifacts are written under the configured output directory. */
tc_status tc_run_command(const char* command, const char* config_json);

#ifdef __cplusplus
}
#endif

#endif /* TRENDCAST_H */
