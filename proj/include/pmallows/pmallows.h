/*
 * Copyright 2026 The pmallows Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef PMALLOWS_PMALLOWS_H_
#define PMALLOWS_PMALLOWS_H_

/*
 * C interface to pmallows: a Mallows model over partial (tied) and
 * right-censored rankings, fitted by Metropolis-within-Gibbs MCMC.
 *
 * Conventions:
 *  - Every fallible call returns a pm_status; on failure the message is
 *    available from pm_last_error() on the calling thread.
 *  - Rankings cross the boundary as int arrays of internal stages 1..l,
 *    with PM_MISSING (0) for unranked items.
 *  - Handles are opaque and owned by the caller; release them with the
 *    matching *_destroy function (NULL is accepted).
 *  - A pm_cache may be shared by concurrent calls from several threads.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(PMALLOWS_BUILDING_LIBRARY)
#define PM_API __attribute__((visibility("default")))
#else
#define PM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define PM_MISSING 0

typedef enum pm_status {
  PM_OK = 0,
  PM_ERR_DOMAIN = 1,   /* invalid argument or violated precondition */
  PM_ERR_FORMAT = 2,   /* malformed input file */
  PM_ERR_CAPACITY = 3, /* l^n exceeds the enumeration guard */
  PM_ERR_INIT = 4,     /* non-finite log-posterior at the chain start */
  PM_ERR_IO = 5,
  PM_ERR_INTERNAL = 6
} pm_status;

typedef enum pm_normalization {
  PM_NORMALIZATION_RESTRICTED = 0,
  PM_NORMALIZATION_GLOBAL = 1
} pm_normalization;

typedef struct pm_cache pm_cache;
typedef struct pm_dataset pm_dataset;
typedef struct pm_truth pm_truth;
typedef struct pm_fit pm_fit;
typedef struct pm_ranking pm_ranking;

typedef struct pm_pair_tally {
  size_t concordant;
  size_t discordant;
  size_t tied_both;
  size_t tied_one;
  size_t dropped;
  double distance;
} pm_pair_tally;

PM_API const char* pm_version(void);
PM_API const char* pm_last_error(void);
PM_API const char* pm_status_name(pm_status status);

/* Partition-function cache. guard = 0 selects the default of 2^24 points. */
PM_API pm_status pm_cache_create(uint64_t enumeration_guard, pm_cache** out);
PM_API void pm_cache_destroy(pm_cache* cache);

/* Penalized Kendall tau between two rankings of length n. */
PM_API pm_status pm_distance(const int* x, const int* y, size_t n, double p,
                             pm_pair_tally* out);

/* log psi(lambda) for a complete center over {1..l}^n. */
PM_API pm_status pm_log_partition(const int* center, size_t n, int l,
                                  double lambda, double p, pm_cache* cache,
                                  double* out);
PM_API pm_status pm_log_pmf(const int* x, const int* center, size_t n, int l,
                            double lambda, double p, pm_cache* cache,
                            double* out);
/* Writes count * n stages to out, row by row. */
PM_API pm_status pm_sample(const int* center, size_t n, int l, double lambda,
                           double p, uint64_t seed, size_t count,
                           pm_cache* cache, int* out);
/* A uniform draw from {1..l}^n. */
PM_API pm_status pm_uniform_ranking(size_t n, int l, uint64_t seed, int* out);

/* Datasets. sidecar_path may be NULL to use <csv stem>.json. */
PM_API pm_status pm_dataset_read(const char* csv_path, const char* sidecar_path,
                                 pm_dataset** out);
/* extra_sidecar_json: optional JSON object merged into the sidecar. */
PM_API pm_status pm_dataset_write(const pm_dataset* ds, const char* csv_path,
                                  const char* extra_sidecar_json);
PM_API void pm_dataset_destroy(pm_dataset* ds);
PM_API size_t pm_dataset_item_count(const pm_dataset* ds);
PM_API size_t pm_dataset_respondent_count(const pm_dataset* ds);
PM_API int pm_dataset_stage_count(const pm_dataset* ds);
PM_API int pm_dataset_stage_label_offset(const pm_dataset* ds);
PM_API const char* pm_dataset_item_label(const pm_dataset* ds, size_t item);
PM_API pm_status pm_dataset_stages(const pm_dataset* ds, size_t respondent,
                                   int* out);
PM_API pm_status pm_dataset_response_rates(const pm_dataset* ds, double* out,
                                           size_t capacity);
PM_API pm_status pm_dataset_filter(const pm_dataset* ds, double min_rate,
                                   pm_dataset** out,
                                   size_t* dropped_respondents);

/* Synthetic data. */
typedef struct pm_simulate_config {
  size_t n;
  int l;
  const int* center; /* n internal stages */
  double lambda;
  size_t respondents;
  double missing_percent;
  double censor_location_factor;
  double censor_scale;
  uint64_t seed;
  double p;
  int stage_label_offset;
} pm_simulate_config;

PM_API void pm_simulate_config_init(pm_simulate_config* cfg);
PM_API pm_status pm_simulate(const pm_simulate_config* cfg, pm_cache* cache,
                             pm_dataset** out_dataset, pm_truth** out_truth);

PM_API pm_status pm_truth_read(const char* path, const pm_dataset* ds,
                               pm_truth** out);
PM_API pm_status pm_truth_write(const pm_truth* truth, const pm_dataset* ds,
                                const char* path, const char* manifest_json);
PM_API void pm_truth_destroy(pm_truth* truth);
PM_API double pm_truth_lambda(const pm_truth* truth);
PM_API pm_status pm_truth_center(const pm_truth* truth, int* out, size_t n);
PM_API size_t pm_truth_censored_count(const pm_truth* truth);

/* Fitting. */
typedef struct pm_fit_config {
  const int* prior_center;  /* n internal stages, required */
  int prior_spread_fixed;   /* 0: prior spread follows lambda */
  double prior_spread;      /* used when prior_spread_fixed != 0 */
  double lambda_prior_location;
  double lambda_prior_scale;
  const int* initial_center; /* NULL: start at the prior center */
  size_t iterations;
  size_t burn_in;
  size_t thinning;
  double lambda_init;
  double lambda_proposal_scale; /* 0 pins lambda */
  uint64_t seed;
  pm_normalization normalization;
  double p;
} pm_fit_config;

PM_API void pm_fit_config_init(pm_fit_config* cfg);
PM_API pm_status pm_fit_run(const pm_dataset* ds, const pm_fit_config* cfg,
                            pm_cache* cache, pm_fit** out);
PM_API void pm_fit_destroy(pm_fit* fit);
PM_API pm_status pm_fit_map_center(const pm_fit* fit, int* out, size_t n);
PM_API double pm_fit_lambda_map(const pm_fit* fit);
PM_API double pm_fit_map_log_posterior(const pm_fit* fit);
PM_API void pm_fit_acceptance(const pm_fit* fit, double* center,
                              double* lambda);
PM_API size_t pm_fit_sample_count(const pm_fit* fit);
/* items x stages, row-major. */
PM_API pm_status pm_fit_marginals(const pm_fit* fit, double* out,
                                  size_t capacity);
/* truth may be NULL; when given the report carries an evaluation block. */
PM_API pm_status pm_fit_write_report(const pm_fit* fit, const pm_dataset* ds,
                                     const char* path,
                                     const char* manifest_json,
                                     const pm_truth* truth);
PM_API pm_status pm_fit_write_trace(const pm_fit* fit, const pm_dataset* ds,
                                    const char* path);
PM_API pm_status pm_fit_write_heatmap(const pm_fit* fit, const pm_dataset* ds,
                                      const char* path,
                                      const char* manifest_json);

/* Single-ranking files (CSV "item,stage", external labels). */
PM_API pm_status pm_ranking_read(const char* path, pm_ranking** out);
PM_API void pm_ranking_destroy(pm_ranking* ranking);
PM_API size_t pm_ranking_item_count(const pm_ranking* ranking);
/* Aligns b to a by item label. */
PM_API pm_status pm_ranking_compare(const pm_ranking* a, const pm_ranking* b,
                                    double p, pm_pair_tally* out);
/* Complete center over the dataset's items, internal stages. */
PM_API pm_status pm_ranking_to_center(const pm_ranking* ranking,
                                      const pm_dataset* ds, int* out);

#ifdef __cplusplus
}
#endif

#endif  // PMALLOWS_PMALLOWS_H_
