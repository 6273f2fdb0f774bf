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
#include "pmallows/pmallows.h"

#include <cmath>
#include <cstdio>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "pmallows/error.hpp"
#include "pmallows/inference.hpp"
#include "pmallows/io.hpp"
#include "pmallows/mallows.hpp"
#include "pmallows/random.hpp"
#include "pmallows/synth.hpp"

struct pm_cache {
  explicit pm_cache(std::uint64_t guard) : rep(guard) {}
  pmallows::PartitionCache rep;
};

struct pm_dataset {
  pmallows::QuestionnaireDataset rep;
};

struct pm_truth {
  pmallows::TruthRecord rep;
};

struct pm_fit {
  pmallows::FitResult rep;
  double p;
};

struct pm_ranking {
  pmallows::LabeledRanking rep;
};

namespace {

thread_local std::string last_error;

pm_status fail(pm_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <typename Fn>
pm_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    fn();
    return PM_OK;
  } catch (const pmallows::CapacityError& e) {
    return fail(PM_ERR_CAPACITY, e.what());
  } catch (const pmallows::FormatError& e) {
    return fail(PM_ERR_FORMAT, e.what());
  } catch (const pmallows::InitializationError& e) {
    return fail(PM_ERR_INIT, e.what());
  } catch (const pmallows::IoError& e) {
    return fail(PM_ERR_IO, e.what());
  } catch (const pmallows::DomainError& e) {
    return fail(PM_ERR_DOMAIN, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(PM_ERR_DOMAIN, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PM_ERR_INTERNAL, e.what());
  }
}

void require(bool condition, const char* what) {
  if (!condition) throw pmallows::DomainError(what);
}

std::vector<int> copy_stages(const int* stages, std::size_t n) {
  require(stages != nullptr, "null stage array");
  return std::vector<int>(stages, stages + n);
}

pmallows::CentralRanking make_center(const int* stages, std::size_t n, int l) {
  return pmallows::CentralRanking(copy_stages(stages, n),
                                  pmallows::StageDomain(l));
}

pmallows::Json parse_manifest(const char* text) {
  if (text == nullptr || *text == '\0') return pmallows::Json::object();
  return pmallows::Json::parse(text);
}

void write_tally(const pmallows::PairTally& t, double p, pm_pair_tally* out) {
  out->concordant = t.concordant;
  out->discordant = t.discordant;
  out->tied_both = t.tied_both;
  out->tied_one = t.tied_one;
  out->dropped = t.dropped;
  out->distance = t.distance(p);
}

}  // namespace

extern "C" {

const char* pm_version(void) { return PMALLOWS_VERSION_STRING; }

const char* pm_last_error(void) { return last_error.c_str(); }

const char* pm_status_name(pm_status status) {
  switch (status) {
    case PM_OK: return "ok";
    case PM_ERR_DOMAIN: return "domain error";
    case PM_ERR_FORMAT: return "format error";
    case PM_ERR_CAPACITY: return "capacity error";
    case PM_ERR_INIT: return "initialization error";
    case PM_ERR_IO: return "i/o error";
    case PM_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

pm_status pm_cache_create(uint64_t enumeration_guard, pm_cache** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    *out = new pm_cache(enumeration_guard == 0
                            ? pmallows::kDefaultEnumerationGuard
                            : enumeration_guard);
  });
}

void pm_cache_destroy(pm_cache* cache) { delete cache; }

pm_status pm_distance(const int* x, const int* y, size_t n, double p,
                      pm_pair_tally* out) {
  return guarded([&] {
    require(out != nullptr && x != nullptr && y != nullptr, "null argument");
    const pmallows::DistanceConfig cfg(p);
    const auto tally = pmallows::tally_pairs({x, n}, {y, n});
    write_tally(tally, cfg.p(), out);
  });
}

pm_status pm_log_partition(const int* center, size_t n, int l, double lambda,
                           double p, pm_cache* cache, double* out) {
  return guarded([&] {
    require(cache != nullptr && out != nullptr, "null argument");
    const pmallows::MallowsParams params(make_center(center, n, l), lambda);
    *out = pmallows::log_partition_function(
        params, pmallows::DistanceConfig(p), cache->rep);
  });
}

pm_status pm_log_pmf(const int* x, const int* center, size_t n, int l,
                     double lambda, double p, pm_cache* cache, double* out) {
  return guarded([&] {
    require(cache != nullptr && out != nullptr && x != nullptr,
            "null argument");
    const pmallows::MallowsParams params(make_center(center, n, l), lambda);
    *out = pmallows::log_pmf({x, n}, params, pmallows::DistanceConfig(p),
                             cache->rep);
  });
}

pm_status pm_sample(const int* center, size_t n, int l, double lambda,
                    double p, uint64_t seed, size_t count, pm_cache* cache,
                    int* out) {
  return guarded([&] {
    require(cache != nullptr && out != nullptr, "null argument");
    const pmallows::MallowsParams params(make_center(center, n, l), lambda);
    pmallows::Rng rng(seed);
    const auto draws = pmallows::sample(params, pmallows::DistanceConfig(p),
                                        cache->rep, rng, count);
    for (std::size_t k = 0; k < draws.size(); ++k) {
      for (std::size_t i = 0; i < n; ++i) out[k * n + i] = draws[k].stage(i);
    }
  });
}

pm_status pm_uniform_ranking(size_t n, int l, uint64_t seed, int* out) {
  return guarded([&] {
    require(out != nullptr && n > 0 && l >= 1, "invalid uniform ranking request");
    pmallows::Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = static_cast<int>(rng.below(static_cast<std::uint64_t>(l))) + 1;
    }
  });
}

pm_status pm_dataset_read(const char* csv_path, const char* sidecar_path,
                          pm_dataset** out) {
  return guarded([&] {
    require(csv_path != nullptr && out != nullptr, "null argument");
    auto ds = sidecar_path != nullptr
                  ? pmallows::read_dataset(csv_path, sidecar_path)
                  : pmallows::read_dataset(csv_path);
    *out = new pm_dataset{std::move(ds)};
  });
}

pm_status pm_dataset_write(const pm_dataset* ds, const char* csv_path,
                           const char* extra_sidecar_json) {
  return guarded([&] {
    require(ds != nullptr && csv_path != nullptr, "null argument");
    pmallows::write_dataset(ds->rep, csv_path,
                            parse_manifest(extra_sidecar_json));
  });
}

void pm_dataset_destroy(pm_dataset* ds) { delete ds; }

size_t pm_dataset_item_count(const pm_dataset* ds) {
  return ds ? ds->rep.items.size() : 0;
}

size_t pm_dataset_respondent_count(const pm_dataset* ds) {
  return ds ? ds->rep.responses.size() : 0;
}

int pm_dataset_stage_count(const pm_dataset* ds) {
  return ds ? ds->rep.domain.max_stage : 0;
}

int pm_dataset_stage_label_offset(const pm_dataset* ds) {
  return ds ? ds->rep.stage_label_offset : 0;
}

const char* pm_dataset_item_label(const pm_dataset* ds, size_t item) {
  if (ds == nullptr || item >= ds->rep.items.size()) return nullptr;
  return ds->rep.items.label(item).c_str();
}

pm_status pm_dataset_stages(const pm_dataset* ds, size_t respondent, int* out) {
  return guarded([&] {
    require(ds != nullptr && out != nullptr, "null argument");
    require(respondent < ds->rep.responses.size(), "respondent out of range");
    const auto stages = ds->rep.responses[respondent].stages();
    std::copy(stages.begin(), stages.end(), out);
  });
}

pm_status pm_dataset_response_rates(const pm_dataset* ds, double* out,
                                    size_t capacity) {
  return guarded([&] {
    require(ds != nullptr && out != nullptr, "null argument");
    const auto rates = pmallows::item_response_rates(ds->rep);
    require(capacity >= rates.size(), "output buffer too small");
    std::copy(rates.begin(), rates.end(), out);
  });
}

pm_status pm_dataset_filter(const pm_dataset* ds, double min_rate,
                            pm_dataset** out, size_t* dropped_respondents) {
  return guarded([&] {
    require(ds != nullptr && out != nullptr, "null argument");
    auto filtered = pmallows::filter_items(ds->rep, min_rate);
    if (dropped_respondents) *dropped_respondents = filtered.dropped_respondents;
    *out = new pm_dataset{std::move(filtered.dataset)};
  });
}

void pm_simulate_config_init(pm_simulate_config* cfg) {
  if (cfg == nullptr) return;
  *cfg = pm_simulate_config{};
  cfg->lambda = 1.0;
  cfg->respondents = 100;
  cfg->censor_location_factor = 0.75;
  cfg->censor_scale = 1.0;
  cfg->p = 0.5;
  cfg->stage_label_offset = 1;
}

pm_status pm_simulate(const pm_simulate_config* cfg, pm_cache* cache,
                      pm_dataset** out_dataset, pm_truth** out_truth) {
  return guarded([&] {
    require(cfg != nullptr && cache != nullptr && out_dataset != nullptr,
            "null argument");
    pmallows::SynthConfig synth{
        pmallows::MallowsParams(make_center(cfg->center, cfg->n, cfg->l),
                                cfg->lambda),
        cfg->respondents,
        cfg->missing_percent,
        cfg->censor_location_factor,
        cfg->censor_scale,
        cfg->seed};
    auto generated =
        pmallows::generate(synth, pmallows::DistanceConfig(cfg->p), cache->rep);

    std::vector<std::string> labels;
    for (std::size_t i = 0; i < cfg->n; ++i) {
      labels.push_back("item" + std::to_string(i + 1));
    }
    const int width =
        static_cast<int>(std::to_string(cfg->respondents).size());
    std::vector<std::string> ids;
    for (std::size_t m = 0; m < cfg->respondents; ++m) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "r%0*zu", width, m + 1);
      ids.emplace_back(buf);
    }
    pmallows::TruthRecord truth{generated.truth.center(),
                                generated.truth.lambda(), {}};
    for (std::size_t m : generated.censored) truth.censored_ids.push_back(ids[m]);

    auto ds = std::make_unique<pm_dataset>(pm_dataset{pmallows::QuestionnaireDataset{
        pmallows::ItemSet(std::move(labels)), pmallows::StageDomain(cfg->l),
        cfg->stage_label_offset, std::move(ids), std::move(generated.responses),
        "synthetic: Mallows draws with right censoring"}});
    if (out_truth) *out_truth = new pm_truth{std::move(truth)};
    *out_dataset = ds.release();
  });
}

pm_status pm_truth_read(const char* path, const pm_dataset* ds, pm_truth** out) {
  return guarded([&] {
    require(path != nullptr && ds != nullptr && out != nullptr, "null argument");
    *out = new pm_truth{pmallows::read_truth(path, ds->rep)};
  });
}

pm_status pm_truth_write(const pm_truth* truth, const pm_dataset* ds,
                         const char* path, const char* manifest_json) {
  return guarded([&] {
    require(truth != nullptr && ds != nullptr && path != nullptr,
            "null argument");
    pmallows::write_truth(truth->rep, ds->rep, path,
                          parse_manifest(manifest_json));
  });
}

void pm_truth_destroy(pm_truth* truth) { delete truth; }

double pm_truth_lambda(const pm_truth* truth) {
  return truth ? truth->rep.lambda : std::nan("");
}

pm_status pm_truth_center(const pm_truth* truth, int* out, size_t n) {
  return guarded([&] {
    require(truth != nullptr && out != nullptr, "null argument");
    require(n == truth->rep.center.size(), "center length mismatch");
    const auto stages = truth->rep.center.stages();
    std::copy(stages.begin(), stages.end(), out);
  });
}

size_t pm_truth_censored_count(const pm_truth* truth) {
  return truth ? truth->rep.censored_ids.size() : 0;
}

void pm_fit_config_init(pm_fit_config* cfg) {
  if (cfg == nullptr) return;
  const pmallows::McmcConfig defaults;
  *cfg = pm_fit_config{};
  cfg->prior_spread = 1.0;
  cfg->lambda_prior_location = 0.0;
  cfg->lambda_prior_scale = 1.0;
  cfg->iterations = defaults.iterations;
  cfg->burn_in = defaults.burn_in;
  cfg->thinning = defaults.thinning;
  cfg->lambda_init = defaults.lambda_init;
  cfg->lambda_proposal_scale = defaults.lambda_proposal_scale;
  cfg->normalization = PM_NORMALIZATION_RESTRICTED;
  cfg->p = 0.5;
}

pm_status pm_fit_run(const pm_dataset* ds, const pm_fit_config* cfg,
                     pm_cache* cache, pm_fit** out) {
  return guarded([&] {
    require(ds != nullptr && cfg != nullptr && cache != nullptr &&
                out != nullptr,
            "null argument");
    require(cfg->prior_center != nullptr, "prior center is required");
    const std::size_t n = ds->rep.items.size();
    const int l = ds->rep.domain.max_stage;
    const pmallows::DistanceConfig dist(cfg->p);

    pmallows::PriorConfig prior(
        make_center(cfg->prior_center, n, l),
        cfg->prior_spread_fixed
            ? pmallows::CenterPriorSpread::fixed(cfg->prior_spread)
            : pmallows::CenterPriorSpread::coupled(),
        pmallows::TruncatedNormal{cfg->lambda_prior_location,
                                  cfg->lambda_prior_scale});
    pmallows::McmcConfig mcmc;
    mcmc.iterations = cfg->iterations;
    mcmc.burn_in = cfg->burn_in;
    mcmc.thinning = cfg->thinning;
    mcmc.lambda_init = cfg->lambda_init;
    mcmc.lambda_proposal_scale = cfg->lambda_proposal_scale;
    mcmc.seed = cfg->seed;
    mcmc.normalization = cfg->normalization == PM_NORMALIZATION_GLOBAL
                             ? pmallows::LikelihoodNormalization::kGlobal
                             : pmallows::LikelihoodNormalization::kRestricted;
    if (cfg->initial_center != nullptr) {
      mcmc.initial_center = make_center(cfg->initial_center, n, l);
    }
    auto result =
        pmallows::mcmc_fit(ds->rep.responses, prior, mcmc, dist, cache->rep);
    *out = new pm_fit{std::move(result), dist.p()};
  });
}

void pm_fit_destroy(pm_fit* fit) { delete fit; }

pm_status pm_fit_map_center(const pm_fit* fit, int* out, size_t n) {
  return guarded([&] {
    require(fit != nullptr && out != nullptr, "null argument");
    require(n == fit->rep.center_map.size(), "center length mismatch");
    const auto stages = fit->rep.center_map.stages();
    std::copy(stages.begin(), stages.end(), out);
  });
}

double pm_fit_lambda_map(const pm_fit* fit) {
  return fit ? fit->rep.lambda_map : std::nan("");
}

double pm_fit_map_log_posterior(const pm_fit* fit) {
  return fit ? pmallows::map_estimate(fit->rep.trace).log_posterior
             : std::nan("");
}

void pm_fit_acceptance(const pm_fit* fit, double* center, double* lambda) {
  if (fit == nullptr) return;
  if (center) *center = fit->rep.trace.center_acceptance;
  if (lambda) *lambda = fit->rep.trace.lambda_acceptance;
}

size_t pm_fit_sample_count(const pm_fit* fit) {
  return fit ? fit->rep.trace.samples.size() : 0;
}

pm_status pm_fit_marginals(const pm_fit* fit, double* out, size_t capacity) {
  return guarded([&] {
    require(fit != nullptr && out != nullptr, "null argument");
    const auto& values = fit->rep.marginals.values;
    require(capacity >= values.size(), "output buffer too small");
    std::copy(values.begin(), values.end(), out);
  });
}

pm_status pm_fit_write_report(const pm_fit* fit, const pm_dataset* ds,
                              const char* path, const char* manifest_json,
                              const pm_truth* truth) {
  return guarded([&] {
    require(fit != nullptr && ds != nullptr && path != nullptr,
            "null argument");
    std::optional<pmallows::Evaluation> evaluation;
    if (truth != nullptr) {
      const auto& r = fit->rep;
      evaluation = pmallows::Evaluation{
          truth->rep.center, truth->rep.lambda,
          pmallows::kendall_tau_partial(truth->rep.center.stages(),
                                        r.center_map.stages(),
                                        pmallows::DistanceConfig(fit->p)),
          std::abs(r.lambda_map - truth->rep.lambda)};
    }
    pmallows::write_fit_report(fit->rep, ds->rep, path,
                               parse_manifest(manifest_json), evaluation);
  });
}

pm_status pm_fit_write_trace(const pm_fit* fit, const pm_dataset* ds,
                             const char* path) {
  return guarded([&] {
    require(fit != nullptr && ds != nullptr && path != nullptr,
            "null argument");
    pmallows::write_trace(fit->rep.trace, path, ds->rep.stage_label_offset);
  });
}

pm_status pm_fit_write_heatmap(const pm_fit* fit, const pm_dataset* ds,
                               const char* path, const char* manifest_json) {
  return guarded([&] {
    require(fit != nullptr && ds != nullptr && path != nullptr,
            "null argument");
    pmallows::write_heatmap_svg(fit->rep.marginals, ds->rep, path,
                                parse_manifest(manifest_json));
  });
}

pm_status pm_ranking_read(const char* path, pm_ranking** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new pm_ranking{pmallows::read_ranking_file(path)};
  });
}

void pm_ranking_destroy(pm_ranking* ranking) { delete ranking; }

size_t pm_ranking_item_count(const pm_ranking* ranking) {
  return ranking ? ranking->rep.items.size() : 0;
}

pm_status pm_ranking_compare(const pm_ranking* a, const pm_ranking* b,
                             double p, pm_pair_tally* out) {
  return guarded([&] {
    require(a != nullptr && b != nullptr && out != nullptr, "null argument");
    const pmallows::DistanceConfig cfg(p);
    const auto [x, y] = pmallows::align_rankings(a->rep, b->rep);
    write_tally(pmallows::tally_pairs(x, y), cfg.p(), out);
  });
}

pm_status pm_ranking_to_center(const pm_ranking* ranking, const pm_dataset* ds,
                               int* out) {
  return guarded([&] {
    require(ranking != nullptr && ds != nullptr && out != nullptr,
            "null argument");
    const auto center = pmallows::center_from_labeled(ranking->rep, ds->rep);
    const auto stages = center.stages();
    std::copy(stages.begin(), stages.end(), out);
  });
}

}  // extern "C"
