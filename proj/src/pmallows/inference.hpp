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
#pragma once

// Bayesian fitting of the partial-ranking Mallows model: priors, censored
// likelihood, Metropolis-within-Gibbs MCMC and MAP extraction.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pmallows/mallows.hpp"
#include "pmallows/rankings.hpp"

namespace pmallows {

// Normal(location, scale) restricted to (0, inf).
struct TruncatedNormal {
  double location = 0.0;
  double scale = 1.0;

  double log_density(double x) const;
};

// Spread used by the Mallows prior on the center: the current λ, or a
// fixed value independent of it.
struct CenterPriorSpread {
  enum class Mode { kCoupled, kFixed };
  Mode mode = Mode::kCoupled;
  double value = 1.0;

  static CenterPriorSpread coupled() { return {}; }
  static CenterPriorSpread fixed(double lambda) {
    return {Mode::kFixed, lambda};
  }
};

struct PriorConfig {
  TruncatedNormal lambda_prior;
  CentralRanking center;
  CenterPriorSpread center_spread;

  explicit PriorConfig(CentralRanking prior_center,
                       CenterPriorSpread spread = CenterPriorSpread::coupled(),
                       TruncatedNormal lambda = {})
      : lambda_prior(lambda),
        center(std::move(prior_center)),
        center_spread(spread) {}
};

// RESTRICTED normalizes each respondent over its observed-item subspace;
// GLOBAL uses the full-space partition function for every respondent.
enum class LikelihoodNormalization { kRestricted, kGlobal };

const char* to_string(LikelihoodNormalization mode);

struct McmcConfig {
  std::size_t iterations = 1500;
  std::size_t burn_in = 500;
  std::size_t thinning = 1;
  double lambda_init = 1.0;
  // 0 pins λ at lambda_init.
  double lambda_proposal_scale = 0.1;
  std::uint64_t seed = 0;
  LikelihoodNormalization normalization = LikelihoodNormalization::kRestricted;
  // Chain start; the prior center when unset.
  std::optional<CentralRanking> initial_center;

  void validate() const;
  std::size_t retained_count() const;
};

struct McmcSample {
  std::size_t iteration = 0;
  CentralRanking center;
  double lambda = 0.0;
  double log_posterior = 0.0;
};

struct McmcTrace {
  std::vector<McmcSample> samples;
  double center_acceptance = 0.0;
  double lambda_acceptance = 0.0;
};

// Row-major items x stages matrix.
struct StageMarginals {
  std::size_t items = 0;
  int stages = 0;
  std::vector<double> values;

  double at(std::size_t item, int stage) const {
    return values[item * static_cast<std::size_t>(stages) +
                  static_cast<std::size_t>(stage - 1)];
  }
};

struct FitResult {
  CentralRanking center_map;
  double lambda_map;
  McmcTrace trace;
  StageMarginals marginals;
};

double log_likelihood(std::span<const PartialRanking> data,
                      const MallowsParams& params, const DistanceConfig& cfg,
                      PartitionCache& cache, LikelihoodNormalization mode);

// Returns -inf for lambda <= 0.
double log_prior(const CentralRanking& center, double lambda,
                 const PriorConfig& prior, const DistanceConfig& cfg,
                 PartitionCache& cache);

double log_posterior(std::span<const PartialRanking> data,
                     const CentralRanking& center, double lambda,
                     const PriorConfig& prior, const DistanceConfig& cfg,
                     PartitionCache& cache, LikelihoodNormalization mode);

FitResult mcmc_fit(std::span<const PartialRanking> data,
                   const PriorConfig& prior, const McmcConfig& mcmc,
                   const DistanceConfig& cfg, PartitionCache& cache);

// Highest stored log-posterior; the earliest sample wins ties.
const McmcSample& map_estimate(const McmcTrace& trace);

StageMarginals stage_marginals(const McmcTrace& trace);

}  // namespace pmallows
