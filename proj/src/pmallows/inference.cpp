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
#include "pmallows/inference.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>

#include "pmallows/error.hpp"
#include "pmallows/random.hpp"

namespace pmallows {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_std_normal_cdf(double x) {
  return std::log(0.5 * std::erfc(-x / std::numbers::sqrt2));
}

void check_respondent(const PartialRanking& x, const CentralRanking& center,
                      std::size_t m) {
  if (x.size() != center.size() || x.max_stage() != center.max_stage()) {
    throw DomainError("respondent " + std::to_string(m) +
                      " is not over the center's items and stages");
  }
}

}  // namespace

double TruncatedNormal::log_density(double x) const {
  if (!(x > 0.0) || !std::isfinite(x)) return kNegInf;
  const double z = (x - location) / scale;
  const double log_mass = log_std_normal_cdf(location / scale);
  return -0.5 * z * z - 0.5 * std::log(2.0 * std::numbers::pi) -
         std::log(scale) - log_mass;
}

const char* to_string(LikelihoodNormalization mode) {
  return mode == LikelihoodNormalization::kRestricted ? "restricted" : "global";
}

void McmcConfig::validate() const {
  if (iterations == 0) throw DomainError("iterations must be positive");
  if (thinning == 0) throw DomainError("thinning must be positive");
  if (burn_in >= iterations) {
    throw DomainError("burn-in (" + std::to_string(burn_in) +
                      ") must be smaller than iterations (" +
                      std::to_string(iterations) + ")");
  }
  if (!(lambda_init > 0.0) || !std::isfinite(lambda_init)) {
    throw DomainError("lambda_init must be positive and finite");
  }
  if (!(lambda_proposal_scale >= 0.0) || !std::isfinite(lambda_proposal_scale)) {
    throw DomainError("lambda proposal scale must be non-negative");
  }
}

std::size_t McmcConfig::retained_count() const {
  return (iterations - burn_in) / thinning;
}

double log_likelihood(std::span<const PartialRanking> data,
                      const MallowsParams& params, const DistanceConfig& cfg,
                      PartitionCache& cache, LikelihoodNormalization mode) {
  if (data.empty()) throw DomainError("empty dataset");
  const CentralRanking& center = params.center();
  const std::size_t n = center.size();
  const int l = center.max_stage();
  const double lambda = params.lambda();

  double distance_sum = 0.0;
  for (std::size_t m = 0; m < data.size(); ++m) {
    check_respondent(data[m], center, m);
    distance_sum += kendall_tau_partial(data[m].stages(), center.stages(), cfg);
  }

  double log_norm = 0.0;
  if (mode == LikelihoodNormalization::kGlobal) {
    log_norm = static_cast<double>(data.size()) *
               cache.log_partition(n, l, structural_class(center.stages()),
                                   lambda, cfg.p());
  } else {
    // Respondents sharing an observed-subspace class share ψ_m.
    std::map<std::pair<std::size_t, StructuralClass>, std::size_t> classes;
    std::vector<int> restricted;
    for (const auto& x : data) {
      restricted.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (x.observed(i)) restricted.push_back(center.stage(i));
      }
      ++classes[{restricted.size(), structural_class(restricted)}];
    }
    for (const auto& [key, count] : classes) {
      log_norm += static_cast<double>(count) *
                  cache.log_partition(key.first, l, key.second, lambda, cfg.p());
    }
  }
  return -distance_sum / lambda - log_norm;
}

double log_prior(const CentralRanking& center, double lambda,
                 const PriorConfig& prior, const DistanceConfig& cfg,
                 PartitionCache& cache) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) return kNegInf;
  if (center.size() != prior.center.size() ||
      center.max_stage() != prior.center.max_stage()) {
    throw DomainError("center and prior center differ in items or stages");
  }
  const double lambda_term = prior.lambda_prior.log_density(lambda);
  const double spread =
      prior.center_spread.mode == CenterPriorSpread::Mode::kCoupled
          ? lambda
          : prior.center_spread.value;
  const double center_term =
      log_pmf(center.stages(), MallowsParams(prior.center, spread), cfg, cache);
  return lambda_term + center_term;
}

double log_posterior(std::span<const PartialRanking> data,
                     const CentralRanking& center, double lambda,
                     const PriorConfig& prior, const DistanceConfig& cfg,
                     PartitionCache& cache, LikelihoodNormalization mode) {
  const double lp = log_prior(center, lambda, prior, cfg, cache);
  if (lp == kNegInf) return kNegInf;
  return log_likelihood(data, MallowsParams(center, lambda), cfg, cache, mode) +
         lp;
}

FitResult mcmc_fit(std::span<const PartialRanking> data,
                   const PriorConfig& prior, const McmcConfig& mcmc,
                   const DistanceConfig& cfg, PartitionCache& cache) {
  mcmc.validate();
  if (data.empty()) throw DomainError("empty dataset");
  if (prior.center_spread.mode == CenterPriorSpread::Mode::kFixed &&
      !(prior.center_spread.value > 0.0)) {
    throw DomainError("fixed prior spread must be positive");
  }
  if (!(prior.lambda_prior.scale > 0.0)) {
    throw DomainError("lambda prior scale must be positive");
  }

  CentralRanking center = mcmc.initial_center.value_or(prior.center);
  double lambda = mcmc.lambda_init;
  const auto mode = mcmc.normalization;
  const std::size_t n = center.size();
  const int l = center.max_stage();

  {
    const double init_prior = log_prior(center, lambda, prior, cfg, cache);
    if (!std::isfinite(init_prior)) {
      throw InitializationError(
          "log-prior is not finite at the initial state (lambda = " +
          std::to_string(lambda) + ")");
    }
    const double init_like = log_likelihood(
        data, MallowsParams(center, lambda), cfg, cache, mode);
    if (!std::isfinite(init_like)) {
      throw InitializationError(
          "log-likelihood is not finite at the initial state (lambda = " +
          std::to_string(lambda) + ")");
    }
  }
  double current =
      log_posterior(data, center, lambda, prior, cfg, cache, mode);

  Rng rng(mcmc.seed);
  const double scale = mcmc.lambda_proposal_scale;
  std::size_t center_accepts = 0;
  std::size_t lambda_accepts = 0;

  FitResult result{center, lambda, {}, {}};
  result.trace.samples.reserve(mcmc.retained_count());

  for (std::size_t t = 1; t <= mcmc.iterations; ++t) {
    // Center: Mallows(center, lambda) proposal. q(a|b) depends on the
    // structural class of b through ψ, hence the Hastings term.
    {
      const MallowsSampler proposal(MallowsParams(center, lambda), cfg, cache);
      CentralRanking candidate = proposal.draw(rng);
      const double u = rng.uniform_open_low();
      const double candidate_post =
          log_posterior(data, candidate, lambda, prior, cfg, cache, mode);
      const double hastings =
          cache.log_partition(n, l, structural_class(center.stages()), lambda,
                              cfg.p()) -
          cache.log_partition(n, l, structural_class(candidate.stages()),
                              lambda, cfg.p());
      const double log_alpha = candidate_post - current + hastings;
      if (log_alpha >= 0.0 || std::log(u) < log_alpha) {
        center = std::move(candidate);
        current = candidate_post;
        ++center_accepts;
      }
    }

    // Spread: normal random walk truncated to (0, inf).
    if (scale > 0.0) {
      double candidate;
      do {
        candidate = rng.normal(lambda, scale);
      } while (!(candidate > 0.0));
      const double u = rng.uniform_open_low();
      const double candidate_post =
          log_posterior(data, center, candidate, prior, cfg, cache, mode);
      const double hastings = log_std_normal_cdf(lambda / scale) -
                              log_std_normal_cdf(candidate / scale);
      const double log_alpha = candidate_post - current + hastings;
      if (log_alpha >= 0.0 || std::log(u) < log_alpha) {
        lambda = candidate;
        current = candidate_post;
        ++lambda_accepts;
      }
    }

    if (t > mcmc.burn_in && (t - mcmc.burn_in) % mcmc.thinning == 0) {
      result.trace.samples.push_back({t, center, lambda, current});
    }
  }

  const auto iterations = static_cast<double>(mcmc.iterations);
  result.trace.center_acceptance = static_cast<double>(center_accepts) / iterations;
  result.trace.lambda_acceptance = static_cast<double>(lambda_accepts) / iterations;

  const McmcSample& best = map_estimate(result.trace);
  result.center_map = best.center;
  result.lambda_map = best.lambda;
  result.marginals = stage_marginals(result.trace);
  return result;
}

const McmcSample& map_estimate(const McmcTrace& trace) {
  if (trace.samples.empty()) throw DomainError("empty trace");
  const McmcSample* best = &trace.samples.front();
  for (const auto& s : trace.samples) {
    if (s.log_posterior > best->log_posterior) best = &s;
  }
  return *best;
}

StageMarginals stage_marginals(const McmcTrace& trace) {
  if (trace.samples.empty()) throw DomainError("empty trace");
  StageMarginals out;
  out.items = trace.samples.front().center.size();
  out.stages = trace.samples.front().center.max_stage();
  out.values.assign(out.items * static_cast<std::size_t>(out.stages), 0.0);
  for (const auto& s : trace.samples) {
    for (std::size_t i = 0; i < out.items; ++i) {
      out.values[i * static_cast<std::size_t>(out.stages) +
                 static_cast<std::size_t>(s.center.stage(i) - 1)] += 1.0;
    }
  }
  const double total = static_cast<double>(trace.samples.size());
  for (double& v : out.values) v /= total;
  return out;
}

}  // namespace pmallows
