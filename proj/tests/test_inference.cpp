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
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracle.hpp"
#include "pmallows/error.hpp"
#include "pmallows/inference.hpp"

using namespace pmallows;

namespace {

std::vector<PartialRanking> as_data(const std::vector<std::vector<int>>& rows,
                                    int l) {
  std::vector<PartialRanking> out;
  for (const auto& r : rows) out.emplace_back(r, StageDomain(l));
  return out;
}

CentralRanking center_of(std::vector<int> stages, int l) {
  return CentralRanking(std::move(stages), StageDomain(l));
}

std::vector<int> vec(const CentralRanking& c) {
  return {c.stages().begin(), c.stages().end()};
}

}  // namespace

TEST_CASE("likelihood examples") {
  PartitionCache cache;
  const DistanceConfig half(0.5);
  const MallowsParams params(center_of({1, 2, 2}, 3), 0.9);
  const double log_psi = log_partition_function(params, half, cache);
  const auto one = as_data({{1, 2, 2}}, 3);
  for (auto mode : {LikelihoodNormalization::kRestricted,
                    LikelihoodNormalization::kGlobal}) {
    CHECK(log_likelihood(one, params, half, cache, mode) ==
          doctest::Approx(-log_psi).epsilon(1e-13));
  }

  const auto base = as_data({{1, 3, 0}, {2, 2, 1}}, 3);
  std::vector<PartialRanking> tripled;
  for (int k = 0; k < 3; ++k) tripled.insert(tripled.end(), base.begin(), base.end());
  const double single =
      log_likelihood(base, params, half, cache, LikelihoodNormalization::kRestricted);
  CHECK(log_likelihood(tripled, params, half, cache,
                       LikelihoodNormalization::kRestricted) ==
        doctest::Approx(3.0 * single).epsilon(1e-13));

  // One observed item: every stage is equally likely.
  const auto lone = as_data({{0, 3, 0}}, 3);
  CHECK(log_likelihood(lone, params, half, cache,
                       LikelihoodNormalization::kRestricted) ==
        doctest::Approx(-std::log(3.0)).epsilon(1e-13));

  const auto frozen = as_data({{1, 2, 0}, {2, 2, 1}, {0, 0, 3}}, 3);
  CHECK(log_likelihood(frozen, MallowsParams(center_of({1, 2, 3}, 3), 0.8), half,
                       cache, LikelihoodNormalization::kRestricted) ==
        doctest::Approx(-7.811534445119617).epsilon(1e-12));

  CHECK_THROWS_AS(log_likelihood(as_data({{1, 2}}, 3), params, half, cache,
                                 LikelihoodNormalization::kRestricted),
                  DomainError);
}

TEST_CASE("restricted and global agree without missing entries") {
  std::mt19937_64 gen(5);
  PartitionCache cache;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + gen() % 4;
    const int l = 2 + static_cast<int>(gen() % 3);
    std::uniform_int_distribution<int> stage(1, l);
    std::vector<std::vector<int>> rows(6, std::vector<int>(n));
    for (auto& r : rows)
      for (int& s : r) s = stage(gen);
    std::vector<int> c(n);
    for (int& s : c) s = stage(gen);
    const DistanceConfig cfg(0.7);
    const MallowsParams params(center_of(c, l), 1.1);
    const auto data = as_data(rows, l);
    const double r = log_likelihood(data, params, cfg, cache,
                                    LikelihoodNormalization::kRestricted);
    const double g = log_likelihood(data, params, cfg, cache,
                                    LikelihoodNormalization::kGlobal);
    CHECK(r == doctest::Approx(g).epsilon(1e-12));
    CHECK(g == doctest::Approx(oracle::log_likelihood_global(rows, c, l, 1.1, 0.7))
                   .epsilon(1e-10));
  }
}

TEST_CASE("restricted likelihood agrees with naive evaluation under missingness") {
  std::mt19937_64 gen(8);
  PartitionCache cache;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + gen() % 3;
    const int l = 2 + static_cast<int>(gen() % 3);
    std::uniform_int_distribution<int> stage(0, l);
    std::vector<std::vector<int>> rows(5, std::vector<int>(n));
    for (auto& r : rows) {
      for (int& s : r) s = stage(gen);
      if (std::count(r.begin(), r.end(), 0) == static_cast<long>(n)) r[0] = 1;
    }
    std::vector<int> c(n);
    for (int& s : c) s = 1 + static_cast<int>(gen() % static_cast<unsigned>(l));
    const double got = log_likelihood(as_data(rows, l),
                                      MallowsParams(center_of(c, l), 0.6),
                                      DistanceConfig(0.5), cache,
                                      LikelihoodNormalization::kRestricted);
    CHECK(got == doctest::Approx(oracle::log_likelihood_restricted(rows, c, l, 0.6, 0.5))
                     .epsilon(1e-10));
  }
}

TEST_CASE("prior examples") {
  PartitionCache cache;
  const DistanceConfig half(0.5);
  const auto pc = center_of({1, 2, 3}, 3);
  const PriorConfig prior(pc, CenterPriorSpread::fixed(1.0));
  const double center_term =
      -std::log(partition_function(MallowsParams(pc, 1.0), half, cache));
  const double phi1 = std::exp(-0.5) / std::sqrt(2.0 * std::numbers::pi);
  CHECK(log_prior(pc, 1.0, prior, half, cache) - center_term ==
        doctest::Approx(std::log(2.0 * phi1)).epsilon(1e-13));

  CHECK(log_prior(pc, 0.0, prior, half, cache) ==
        -std::numeric_limits<double>::infinity());
  CHECK(log_prior(pc, -1.0, prior, half, cache) ==
        -std::numeric_limits<double>::infinity());

  const PriorConfig coupled(pc);
  for (double lambda : {0.3, 1.0, 2.5}) {
    for (const auto& c : std::vector<std::vector<int>>{{1, 2, 3}, {3, 3, 1}}) {
      CHECK(log_prior(center_of(c, 3), lambda, coupled, half, cache) ==
            doctest::Approx(oracle::log_prior(c, lambda, {1, 2, 3}, 3, lambda, 0.5))
                .epsilon(1e-12));
      CHECK(log_prior(center_of(c, 3), lambda, prior, half, cache) ==
            doctest::Approx(oracle::log_prior(c, lambda, {1, 2, 3}, 3, 1.0, 0.5))
                .epsilon(1e-12));
    }
  }

  const TruncatedNormal tn{0.0, 2.0};
  CHECK(tn.log_density(1e-300) ==
        doctest::Approx(std::log(2.0 / (2.0 * std::sqrt(2.0 * std::numbers::pi)))));
  CHECK(tn.log_density(0.0) == -std::numeric_limits<double>::infinity());
  CHECK(tn.log_density(-0.1) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("mcmc config validation and retained count") {
  McmcConfig cfg;
  CHECK(cfg.retained_count() == 1000);
  cfg.thinning = 3;
  CHECK(cfg.retained_count() == 333);
  cfg.thinning = 0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = McmcConfig{};
  cfg.burn_in = cfg.iterations;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = McmcConfig{};
  cfg.lambda_init = 0.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = McmcConfig{};
  cfg.lambda_proposal_scale = -0.1;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("map_estimate picks the earliest of tied maxima") {
  McmcTrace trace;
  const auto c = center_of({1, 2}, 2);
  trace.samples = {{1, c, 1.0, -3.0}, {2, c, 1.1, -1.0}, {3, c, 1.2, -1.0},
                   {4, c, 1.3, -2.0}};
  CHECK(map_estimate(trace).iteration == 2);
  CHECK_THROWS(map_estimate(McmcTrace{}));
}

TEST_CASE("stage marginals are row-stochastic frequencies") {
  McmcTrace trace;
  trace.samples = {{1, center_of({1, 2, 3}, 3), 1.0, 0.0},
                   {2, center_of({1, 3, 3}, 3), 1.0, 0.0},
                   {3, center_of({1, 3, 2}, 3), 1.0, 0.0},
                   {4, center_of({2, 3, 3}, 3), 1.0, 0.0}};
  const auto m = stage_marginals(trace);
  CHECK(m.items == 3);
  CHECK(m.stages == 3);
  CHECK(m.at(0, 1) == doctest::Approx(0.75));
  CHECK(m.at(0, 2) == doctest::Approx(0.25));
  CHECK(m.at(1, 3) == doctest::Approx(0.75));
  CHECK(m.at(2, 2) == doctest::Approx(0.25));
  for (std::size_t i = 0; i < 3; ++i) {
    double row = 0.0;
    for (int s = 1; s <= 3; ++s) row += m.at(i, s);
    CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("fixed-spread chain matches the exact center conditional") {
  const int l = 2;
  const std::vector<std::vector<int>> rows = {
      {1, 2, 2}, {1, 1, 2}, {2, 2, 1}, {1, 2, 0}, {0, 1, 2}};
  const auto data = as_data(rows, l);
  const std::vector<int> pc = {1, 1, 2};
  const double lambda = 1.0;
  const double p = 0.5;

  const auto points = oracle::all_points(3, l);
  std::vector<double> exact(points.size());
  double norm = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    exact[k] = std::exp(oracle::log_likelihood_restricted(rows, points[k], l, lambda, p) +
                        oracle::log_prior(points[k], lambda, pc, l, 0.8, p));
    norm += exact[k];
  }
  for (double& v : exact) v /= norm;

  PartitionCache cache;
  McmcConfig mcmc;
  mcmc.iterations = 100000;
  mcmc.burn_in = 1000;
  mcmc.lambda_init = lambda;
  mcmc.lambda_proposal_scale = 0.0;
  mcmc.seed = 11;
  const auto fit =
      mcmc_fit(data, PriorConfig(center_of(pc, l), CenterPriorSpread::fixed(0.8)),
               mcmc, DistanceConfig(p), cache);
  std::vector<double> freq(points.size(), 0.0);
  for (const auto& s : fit.trace.samples) {
    CHECK(s.lambda == lambda);
    freq[oracle::index_of(vec(s.center), l)] += 1.0;
  }
  for (double& v : freq) v /= static_cast<double>(fit.trace.samples.size());
  CHECK(oracle::total_variation(freq, exact) <= 0.02);
  CHECK(fit.trace.lambda_acceptance == 0.0);
}

TEST_CASE("MAP on a tiny instance matches brute-force search") {
  const int l = 2;
  const std::vector<std::vector<int>> rows = {
      {1, 2, 2}, {1, 2, 2}, {1, 2, 2}, {1, 1, 2}, {1, 2, 2}, {2, 2, 2}, {1, 2, 1}};
  const std::vector<int> pc = {1, 2, 1};
  const double p = 0.5;

  double best = -1e300;
  std::vector<int> best_center;
  for (const auto& c : oracle::all_points(3, l)) {
    for (int g = 1; g <= 1000; ++g) {
      const double lambda = 0.005 * g;
      const double lp = oracle::log_likelihood_restricted(rows, c, l, lambda, p) +
                        oracle::log_prior(c, lambda, pc, l, lambda, p);
      if (lp > best) {
        best = lp;
        best_center = c;
      }
    }
  }

  PartitionCache cache;
  McmcConfig mcmc;
  mcmc.seed = 3;
  const auto fit = mcmc_fit(as_data(rows, l), PriorConfig(center_of(pc, l)), mcmc,
                            DistanceConfig(p), cache);
  CHECK(vec(fit.center_map) == best_center);
  CHECK(map_estimate(fit.trace).log_posterior <= best + 1e-3);
  CHECK(map_estimate(fit.trace).log_posterior >= best - 0.05);
}

TEST_CASE("chains are reproducible from the seed") {
  const auto data = as_data({{1, 2, 3, 0}, {1, 3, 3, 2}, {2, 2, 3, 1}}, 3);
  const PriorConfig prior(center_of({1, 2, 2, 3}, 3));
  PartitionCache cache;
  McmcConfig mcmc;
  mcmc.iterations = 400;
  mcmc.burn_in = 100;
  mcmc.seed = 99;
  const auto a = mcmc_fit(data, prior, mcmc, DistanceConfig(0.5), cache);
  const auto b = mcmc_fit(data, prior, mcmc, DistanceConfig(0.5), cache);
  REQUIRE(a.trace.samples.size() == 300);
  for (std::size_t k = 0; k < a.trace.samples.size(); ++k) {
    CHECK(a.trace.samples[k].iteration == b.trace.samples[k].iteration);
    CHECK(a.trace.samples[k].center == b.trace.samples[k].center);
    CHECK(a.trace.samples[k].lambda == b.trace.samples[k].lambda);
  }
  CHECK(a.trace.samples.front().iteration == 101);
  mcmc.seed = 100;
  const auto c = mcmc_fit(data, prior, mcmc, DistanceConfig(0.5), cache);
  bool differs = false;
  for (std::size_t k = 0; k < c.trace.samples.size(); ++k)
    differs |= c.trace.samples[k].lambda != a.trace.samples[k].lambda;
  CHECK(differs);
}

TEST_CASE("non-finite starting posterior is rejected") {
  const auto data = as_data({{1, 2}}, 2);
  PartitionCache cache;
  McmcConfig mcmc;
  mcmc.lambda_init = 1e200;
  CHECK_THROWS_AS(mcmc_fit(data, PriorConfig(center_of({1, 2}, 2)), mcmc,
                           DistanceConfig(0.5), cache),
                  InitializationError);
}

TEST_CASE("recovery run mixes and lands near the truth") {
  const int l = 3;
  PartitionCache cache;
  const MallowsParams truth(center_of({1, 2, 2, 3, 1, 3}, l), 0.5);
  Rng rng(2024);
  std::vector<PartialRanking> data;
  for (const auto& x : sample(truth, DistanceConfig(0.5), cache, rng, 60))
    data.emplace_back(std::vector<int>(x.stages().begin(), x.stages().end()),
                      StageDomain(l));
  McmcConfig mcmc;
  mcmc.seed = 5;
  const auto fit = mcmc_fit(data, PriorConfig(center_of({2, 2, 2, 2, 2, 2}, l)),
                            mcmc, DistanceConfig(0.5), cache);
  CHECK(fit.center_map == truth.center());
  CHECK(std::abs(fit.lambda_map - 0.5) < 0.2);
  CHECK(fit.trace.center_acceptance > 0.01);
  CHECK(fit.trace.center_acceptance < 0.99);
  CHECK(fit.trace.lambda_acceptance > 0.05);
  CHECK(fit.trace.lambda_acceptance < 0.95);
}
