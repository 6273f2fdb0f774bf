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
#include "pmallows/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pmallows/error.hpp"
#include "pmallows/random.hpp"

namespace pmallows {

std::size_t censored_count(std::size_t respondents, double missing_percent) {
  if (!(missing_percent >= 0.0 && missing_percent <= 100.0)) {
    throw DomainError("missing percentage must lie in [0, 100], got " +
                      std::to_string(missing_percent));
  }
  return static_cast<std::size_t>(
      std::llround(missing_percent * static_cast<double>(respondents) / 100.0));
}

PartialRanking right_censor(const CentralRanking& ranking, long cut) {
  const std::size_t n = ranking.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return ranking.stage(a) < ranking.stage(b);
                   });
  const long keep = std::max<long>(1, cut - 1);
  std::vector<int> stages(ranking.stages().begin(), ranking.stages().end());
  for (std::size_t pos = static_cast<std::size_t>(keep); pos < n; ++pos) {
    stages[order[pos]] = kMissing;
  }
  return PartialRanking(std::move(stages), StageDomain(ranking.max_stage()));
}

SynthDataset generate(const SynthConfig& cfg, const DistanceConfig& dist,
                      PartitionCache& cache) {
  if (cfg.respondents == 0) throw DomainError("dataset size must be positive");
  const std::size_t to_censor =
      censored_count(cfg.respondents, cfg.missing_percent);
  if (!(cfg.censor_scale >= 0.0)) {
    throw DomainError("censor scale must be non-negative");
  }

  Rng rng(cfg.seed);
  SynthDataset out{{}, sample(cfg.truth, dist, cache, rng, cfg.respondents),
                   cfg.truth, {}};

  // Uniform subset by partial Fisher-Yates.
  std::vector<std::size_t> pool(cfg.respondents);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t k = 0; k < to_censor; ++k) {
    const auto pick = k + static_cast<std::size_t>(rng.below(pool.size() - k));
    std::swap(pool[k], pool[pick]);
  }
  out.censored.assign(pool.begin(), pool.begin() + static_cast<long>(to_censor));
  std::sort(out.censored.begin(), out.censored.end());

  const auto n = static_cast<double>(cfg.truth.center().size());
  std::vector<long> cuts(cfg.respondents, 0);
  for (std::size_t m : out.censored) {
    const double draw =
        rng.normal(cfg.censor_location_factor * n, cfg.censor_scale);
    cuts[m] = std::clamp<long>(std::lround(draw), 1, static_cast<long>(n));
  }

  out.responses.reserve(cfg.respondents);
  for (std::size_t m = 0; m < cfg.respondents; ++m) {
    const auto& full = out.complete[m];
    if (cuts[m] == 0) {
      out.responses.emplace_back(
          std::vector<int>(full.stages().begin(), full.stages().end()),
          StageDomain(full.max_stage()));
    } else {
      out.responses.push_back(right_censor(full, cuts[m]));
    }
  }
  return out;
}

}  // namespace pmallows
