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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pmallows/mallows.hpp"
#include "pmallows/rankings.hpp"

namespace pmallows {

struct SynthConfig {
  MallowsParams truth;
  std::size_t respondents = 100;
  // Percentage of respondents whose ranking is right-censored.
  double missing_percent = 0.0;
  // Cut position ~ Normal(factor * n, scale), in 1-based sorted-item order.
  double censor_location_factor = 0.75;
  double censor_scale = 1.0;
  std::uint64_t seed = 0;
};

struct SynthDataset {
  std::vector<PartialRanking> responses;
  // Uncensored draws, aligned with responses.
  std::vector<CentralRanking> complete;
  MallowsParams truth;
  // Ascending respondent indices that were censored.
  std::vector<std::size_t> censored;
};

// Number of respondents censored for a given size and percentage.
std::size_t censored_count(std::size_t respondents, double missing_percent);

// Drops every item at 1-based sorted position >= cut, sorting by stage with
// ties broken by item index. At least the earliest item is kept.
PartialRanking right_censor(const CentralRanking& ranking, long cut);

SynthDataset generate(const SynthConfig& cfg, const DistanceConfig& dist,
                      PartitionCache& cache);

}  // namespace pmallows
