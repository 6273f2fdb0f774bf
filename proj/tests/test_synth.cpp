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
#include <algorithm>
#include <map>
#include <vector>

#include "doctest.h"
#include "oracle.hpp"
#include "pmallows/error.hpp"
#include "pmallows/synth.hpp"

using namespace pmallows;

namespace {

const std::vector<int> kTable1Center = {1, 2, 2, 3, 3, 3, 3, 4};

SynthConfig config(std::vector<int> center, int l, double lambda,
                   std::size_t respondents, double missing, std::uint64_t seed) {
  SynthConfig cfg{MallowsParams(CentralRanking(std::move(center), StageDomain(l)),
                                lambda)};
  cfg.respondents = respondents;
  cfg.missing_percent = missing;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("censored_count rounds the percentage") {
  CHECK(censored_count(100, 10.0) == 10);
  CHECK(censored_count(100, 0.0) == 0);
  CHECK(censored_count(30, 100.0) == 30);
  CHECK(censored_count(30, 5.0) == 2);
  CHECK_THROWS_AS(censored_count(30, -1.0), DomainError);
  CHECK_THROWS_AS(censored_count(30, 100.5), DomainError);
}

TEST_CASE("right_censor keeps the earliest sorted items") {
  const CentralRanking r({3, 1, 2, 1, 4}, StageDomain(4));
  // Sorted order: items 1, 3, 2, 0, 4.
  const auto cut4 = right_censor(r, 4);
  CHECK(std::vector<int>(cut4.stages().begin(), cut4.stages().end()) ==
        std::vector<int>{0, 1, 2, 1, 0});
  CHECK(right_censor(r, 1).observed_count() == 1);
  CHECK(right_censor(r, -3).observed_count() == 1);
  CHECK(right_censor(r, 2).observed_indices() == std::vector<std::size_t>{1});
  CHECK(right_censor(r, 6).observed_count() == 5);
}

TEST_CASE("no missingness leaves every response complete") {
  PartitionCache cache;
  const auto ds = generate(config(kTable1Center, 4, 1.0, 100, 0.0, 1),
                           DistanceConfig(0.5), cache);
  CHECK(ds.censored.empty());
  CHECK(ds.responses.size() == 100);
  for (std::size_t m = 0; m < 100; ++m) {
    CHECK(ds.responses[m].observed_count() == 8);
    CHECK(std::equal(ds.responses[m].stages().begin(), ds.responses[m].stages().end(),
                     ds.complete[m].stages().begin()));
  }
}

TEST_CASE("full censoring retains five of eight items most often") {
  PartitionCache cache;
  const auto ds = generate(config(kTable1Center, 4, 1.0, 4000, 100.0, 2),
                           DistanceConfig(0.5), cache);
  CHECK(ds.censored.size() == 4000);
  std::map<std::size_t, int> retained;
  for (const auto& r : ds.responses) ++retained[r.observed_count()];
  const auto mode = std::max_element(retained.begin(), retained.end(),
                                     [](auto& a, auto& b) { return a.second < b.second; });
  CHECK(mode->first == 5);
  CHECK(retained.rbegin()->first <= 7);
}

TEST_CASE("censored respondents agree with their complete draw") {
  PartitionCache cache;
  const auto ds = generate(config(kTable1Center, 4, 1.0, 100, 10.0, 3),
                           DistanceConfig(0.5), cache);
  CHECK(ds.censored.size() == 10);
  CHECK(std::is_sorted(ds.censored.begin(), ds.censored.end()));
  std::size_t partial = 0;
  for (std::size_t m = 0; m < ds.responses.size(); ++m) {
    const auto& r = ds.responses[m];
    if (r.observed_count() < 8) ++partial;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r.observed(i)) CHECK(r.stage(i) == ds.complete[m].stage(i));
    }
  }
  CHECK(partial == 10);
}

TEST_CASE("mean distance to the truth grows with the spread") {
  PartitionCache cache;
  const std::vector<int> center = {1, 2, 2, 3, 3};
  double previous = -1.0;
  for (double lambda : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const auto ds = generate(config(center, 3, lambda, 10000, 0.0, 4),
                             DistanceConfig(0.5), cache);
    double total = 0.0;
    for (const auto& x : ds.complete) {
      total += oracle::distance(std::vector<int>(x.stages().begin(), x.stages().end()),
                                center, 0.5);
    }
    const double mean = total / 10000.0;
    CHECK(mean > previous);
    previous = mean;
  }
}

TEST_CASE("generation is reproducible from the seed") {
  PartitionCache cache;
  const auto cfg = config(kTable1Center, 4, 2.0, 50, 20.0, 9);
  const auto a = generate(cfg, DistanceConfig(0.5), cache);
  const auto b = generate(cfg, DistanceConfig(0.5), cache);
  CHECK(a.censored == b.censored);
  for (std::size_t m = 0; m < 50; ++m) {
    CHECK(std::equal(a.responses[m].stages().begin(), a.responses[m].stages().end(),
                     b.responses[m].stages().begin()));
  }
  CHECK_THROWS_AS(generate(config(kTable1Center, 4, 1.0, 0, 0.0, 1),
                           DistanceConfig(0.5), cache),
                  DomainError);
}
