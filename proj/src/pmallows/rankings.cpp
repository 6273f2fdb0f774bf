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
#include "pmallows/rankings.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "pmallows/error.hpp"

namespace pmallows {

ItemSet::ItemSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw DomainError("item set must not be empty");
  std::set<std::string> seen;
  for (const auto& label : labels_) {
    if (!seen.insert(label).second) {
      throw DomainError("duplicate item label '" + label + "'");
    }
  }
}

std::size_t ItemSet::find(const std::string& label) const {
  return static_cast<std::size_t>(
      std::find(labels_.begin(), labels_.end(), label) - labels_.begin());
}

StageDomain::StageDomain(int l) : max_stage(l) {
  if (l < 1) throw DomainError("stage domain needs l >= 1");
}

PartialRanking::PartialRanking(std::vector<int> stages, StageDomain domain)
    : stages_(std::move(stages)), max_stage_(domain.max_stage) {
  if (stages_.empty()) throw DomainError("ranking over zero items");
  bool any = false;
  for (int s : stages_) {
    if (s == kMissing) continue;
    if (!domain.contains(s)) {
      throw DomainError("stage " + std::to_string(s) + " outside 1.." +
                        std::to_string(max_stage_));
    }
    any = true;
  }
  if (!any) throw DomainError("partial ranking has no observed items");
}

std::size_t PartialRanking::observed_count() const {
  return static_cast<std::size_t>(std::count_if(
      stages_.begin(), stages_.end(), [](int s) { return s != kMissing; }));
}

std::vector<std::size_t> PartialRanking::observed_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < stages_.size(); ++i) {
    if (stages_[i] != kMissing) out.push_back(i);
  }
  return out;
}

CentralRanking::CentralRanking(std::vector<int> stages, StageDomain domain)
    : stages_(std::move(stages)), max_stage_(domain.max_stage) {
  if (stages_.empty()) throw DomainError("ranking over zero items");
  for (int s : stages_) {
    if (!domain.contains(s)) {
      throw DomainError("center stage " + std::to_string(s) + " outside 1.." +
                        std::to_string(max_stage_));
    }
  }
}

StructuralClass structural_class(std::span<const int> center) {
  std::vector<int> sorted(center.begin(), center.end());
  std::sort(sorted.begin(), sorted.end());
  StructuralClass sizes;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    sizes.push_back(static_cast<int>(j - i));
    i = j;
  }
  StructuralClass reversed(sizes.rbegin(), sizes.rend());
  return std::min(sizes, reversed);
}

DistanceConfig::DistanceConfig(double p) : p_(p) {
  if (!(p >= 0.5 && p <= 1.0)) {
    throw DomainError("penalty p must lie in [0.5, 1], got " +
                      std::to_string(p));
  }
}

const char* to_string(PairKind kind) {
  switch (kind) {
    case PairKind::kConcordant: return "concordant";
    case PairKind::kDiscordant: return "discordant";
    case PairKind::kTiedBoth: return "tied_both";
    case PairKind::kTiedOne: return "tied_one";
    case PairKind::kDropped: return "dropped";
  }
  return "unknown";
}

namespace {

inline int sign(int v) { return (v > 0) - (v < 0); }

inline PairKind classify_unchecked(std::span<const int> x,
                                   std::span<const int> y, std::size_t i,
                                   std::size_t j) {
  if (x[i] == kMissing || x[j] == kMissing || y[i] == kMissing ||
      y[j] == kMissing) {
    return PairKind::kDropped;
  }
  const int sx = sign(x[i] - x[j]);
  const int sy = sign(y[i] - y[j]);
  if (sx == 0 && sy == 0) return PairKind::kTiedBoth;
  if (sx == 0 || sy == 0) return PairKind::kTiedOne;
  if (sx != sy) return PairKind::kDiscordant;
  return PairKind::kConcordant;
}

void check_same_size(std::span<const int> x, std::span<const int> y) {
  if (x.size() != y.size()) {
    throw DomainError("rankings over different item counts (" +
                      std::to_string(x.size()) + " vs " +
                      std::to_string(y.size()) + ")");
  }
}

}  // namespace

PairKind classify_pair(std::span<const int> x, std::span<const int> y,
                       std::size_t i, std::size_t j) {
  check_same_size(x, y);
  if (i >= x.size() || j >= x.size()) {
    throw DomainError("item index out of range");
  }
  if (i == j) throw DomainError("classify_pair needs two distinct items");
  return classify_unchecked(x, y, i, j);
}

PairTally tally_pairs(std::span<const int> x, std::span<const int> y) {
  check_same_size(x, y);
  PairTally tally;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      switch (classify_unchecked(x, y, i, j)) {
        case PairKind::kConcordant: ++tally.concordant; break;
        case PairKind::kDiscordant: ++tally.discordant; break;
        case PairKind::kTiedBoth: ++tally.tied_both; break;
        case PairKind::kTiedOne: ++tally.tied_one; break;
        case PairKind::kDropped: ++tally.dropped; break;
      }
    }
  }
  return tally;
}

double kendall_tau_partial(std::span<const int> x, std::span<const int> y,
                           const DistanceConfig& cfg) {
  return tally_pairs(x, y).distance(cfg.p());
}

}  // namespace pmallows
