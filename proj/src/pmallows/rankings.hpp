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

// Bucket-order rankings with missing entries and the penalized Kendall tau
// distance between them.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pmallows {

// Stage value marking an item the respondent did not rank.
inline constexpr int kMissing = 0;

// Ordered, unique item labels. Position in the list is the item index.
class ItemSet {
 public:
  explicit ItemSet(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  // Index of a label, or size() when absent.
  std::size_t find(const std::string& label) const;

  bool operator==(const ItemSet&) const = default;

 private:
  std::vector<std::string> labels_;
};

// Stages are the integers 1..max_stage.
struct StageDomain {
  int max_stage = 1;

  explicit StageDomain(int l);
  bool contains(int stage) const { return stage >= 1 && stage <= max_stage; }
  bool operator==(const StageDomain&) const = default;
};

// One respondent's stage per item; kMissing for unranked items.
class PartialRanking {
 public:
  PartialRanking(std::vector<int> stages, StageDomain domain);

  std::size_t size() const { return stages_.size(); }
  int max_stage() const { return max_stage_; }
  int stage(std::size_t i) const { return stages_[i]; }
  bool observed(std::size_t i) const { return stages_[i] != kMissing; }
  std::size_t observed_count() const;
  std::vector<std::size_t> observed_indices() const;
  std::span<const int> stages() const { return stages_; }

  bool operator==(const PartialRanking&) const = default;

 private:
  std::vector<int> stages_;
  int max_stage_;
};

// A complete stage assignment: a Mallows center or a point of {1..l}^n.
class CentralRanking {
 public:
  CentralRanking(std::vector<int> stages, StageDomain domain);

  std::size_t size() const { return stages_.size(); }
  int max_stage() const { return max_stage_; }
  int stage(std::size_t i) const { return stages_[i]; }
  std::span<const int> stages() const { return stages_; }

  bool operator==(const CentralRanking&) const = default;
  auto operator<=>(const CentralRanking&) const = default;

 private:
  std::vector<int> stages_;
  int max_stage_;
};

// Ordered sizes of the non-empty buckets, canonicalized under reversal.
//
// Distances only depend on the pairwise order relations of the center, and
// reversing every stage maps {1..l}^n onto itself, so two centers with the
// same key have the same distance distribution over the space. The plain
// bucket-size multiset is not sufficient: (1,2,3) and (2,1,3) differ.
using StructuralClass = std::vector<int>;

StructuralClass structural_class(std::span<const int> center);

class DistanceConfig {
 public:
  // p outside [0.5, 1] is rejected; below 0.5 the distance is not a metric.
  explicit DistanceConfig(double p = 0.5);
  double p() const { return p_; }

 private:
  double p_;
};

enum class PairKind { kConcordant, kDiscordant, kTiedBoth, kTiedOne, kDropped };

const char* to_string(PairKind kind);

PairKind classify_pair(std::span<const int> x, std::span<const int> y,
                       std::size_t i, std::size_t j);

struct PairTally {
  std::size_t concordant = 0;
  std::size_t discordant = 0;
  std::size_t tied_both = 0;
  std::size_t tied_one = 0;
  std::size_t dropped = 0;

  double distance(double p) const {
    return static_cast<double>(discordant) + p * static_cast<double>(tied_one);
  }
};

PairTally tally_pairs(std::span<const int> x, std::span<const int> y);

// |discordant| + p * |tied in exactly one|; pairs touching a missing entry
// are dropped.
double kendall_tau_partial(std::span<const int> x, std::span<const int> y,
                           const DistanceConfig& cfg);

}  // namespace pmallows
