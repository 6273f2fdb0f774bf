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

// Mallows model over the bucket-order space {1..l}^n under the penalized
// Kendall tau distance: exact enumeration, partition function, pmf and exact
// sampling.

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <map>
#include <memory>
#include <shared_mutex>
#include <span>
#include <tuple>
#include <vector>

#include "pmallows/random.hpp"
#include "pmallows/rankings.hpp"

namespace pmallows {

inline constexpr std::uint64_t kDefaultEnumerationGuard = std::uint64_t{1} << 24;

// Returns l^n, or throws CapacityError when it exceeds guard.
std::uint64_t space_size(std::size_t n, int l, std::uint64_t guard);

// The ranking with lexicographic index `index` in {1..l}^n.
std::vector<int> decode_ranking(std::uint64_t index, std::size_t n, int l);

// All of {1..l}^n in lexicographic order, generated lazily.
class RankingSpace {
 public:
  RankingSpace(std::size_t n, int l,
               std::uint64_t guard = kDefaultEnumerationGuard);

  std::uint64_t size() const { return size_; }
  std::size_t items() const { return n_; }
  int max_stage() const { return l_; }

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = std::span<const int>;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    iterator(std::size_t n, int l, std::uint64_t index)
        : l_(l), index_(index), current_(n, 1) {}

    std::span<const int> operator*() const { return current_; }
    iterator& operator++();
    void operator++(int) { ++*this; }
    bool operator==(const iterator& other) const {
      return index_ == other.index_;
    }
    std::uint64_t index() const { return index_; }

   private:
    int l_ = 1;
    std::uint64_t index_ = 0;
    std::vector<int> current_;
  };

  iterator begin() const { return iterator(n_, l_, 0); }
  iterator end() const { return iterator(n_, l_, size_); }

 private:
  std::size_t n_;
  int l_;
  std::uint64_t size_;
};

RankingSpace enumerate_space(std::size_t n, int l,
                             std::uint64_t guard = kDefaultEnumerationGuard);

class MallowsParams {
 public:
  MallowsParams(CentralRanking center, double lambda);

  const CentralRanking& center() const { return center_; }
  double lambda() const { return lambda_; }

 private:
  CentralRanking center_;
  double lambda_;
};

// Pair-order bitmasks of every point of {1..l}^n, in lexicographic order.
// Bit k of above(x) / below(x) is set when, for the k-th pair (i < j),
// x_i > x_j / x_i < x_j. Only built when n(n-1)/2 <= 64.
class PairSignTable {
 public:
  static constexpr std::uint64_t kMaxPoints = std::uint64_t{1} << 20;

  static bool eligible(std::size_t n, std::uint64_t points) {
    return n * (n - 1) / 2 <= 64 && points <= kMaxPoints;
  }

  PairSignTable(std::size_t n, int l, std::uint64_t guard);

  std::uint64_t size() const { return above_.size(); }
  std::uint64_t above(std::uint64_t x) const { return above_[x]; }
  std::uint64_t below(std::uint64_t x) const { return below_[x]; }
  std::uint64_t full_mask() const { return full_; }

 private:
  std::vector<std::uint64_t> above_;
  std::vector<std::uint64_t> below_;
  std::uint64_t full_ = 0;
};

// Bitmask form of one ranking's pair order, matching PairSignTable.
struct PairSignMask {
  std::uint64_t above = 0;
  std::uint64_t below = 0;
};

PairSignMask pair_sign_mask(std::span<const int> x);

// Number of points of {1..l}^n at each (discordant, tied-one) pair count
// relative to any center of one structural class. Independent of p and λ.
class DistanceHistogram {
 public:
  struct Cell {
    int discordant;
    int tied_one;
    std::uint64_t count;
  };

  DistanceHistogram(std::size_t n, int l, const StructuralClass& cls,
                    std::uint64_t guard);
  DistanceHistogram(const PairSignTable& table, std::size_t n,
                    const StructuralClass& cls);

  const std::vector<Cell>& cells() const { return cells_; }
  std::uint64_t total() const { return total_; }

  // log Σ_x exp(-d_p(x, center) / lambda).
  double log_partition(double lambda, double p) const;

 private:
  std::vector<Cell> cells_;
  std::uint64_t total_ = 0;
};

// Thread-safe memo of distance histograms keyed by (n, l, structural class)
// and of log ψ values keyed additionally by exact (p, λ).
class PartitionCache {
 public:
  explicit PartitionCache(std::uint64_t guard = kDefaultEnumerationGuard);

  PartitionCache(const PartitionCache&) = delete;
  PartitionCache& operator=(const PartitionCache&) = delete;

  std::uint64_t guard() const { return guard_; }

  std::shared_ptr<const DistanceHistogram> histogram(
      std::size_t n, int l, const StructuralClass& cls);

  double log_partition(std::size_t n, int l, const StructuralClass& cls,
                       double lambda, double p);

  std::size_t histogram_count() const;

  // nullptr when the space is not eligible for a sign table.
  std::shared_ptr<const PairSignTable> sign_table(std::size_t n, int l);

 private:
  using HistogramKey = std::tuple<std::size_t, int, StructuralClass>;
  using ValueKey =
      std::tuple<std::size_t, int, StructuralClass, std::uint64_t, std::uint64_t>;

  static constexpr std::size_t kMaxValues = std::size_t{1} << 18;

  std::uint64_t guard_;
  mutable std::shared_mutex mutex_;
  std::map<HistogramKey, std::shared_ptr<const DistanceHistogram>> histograms_;
  std::map<ValueKey, double> values_;
  std::map<std::pair<std::size_t, int>, std::shared_ptr<const PairSignTable>>
      sign_tables_;
};

// log ψ(λ) for the center of params over {1..l}^n.
double log_partition_function(const MallowsParams& params,
                              const DistanceConfig& cfg, PartitionCache& cache);

// ψ(λ) = Σ_x exp(-d_p(x, π_0) / λ).
double partition_function(const MallowsParams& params,
                          const DistanceConfig& cfg, PartitionCache& cache);

// log f(x) = -d_p(x, π_0)/λ - log ψ(λ).
double log_pmf(std::span<const int> x, const MallowsParams& params,
               const DistanceConfig& cfg, PartitionCache& cache);

// Exact categorical sampler over the enumerated pmf (CDF inversion).
class MallowsSampler {
 public:
  MallowsSampler(const MallowsParams& params, const DistanceConfig& cfg,
                 PartitionCache& cache);

  CentralRanking draw(Rng& rng) const;
  std::uint64_t draw_index(Rng& rng) const;

 private:
  std::size_t n_;
  int l_;
  std::vector<double> cdf_;
};

std::vector<CentralRanking> sample(const MallowsParams& params,
                                   const DistanceConfig& cfg,
                                   PartitionCache& cache, Rng& rng,
                                   std::size_t count);

}  // namespace pmallows
