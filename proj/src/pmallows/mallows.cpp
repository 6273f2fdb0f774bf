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
#include "pmallows/mallows.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>

#include "pmallows/error.hpp"

namespace pmallows {

std::uint64_t space_size(std::size_t n, int l, std::uint64_t guard) {
  if (n == 0) throw DomainError("ranking space over zero items");
  if (l < 1) throw DomainError("ranking space needs l >= 1");
  std::uint64_t size = 1;
  bool overflow = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (size > guard / static_cast<std::uint64_t>(l)) {
      overflow = true;
      break;
    }
    size *= static_cast<std::uint64_t>(l);
  }
  if (overflow || size > guard) {
    const double approx = std::pow(static_cast<double>(l), static_cast<double>(n));
    throw CapacityError("ranking space l^n = " + std::to_string(l) + "^" +
                        std::to_string(n) + " (~" + std::to_string(approx) +
                        ") exceeds the enumeration guard " +
                        std::to_string(guard));
  }
  return size;
}

std::vector<int> decode_ranking(std::uint64_t index, std::size_t n, int l) {
  std::vector<int> out(n);
  for (std::size_t k = n; k-- > 0;) {
    out[k] = static_cast<int>(index % static_cast<std::uint64_t>(l)) + 1;
    index /= static_cast<std::uint64_t>(l);
  }
  return out;
}

RankingSpace::RankingSpace(std::size_t n, int l, std::uint64_t guard)
    : n_(n), l_(l), size_(space_size(n, l, guard)) {}

RankingSpace::iterator& RankingSpace::iterator::operator++() {
  ++index_;
  for (std::size_t k = current_.size(); k-- > 0;) {
    if (current_[k] < l_) {
      ++current_[k];
      return *this;
    }
    current_[k] = 1;
  }
  return *this;
}

RankingSpace enumerate_space(std::size_t n, int l, std::uint64_t guard) {
  return RankingSpace(n, l, guard);
}

MallowsParams::MallowsParams(CentralRanking center, double lambda)
    : center_(std::move(center)), lambda_(lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("spread lambda must be positive and finite, got " +
                      std::to_string(lambda));
  }
}

namespace {

// Sign pattern of every unordered pair of a complete ranking, in (i, j) with
// i < j order.
std::vector<int> pair_signs(std::span<const int> x) {
  std::vector<int> signs;
  signs.reserve(x.size() * (x.size() - 1) / 2);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      signs.push_back((x[i] > x[j]) - (x[i] < x[j]));
    }
  }
  return signs;
}

// (discordant, tied_one) counts of a complete ranking x against a center
// given by its pair signs.
inline std::pair<int, int> tally_against(std::span<const int> x,
                                         const std::vector<int>& center_signs) {
  int discordant = 0;
  int tied_one = 0;
  std::size_t k = 0;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    const int xi = x[i];
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      const int sx = (xi > x[j]) - (xi < x[j]);
      const int sc = center_signs[k];
      discordant += (sx * sc < 0);
      tied_one += ((sx == 0) != (sc == 0));
    }
  }
  return {discordant, tied_one};
}

std::vector<int> canonical_center(std::size_t n, const StructuralClass& cls) {
  std::vector<int> center;
  center.reserve(n);
  int stage = 1;
  for (int size : cls) {
    center.insert(center.end(), static_cast<std::size_t>(size), stage);
    ++stage;
  }
  if (center.size() != n) {
    throw DomainError("structural class does not cover " + std::to_string(n) +
                      " items");
  }
  return center;
}

double log_sum_exp(std::span<const double> terms) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double t : terms) hi = std::max(hi, t);
  if (!std::isfinite(hi)) return hi;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - hi);
  return hi + std::log(sum);
}

inline std::pair<int, int> tally_masks(std::uint64_t above,
                                       std::uint64_t below,
                                       const PairSignMask& center,
                                       std::uint64_t full) {
  const int discordant =
      std::popcount(above & center.below) + std::popcount(below & center.above);
  const std::uint64_t tied_x = full & ~(above | below);
  const std::uint64_t tied_c = full & ~(center.above | center.below);
  return {discordant, std::popcount(tied_x ^ tied_c)};
}

}  // namespace

PairSignMask pair_sign_mask(std::span<const int> x) {
  PairSignMask mask;
  std::size_t k = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j, ++k) {
      if (x[i] > x[j]) mask.above |= std::uint64_t{1} << k;
      if (x[i] < x[j]) mask.below |= std::uint64_t{1} << k;
    }
  }
  return mask;
}

PairSignTable::PairSignTable(std::size_t n, int l, std::uint64_t guard) {
  const RankingSpace space(n, l, guard);
  const std::size_t pairs = n * (n - 1) / 2;
  if (!eligible(n, space.size())) {
    throw DomainError("space not eligible for a pair sign table");
  }
  full_ = pairs == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << pairs) - 1;
  above_.reserve(space.size());
  below_.reserve(space.size());
  for (auto x : space) {
    const auto mask = pair_sign_mask(x);
    above_.push_back(mask.above);
    below_.push_back(mask.below);
  }
}

DistanceHistogram::DistanceHistogram(std::size_t n, int l,
                                     const StructuralClass& cls,
                                     std::uint64_t guard) {
  const RankingSpace space(n, l, guard);
  const std::vector<int> center = canonical_center(n, cls);
  if (static_cast<int>(cls.size()) > l) {
    throw DomainError("structural class has more buckets than stages");
  }
  const auto signs = pair_signs(center);
  const std::size_t pairs = signs.size();
  const std::size_t width = pairs + 1;
  std::vector<std::uint64_t> grid(width * width, 0);
  for (auto x : space) {
    const auto [d, e] = tally_against(x, signs);
    ++grid[static_cast<std::size_t>(d) * width + static_cast<std::size_t>(e)];
  }
  for (std::size_t d = 0; d < width; ++d) {
    for (std::size_t e = 0; e < width; ++e) {
      const auto c = grid[d * width + e];
      if (c == 0) continue;
      cells_.push_back({static_cast<int>(d), static_cast<int>(e), c});
      total_ += c;
    }
  }
}

DistanceHistogram::DistanceHistogram(const PairSignTable& table,
                                     std::size_t n,
                                     const StructuralClass& cls) {
  const std::vector<int> center = canonical_center(n, cls);
  const auto mask = pair_sign_mask(center);
  const std::size_t width = n * (n - 1) / 2 + 1;
  std::vector<std::uint64_t> grid(width * width, 0);
  for (std::uint64_t x = 0; x < table.size(); ++x) {
    const auto [d, e] =
        tally_masks(table.above(x), table.below(x), mask, table.full_mask());
    ++grid[static_cast<std::size_t>(d) * width + static_cast<std::size_t>(e)];
  }
  for (std::size_t d = 0; d < width; ++d) {
    for (std::size_t e = 0; e < width; ++e) {
      const auto count = grid[d * width + e];
      if (count == 0) continue;
      cells_.push_back({static_cast<int>(d), static_cast<int>(e), count});
      total_ += count;
    }
  }
}

double DistanceHistogram::log_partition(double lambda, double p) const {
  std::vector<double> terms;
  terms.reserve(cells_.size());
  for (const auto& cell : cells_) {
    const double d = cell.discordant + p * cell.tied_one;
    terms.push_back(std::log(static_cast<double>(cell.count)) - d / lambda);
  }
  return log_sum_exp(terms);
}

PartitionCache::PartitionCache(std::uint64_t guard) : guard_(guard) {
  if (guard == 0) throw DomainError("enumeration guard must be positive");
}

std::shared_ptr<const DistanceHistogram> PartitionCache::histogram(
    std::size_t n, int l, const StructuralClass& cls) {
  HistogramKey key{n, l, cls};
  {
    std::shared_lock lock(mutex_);
    if (auto it = histograms_.find(key); it != histograms_.end()) {
      return it->second;
    }
  }
  // Built outside the lock; a concurrent builder of the same key produces an
  // identical histogram and the first insert wins.
  if (static_cast<int>(cls.size()) > l) {
    throw DomainError("structural class has more buckets than stages");
  }
  const auto table = sign_table(n, l);
  auto built = table ? std::make_shared<const DistanceHistogram>(*table, n, cls)
                     : std::make_shared<const DistanceHistogram>(n, l, cls, guard_);
  std::unique_lock lock(mutex_);
  auto [it, inserted] = histograms_.emplace(std::move(key), std::move(built));
  return it->second;
}

double PartitionCache::log_partition(std::size_t n, int l,
                                     const StructuralClass& cls, double lambda,
                                     double p) {
  if (!(lambda > 0.0)) {
    throw DomainError("spread lambda must be positive, got " +
                      std::to_string(lambda));
  }
  ValueKey key{n, l, cls, std::bit_cast<std::uint64_t>(p),
               std::bit_cast<std::uint64_t>(lambda)};
  {
    std::shared_lock lock(mutex_);
    if (auto it = values_.find(key); it != values_.end()) return it->second;
  }
  const double value = histogram(n, l, cls)->log_partition(lambda, p);
  std::unique_lock lock(mutex_);
  if (values_.size() >= kMaxValues) values_.clear();
  values_.emplace(std::move(key), value);
  return value;
}

std::shared_ptr<const PairSignTable> PartitionCache::sign_table(std::size_t n,
                                                                int l) {
  if (!PairSignTable::eligible(n, space_size(n, l, guard_))) return nullptr;
  const std::pair<std::size_t, int> key{n, l};
  {
    std::shared_lock lock(mutex_);
    if (auto it = sign_tables_.find(key); it != sign_tables_.end()) {
      return it->second;
    }
  }
  auto built = std::make_shared<const PairSignTable>(n, l, guard_);
  std::unique_lock lock(mutex_);
  auto [it, inserted] = sign_tables_.emplace(key, std::move(built));
  return it->second;
}

std::size_t PartitionCache::histogram_count() const {
  std::shared_lock lock(mutex_);
  return histograms_.size();
}

double log_partition_function(const MallowsParams& params,
                              const DistanceConfig& cfg,
                              PartitionCache& cache) {
  const auto& center = params.center();
  return cache.log_partition(center.size(), center.max_stage(),
                             structural_class(center.stages()),
                             params.lambda(), cfg.p());
}

double partition_function(const MallowsParams& params,
                          const DistanceConfig& cfg, PartitionCache& cache) {
  return std::exp(log_partition_function(params, cfg, cache));
}

double log_pmf(std::span<const int> x, const MallowsParams& params,
               const DistanceConfig& cfg, PartitionCache& cache) {
  const auto& center = params.center();
  if (x.size() != center.size()) {
    throw DomainError("ranking and center differ in item count");
  }
  for (int s : x) {
    if (s < 1 || s > center.max_stage()) {
      throw DomainError("log_pmf needs a complete ranking in 1..l");
    }
  }
  return -kendall_tau_partial(x, center.stages(), cfg) / params.lambda() -
         log_partition_function(params, cfg, cache);
}

MallowsSampler::MallowsSampler(const MallowsParams& params,
                               const DistanceConfig& cfg,
                               PartitionCache& cache)
    : n_(params.center().size()), l_(params.center().max_stage()) {
  const RankingSpace space(n_, l_, cache.guard());
  const double log_psi = log_partition_function(params, cfg, cache);
  const auto signs = pair_signs(params.center().stages());
  const std::size_t width = signs.size() + 1;

  // One probability per (discordant, tied-one) cell.
  std::vector<double> cell_prob(width * width);
  for (std::size_t d = 0; d < width; ++d) {
    for (std::size_t e = 0; e < width; ++e) {
      const double dist = static_cast<double>(d) + cfg.p() * static_cast<double>(e);
      cell_prob[d * width + e] = std::exp(-dist / params.lambda() - log_psi);
    }
  }

  cdf_.resize(space.size());
  double acc = 0.0;
  if (const auto table = cache.sign_table(n_, l_)) {
    const auto mask = pair_sign_mask(params.center().stages());
    for (std::uint64_t x = 0; x < table->size(); ++x) {
      const auto [d, e] =
          tally_masks(table->above(x), table->below(x), mask, table->full_mask());
      acc += cell_prob[static_cast<std::size_t>(d) * width +
                       static_cast<std::size_t>(e)];
      cdf_[x] = acc;
    }
    return;
  }
  for (auto it = space.begin(); it != space.end(); ++it) {
    const auto [d, e] = tally_against(*it, signs);
    acc += cell_prob[static_cast<std::size_t>(d) * width +
                     static_cast<std::size_t>(e)];
    cdf_[it.index()] = acc;
  }
}

std::uint64_t MallowsSampler::draw_index(Rng& rng) const {
  const double target = rng.uniform() * cdf_.back();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
  const auto index = static_cast<std::uint64_t>(it - cdf_.begin());
  return std::min<std::uint64_t>(index, cdf_.size() - 1);
}

CentralRanking MallowsSampler::draw(Rng& rng) const {
  return CentralRanking(decode_ranking(draw_index(rng), n_, l_),
                        StageDomain(l_));
}

std::vector<CentralRanking> sample(const MallowsParams& params,
                                   const DistanceConfig& cfg,
                                   PartitionCache& cache, Rng& rng,
                                   std::size_t count) {
  if (count == 0) throw DomainError("sample count must be positive");
  const MallowsSampler sampler(params, cfg, cache);
  std::vector<CentralRanking> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(sampler.draw(rng));
  return out;
}

}  // namespace pmallows
