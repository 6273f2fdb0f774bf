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

// Dataset, ranking-file, report, trace and heatmap serialization.
//
// Dataset CSV (long form): header `respondent_id,item,stage`, one row per
// (respondent, item); a missing row or an empty stage cell means unranked.
// The sidecar JSON `{items: [...], l: int, stage_label_offset: int}` fixes
// the item order and stage domain. External stage label =
// internal stage - 1 + stage_label_offset.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pmallows/inference.hpp"
#include "pmallows/rankings.hpp"

namespace pmallows {

using Json = nlohmann::ordered_json;

struct QuestionnaireDataset {
  ItemSet items;
  StageDomain domain;
  int stage_label_offset = 1;
  std::vector<std::string> respondent_ids;
  std::vector<PartialRanking> responses;
  std::string provenance;

  // Unique ids, responses over items/domain, every item observed at least once.
  void validate() const;

  int external_label(int internal_stage) const {
    return internal_stage - 1 + stage_label_offset;
  }
  int internal_stage(int external_label) const {
    return external_label + 1 - stage_label_offset;
  }

  bool operator==(const QuestionnaireDataset&) const = default;
};

// `data.csv` -> `data.json`.
std::filesystem::path sidecar_path_for(const std::filesystem::path& csv);
// `data.csv` -> `data.truth.json`.
std::filesystem::path truth_path_for(const std::filesystem::path& csv);

QuestionnaireDataset read_dataset(const std::filesystem::path& csv);
QuestionnaireDataset read_dataset(const std::filesystem::path& csv,
                                  const std::filesystem::path& sidecar);

// Writes the CSV and its sidecar next to it. `extra` fields are appended to
// the sidecar object.
void write_dataset(const QuestionnaireDataset& ds,
                   const std::filesystem::path& csv, const Json& extra = {});

std::vector<double> item_response_rates(const QuestionnaireDataset& ds);

struct FilterResult {
  QuestionnaireDataset dataset;
  std::vector<std::string> removed_items;
  std::size_t dropped_respondents = 0;
};

FilterResult filter_items(const QuestionnaireDataset& ds, double min_rate);

// A single labeled ranking: CSV `item,stage` with external stage labels,
// empty stage = unranked.
struct LabeledRanking {
  std::vector<std::string> items;
  std::vector<std::optional<int>> stages;
};

LabeledRanking read_ranking_file(const std::filesystem::path& path);
void write_ranking_file(const LabeledRanking& ranking,
                        const std::filesystem::path& path);

// Stage vectors of two ranking files aligned by item label, kMissing for
// unranked. Throws FormatError when item sets differ.
std::pair<std::vector<int>, std::vector<int>> align_rankings(
    const LabeledRanking& a, const LabeledRanking& b);

// Converts a labeled ranking into a complete center over ds's items.
CentralRanking center_from_labeled(const LabeledRanking& ranking,
                                   const QuestionnaireDataset& ds);

struct TruthRecord {
  CentralRanking center;
  double lambda = 0.0;
  std::vector<std::string> censored_ids;
};

void write_truth(const TruthRecord& truth, const QuestionnaireDataset& ds,
                 const std::filesystem::path& path, const Json& manifest);
TruthRecord read_truth(const std::filesystem::path& path,
                       const QuestionnaireDataset& ds);

struct Evaluation {
  CentralRanking truth_center;
  double truth_lambda = 0.0;
  double center_distance = 0.0;
  double lambda_abs_error = 0.0;
};

Json fit_report_json(const FitResult& result, const QuestionnaireDataset& ds,
                     const Json& manifest,
                     const std::optional<Evaluation>& evaluation);
void write_fit_report(const FitResult& result, const QuestionnaireDataset& ds,
                      const std::filesystem::path& path, const Json& manifest,
                      const std::optional<Evaluation>& evaluation = {});
// The MAP center stored in a report, mapped back to internal stages.
CentralRanking read_report_center(const std::filesystem::path& path,
                                  const QuestionnaireDataset& ds);

void write_trace(const McmcTrace& trace, const std::filesystem::path& path,
                 int stage_label_offset = 1);

std::string heatmap_svg(const StageMarginals& marginals,
                        const QuestionnaireDataset& ds,
                        const Json& manifest = {});
void write_heatmap_svg(const StageMarginals& marginals,
                       const QuestionnaireDataset& ds,
                       const std::filesystem::path& path,
                       const Json& manifest = {});

// Shortest round-trip decimal form, independent of locale.
std::string format_double(double value);

void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

}  // namespace pmallows
