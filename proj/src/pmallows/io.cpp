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
#include "pmallows/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pmallows/error.hpp"

namespace pmallows {

namespace fs = std::filesystem;

namespace {

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CsvRow {
  std::size_t line;
  std::vector<std::string> fields;
};

// RFC 4180 records; quoted fields may contain commas, quotes and newlines.
std::vector<CsvRow> parse_csv(const std::string& text, const fs::path& path) {
  std::vector<CsvRow> rows;
  std::size_t line = 1;
  std::size_t i = 0;
  const std::size_t size = text.size();
  if (text.rfind("\xEF\xBB\xBF", 0) == 0) i = 3;
  while (i < size) {
    CsvRow row{line, {}};
    std::string field;
    bool in_quotes = false;
    bool done = false;
    while (!done) {
      if (i >= size) {
        if (in_quotes) {
          throw FormatError(path.string() + ": row " + std::to_string(row.line) +
                            ": unterminated quoted field");
        }
        row.fields.push_back(std::move(field));
        done = true;
        break;
      }
      const char c = text[i];
      if (in_quotes) {
        if (c == '"') {
          if (i + 1 < size && text[i + 1] == '"') {
            field.push_back('"');
            i += 2;
          } else {
            in_quotes = false;
            ++i;
          }
        } else {
          if (c == '\n') ++line;
          field.push_back(c);
          ++i;
        }
        continue;
      }
      switch (c) {
        case '"':
          in_quotes = true;
          ++i;
          break;
        case ',':
          row.fields.push_back(std::move(field));
          field.clear();
          ++i;
          break;
        case '\r':
          ++i;
          break;
        case '\n':
          row.fields.push_back(std::move(field));
          ++i;
          ++line;
          done = true;
          break;
        default:
          field.push_back(c);
          ++i;
      }
    }
    const bool blank = row.fields.size() == 1 && row.fields[0].empty();
    if (!blank) rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::optional<int> parse_int(const std::string& text) {
  const std::string t = trim(text);
  int value = 0;
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, value);
  if (ec != std::errc() || ptr != end || t.empty()) return std::nullopt;
  return value;
}

void expect_header(const std::vector<CsvRow>& rows,
                   const std::vector<std::string>& header,
                   const fs::path& path) {
  if (rows.empty()) throw FormatError(path.string() + ": missing header row");
  std::vector<std::string> got;
  for (const auto& f : rows.front().fields) got.push_back(trim(f));
  if (got != header) {
    std::string want;
    for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
    throw FormatError(path.string() + ": header must be '" + want + "'");
  }
}

Json parse_json_file(const fs::path& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::vector<int> external_stages(std::span<const int> stages, int offset) {
  std::vector<int> out;
  out.reserve(stages.size());
  for (int s : stages) out.push_back(s - 1 + offset);
  return out;
}

CentralRanking center_from_external(const Json& labels,
                                    const QuestionnaireDataset& ds,
                                    const fs::path& path) {
  if (!labels.is_array() || labels.size() != ds.items.size()) {
    throw FormatError(path.string() + ": center must list one stage per item");
  }
  std::vector<int> stages;
  for (const auto& v : labels) {
    if (!v.is_number_integer()) {
      throw FormatError(path.string() + ": center stages must be integers");
    }
    const int s = ds.internal_stage(v.get<int>());
    if (!ds.domain.contains(s)) {
      throw FormatError(path.string() + ": center stage label " +
                        std::to_string(v.get<int>()) + " outside the domain");
    }
    stages.push_back(s);
  }
  return CentralRanking(std::move(stages), ds.domain);
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void QuestionnaireDataset::validate() const {
  if (respondent_ids.size() != responses.size()) {
    throw DomainError("respondent ids and responses differ in length");
  }
  std::set<std::string> seen;
  for (const auto& id : respondent_ids) {
    if (!seen.insert(id).second) {
      throw DomainError("duplicate respondent id '" + id + "'");
    }
  }
  std::vector<bool> observed(items.size(), false);
  for (const auto& r : responses) {
    if (r.size() != items.size() || r.max_stage() != domain.max_stage) {
      throw DomainError("response is not over the dataset's items and stages");
    }
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r.observed(i)) observed[i] = true;
    }
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!observed[i]) {
      throw DomainError("item '" + items.label(i) + "' has no observations");
    }
  }
}

fs::path sidecar_path_for(const fs::path& csv) {
  fs::path out = csv;
  out.replace_extension(".json");
  return out;
}

fs::path truth_path_for(const fs::path& csv) {
  fs::path out = csv;
  out.replace_extension(".truth.json");
  return out;
}

QuestionnaireDataset read_dataset(const fs::path& csv) {
  return read_dataset(csv, sidecar_path_for(csv));
}

QuestionnaireDataset read_dataset(const fs::path& csv, const fs::path& sidecar) {
  const Json meta = parse_json_file(sidecar);
  if (!meta.is_object() || !meta.contains("items") || !meta.contains("l")) {
    throw FormatError(sidecar.string() + ": sidecar needs 'items' and 'l'");
  }
  std::vector<std::string> labels;
  int l = 0;
  int offset = 1;
  std::string provenance;
  try {
    labels = meta.at("items").get<std::vector<std::string>>();
    l = meta.at("l").get<int>();
    if (meta.contains("stage_label_offset")) {
      offset = meta.at("stage_label_offset").get<int>();
    }
    if (meta.contains("provenance")) {
      provenance = meta.at("provenance").get<std::string>();
    }
  } catch (const Json::exception& e) {
    throw FormatError(sidecar.string() + ": " + e.what());
  }

  std::optional<ItemSet> items;
  std::optional<StageDomain> domain;
  try {
    items.emplace(std::move(labels));
    domain.emplace(l);
  } catch (const DomainError& e) {
    throw FormatError(sidecar.string() + ": " + e.what());
  }
  const std::size_t n = items->size();

  const auto rows = parse_csv(read_text_file(csv), csv);
  expect_header(rows, {"respondent_id", "item", "stage"}, csv);

  std::vector<std::string> ids;
  std::map<std::string, std::size_t> id_index;
  std::vector<std::vector<int>> stages;
  std::vector<std::vector<bool>> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where =
        csv.string() + ": row " + std::to_string(row.line) + ": ";
    if (row.fields.size() != 3) throw FormatError(where + "expected 3 fields");
    const std::string id = trim(row.fields[0]);
    const std::string item = row.fields[1];
    const std::string stage_text = trim(row.fields[2]);
    if (id.empty()) throw FormatError(where + "empty respondent_id");
    const std::size_t i = items->find(item);
    if (i == n) throw FormatError(where + "unknown item '" + item + "'");

    auto [it, inserted] = id_index.emplace(id, ids.size());
    if (inserted) {
      ids.push_back(id);
      stages.emplace_back(n, kMissing);
      seen.emplace_back(n, false);
    }
    const std::size_t m = it->second;
    if (seen[m][i]) {
      throw FormatError(where + "duplicate entry for respondent '" + id +
                        "' and item '" + item + "'");
    }
    seen[m][i] = true;
    if (stage_text.empty()) continue;
    const auto label = parse_int(stage_text);
    if (!label) throw FormatError(where + "stage '" + stage_text + "' is not an integer");
    const int internal = *label + 1 - offset;
    if (!domain->contains(internal)) {
      throw FormatError(where + "stage label " + std::to_string(*label) +
                        " outside the declared domain " +
                        std::to_string(offset) + ".." +
                        std::to_string(offset + l - 1));
    }
    stages[m][i] = internal;
  }

  QuestionnaireDataset ds{*items, *domain, offset, {}, {}, provenance};
  for (std::size_t m = 0; m < ids.size(); ++m) {
    const bool any = std::any_of(stages[m].begin(), stages[m].end(),
                                 [](int s) { return s != kMissing; });
    if (!any) {
      throw FormatError(csv.string() + ": respondent '" + ids[m] +
                        "' has no observed items");
    }
    ds.respondent_ids.push_back(ids[m]);
    ds.responses.emplace_back(std::move(stages[m]), *domain);
  }
  if (ds.responses.empty()) throw FormatError(csv.string() + ": no responses");
  try {
    ds.validate();
  } catch (const DomainError& e) {
    throw FormatError(csv.string() + ": " + e.what());
  }
  return ds;
}

void write_dataset(const QuestionnaireDataset& ds, const fs::path& csv,
                   const Json& extra) {
  std::string out = "respondent_id,item,stage\n";
  for (std::size_t m = 0; m < ds.responses.size(); ++m) {
    const auto& r = ds.responses[m];
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (!r.observed(i)) continue;
      out += csv_field(ds.respondent_ids[m]) + "," +
             csv_field(ds.items.label(i)) + "," +
             std::to_string(ds.external_label(r.stage(i))) + "\n";
    }
  }
  write_text_file(csv, out);

  Json meta;
  meta["items"] = ds.items.labels();
  meta["l"] = ds.domain.max_stage;
  meta["stage_label_offset"] = ds.stage_label_offset;
  if (!ds.provenance.empty()) meta["provenance"] = ds.provenance;
  if (extra.is_object()) {
    for (const auto& [key, value] : extra.items()) meta[key] = value;
  }
  write_text_file(sidecar_path_for(csv), dump(meta));
}

std::vector<double> item_response_rates(const QuestionnaireDataset& ds) {
  std::vector<double> rates(ds.items.size(), 0.0);
  if (ds.responses.empty()) return rates;
  for (const auto& r : ds.responses) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r.observed(i)) rates[i] += 1.0;
    }
  }
  for (double& v : rates) v /= static_cast<double>(ds.responses.size());
  return rates;
}

FilterResult filter_items(const QuestionnaireDataset& ds, double min_rate) {
  if (!(min_rate >= 0.0 && min_rate <= 1.0)) {
    throw DomainError("minimum response rate must lie in [0, 1]");
  }
  const auto rates = item_response_rates(ds);
  std::vector<std::size_t> keep;
  std::vector<std::string> kept_labels;
  std::vector<std::string> removed;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (rates[i] >= min_rate) {
      keep.push_back(i);
      kept_labels.push_back(ds.items.label(i));
    } else {
      removed.push_back(ds.items.label(i));
    }
  }
  if (keep.empty()) {
    throw DomainError("no item reaches the minimum response rate");
  }

  FilterResult out{QuestionnaireDataset{ItemSet(std::move(kept_labels)),
                                        ds.domain,
                                        ds.stage_label_offset,
                                        {},
                                        {},
                                        ds.provenance},
                   std::move(removed), 0};
  for (std::size_t m = 0; m < ds.responses.size(); ++m) {
    std::vector<int> stages;
    stages.reserve(keep.size());
    bool any = false;
    for (std::size_t i : keep) {
      stages.push_back(ds.responses[m].stage(i));
      any = any || stages.back() != kMissing;
    }
    if (!any) {
      ++out.dropped_respondents;
      continue;
    }
    out.dataset.respondent_ids.push_back(ds.respondent_ids[m]);
    out.dataset.responses.emplace_back(std::move(stages), ds.domain);
  }
  return out;
}

LabeledRanking read_ranking_file(const fs::path& path) {
  const auto rows = parse_csv(read_text_file(path), path);
  expect_header(rows, {"item", "stage"}, path);
  LabeledRanking out;
  std::set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where =
        path.string() + ": row " + std::to_string(row.line) + ": ";
    if (row.fields.size() != 2) throw FormatError(where + "expected 2 fields");
    if (!seen.insert(row.fields[0]).second) {
      throw FormatError(where + "duplicate item '" + row.fields[0] + "'");
    }
    out.items.push_back(row.fields[0]);
    const std::string stage_text = trim(row.fields[1]);
    if (stage_text.empty()) {
      out.stages.emplace_back();
      continue;
    }
    const auto label = parse_int(stage_text);
    if (!label) throw FormatError(where + "stage '" + stage_text + "' is not an integer");
    if (*label == kMissing) {
      throw FormatError(where + "stage label 0 is reserved; leave the cell empty");
    }
    out.stages.push_back(*label);
  }
  if (out.items.empty()) throw FormatError(path.string() + ": no items");
  return out;
}

void write_ranking_file(const LabeledRanking& ranking, const fs::path& path) {
  std::string out = "item,stage\n";
  for (std::size_t i = 0; i < ranking.items.size(); ++i) {
    out += csv_field(ranking.items[i]) + ",";
    if (ranking.stages[i]) out += std::to_string(*ranking.stages[i]);
    out += "\n";
  }
  write_text_file(path, out);
}

std::pair<std::vector<int>, std::vector<int>> align_rankings(
    const LabeledRanking& a, const LabeledRanking& b) {
  if (a.items.size() != b.items.size()) {
    throw FormatError("ranking files list different item sets");
  }
  std::map<std::string, std::size_t> index_b;
  for (std::size_t i = 0; i < b.items.size(); ++i) index_b[b.items[i]] = i;
  std::pair<std::vector<int>, std::vector<int>> out;
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    const auto it = index_b.find(a.items[i]);
    if (it == index_b.end()) {
      throw FormatError("item '" + a.items[i] +
                        "' is missing from the second ranking file");
    }
    out.first.push_back(a.stages[i].value_or(kMissing));
    out.second.push_back(b.stages[it->second].value_or(kMissing));
  }
  return out;
}

CentralRanking center_from_labeled(const LabeledRanking& ranking,
                                   const QuestionnaireDataset& ds) {
  if (ranking.items.size() != ds.items.size()) {
    throw FormatError("prior center lists " +
                      std::to_string(ranking.items.size()) + " items, dataset has " +
                      std::to_string(ds.items.size()));
  }
  std::vector<int> stages(ds.items.size(), kMissing);
  for (std::size_t k = 0; k < ranking.items.size(); ++k) {
    const std::size_t i = ds.items.find(ranking.items[k]);
    if (i == ds.items.size()) {
      throw FormatError("prior center item '" + ranking.items[k] +
                        "' is not in the dataset");
    }
    if (!ranking.stages[k]) {
      throw FormatError("prior center leaves item '" + ranking.items[k] +
                        "' unranked");
    }
    const int s = ds.internal_stage(*ranking.stages[k]);
    if (!ds.domain.contains(s)) {
      throw FormatError("prior center stage label " +
                        std::to_string(*ranking.stages[k]) +
                        " outside the dataset's domain");
    }
    stages[i] = s;
  }
  return CentralRanking(std::move(stages), ds.domain);
}

void write_truth(const TruthRecord& truth, const QuestionnaireDataset& ds,
                 const fs::path& path, const Json& manifest) {
  Json j;
  j["manifest"] = manifest;
  j["items"] = ds.items.labels();
  j["l"] = ds.domain.max_stage;
  j["stage_label_offset"] = ds.stage_label_offset;
  j["center"] = external_stages(truth.center.stages(), ds.stage_label_offset);
  j["lambda"] = truth.lambda;
  j["censored"] = truth.censored_ids;
  write_text_file(path, dump(j));
}

TruthRecord read_truth(const fs::path& path, const QuestionnaireDataset& ds) {
  const Json j = parse_json_file(path);
  try {
    if (j.at("items").get<std::vector<std::string>>() != ds.items.labels()) {
      throw FormatError(path.string() + ": truth items differ from the dataset");
    }
    TruthRecord out{center_from_external(j.at("center"), ds, path),
                    j.at("lambda").get<double>(), {}};
    if (j.contains("censored")) {
      out.censored_ids = j.at("censored").get<std::vector<std::string>>();
    }
    return out;
  } catch (const Json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

Json fit_report_json(const FitResult& result, const QuestionnaireDataset& ds,
                     const Json& manifest,
                     const std::optional<Evaluation>& evaluation) {
  const int offset = ds.stage_label_offset;
  Json j;
  j["manifest"] = manifest;
  j["items"] = ds.items.labels();
  j["l"] = ds.domain.max_stage;
  j["stage_label_offset"] = offset;
  j["map_center"] = external_stages(result.center_map.stages(), offset);
  j["lambda_map"] = result.lambda_map;
  j["map_log_posterior"] = map_estimate(result.trace).log_posterior;
  j["retained_samples"] = result.trace.samples.size();
  j["acceptance_rates"] = {{"center", result.trace.center_acceptance},
                           {"lambda", result.trace.lambda_acceptance}};
  Json stage_labels = Json::array();
  for (int s = 1; s <= ds.domain.max_stage; ++s) {
    stage_labels.push_back(ds.external_label(s));
  }
  Json rows = Json::array();
  for (std::size_t i = 0; i < result.marginals.items; ++i) {
    Json row = Json::array();
    for (int s = 1; s <= result.marginals.stages; ++s) {
      row.push_back(result.marginals.at(i, s));
    }
    rows.push_back(std::move(row));
  }
  j["stage_marginals"] = {{"stage_labels", stage_labels}, {"rows", rows}};
  if (evaluation) {
    j["evaluation"] = {
        {"truth_center", external_stages(evaluation->truth_center.stages(), offset)},
        {"truth_lambda", evaluation->truth_lambda},
        {"center_distance", evaluation->center_distance},
        {"lambda_abs_error", evaluation->lambda_abs_error}};
  }
  return j;
}

void write_fit_report(const FitResult& result, const QuestionnaireDataset& ds,
                      const fs::path& path, const Json& manifest,
                      const std::optional<Evaluation>& evaluation) {
  write_text_file(path, dump(fit_report_json(result, ds, manifest, evaluation)));
}

CentralRanking read_report_center(const fs::path& path,
                                  const QuestionnaireDataset& ds) {
  const Json j = parse_json_file(path);
  if (!j.contains("map_center")) {
    throw FormatError(path.string() + ": report has no map_center");
  }
  return center_from_external(j.at("map_center"), ds, path);
}

void write_trace(const McmcTrace& trace, const fs::path& path,
                 int stage_label_offset) {
  std::string out;
  for (const auto& s : trace.samples) {
    Json line;
    line["iter"] = s.iteration;
    line["lambda"] = s.lambda;
    line["log_post"] = s.log_posterior;
    line["stages"] = external_stages(s.center.stages(), stage_label_offset);
    out += line.dump() + "\n";
  }
  write_text_file(path, out);
}

std::string heatmap_svg(const StageMarginals& marginals,
                        const QuestionnaireDataset& ds, const Json& manifest) {
  constexpr int kLabelWidth = 320;
  constexpr int kCellWidth = 56;
  constexpr int kCellHeight = 28;
  constexpr int kHeader = 32;
  const int width = kLabelWidth + kCellWidth * marginals.stages + 8;
  const int height = kHeader + kCellHeight * static_cast<int>(marginals.items) + 8;

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << width << "\" height=\"" << height << "\">\n";
  if (!manifest.is_null()) {
    svg << "<metadata>" << xml_escape(manifest.dump()) << "</metadata>\n";
  }
  svg << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (int s = 1; s <= marginals.stages; ++s) {
    svg << "<text x=\"" << kLabelWidth + kCellWidth * (s - 1) + kCellWidth / 2
        << "\" y=\"20\" text-anchor=\"middle\">Stage " << ds.external_label(s)
        << "</text>\n";
  }
  for (std::size_t i = 0; i < marginals.items; ++i) {
    const int y = kHeader + kCellHeight * static_cast<int>(i);
    svg << "<text x=\"" << kLabelWidth - 8 << "\" y=\"" << y + 18
        << "\" text-anchor=\"end\">" << xml_escape(ds.items.label(i))
        << "</text>\n";
    for (int s = 1; s <= marginals.stages; ++s) {
      svg << "<rect class=\"cell\" data-item=\"" << i << "\" data-stage=\""
          << ds.external_label(s) << "\" x=\""
          << kLabelWidth + kCellWidth * (s - 1) << "\" y=\"" << y
          << "\" width=\"" << kCellWidth << "\" height=\"" << kCellHeight
          << "\" fill=\"#08306b\" fill-opacity=\""
          << format_double(marginals.at(i, s))
          << "\" stroke=\"#bbbbbb\"/>\n";
    }
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

void write_heatmap_svg(const StageMarginals& marginals,
                       const QuestionnaireDataset& ds, const fs::path& path,
                       const Json& manifest) {
  write_text_file(path, heatmap_svg(marginals, ds, manifest));
}

}  // namespace pmallows
