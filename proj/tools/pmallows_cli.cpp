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
// pmallows command-line tool: simulate, fit, eval, distance.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pmallows/pmallows.h"

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitInit = 4;

// Carries a library failure up to main with its exit code.
struct CommandError : std::runtime_error {
  CommandError(int code, const std::string& message)
      : std::runtime_error(message), exit_code(code) {}
  int exit_code;
};

int exit_code_for(pm_status status) {
  switch (status) {
    case PM_OK: return kExitOk;
    case PM_ERR_CAPACITY: return kExitCapacity;
    case PM_ERR_INIT: return kExitInit;
    default: return kExitUsage;
  }
}

void check(pm_status status, const std::string& context) {
  if (status == PM_OK) return;
  throw CommandError(exit_code_for(status), context + ": " +
                                                pm_status_name(status) + ": " +
                                                pm_last_error());
}

template <typename T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using CachePtr = std::unique_ptr<pm_cache, Deleter<pm_cache, pm_cache_destroy>>;
using DatasetPtr =
    std::unique_ptr<pm_dataset, Deleter<pm_dataset, pm_dataset_destroy>>;
using TruthPtr = std::unique_ptr<pm_truth, Deleter<pm_truth, pm_truth_destroy>>;
using FitPtr = std::unique_ptr<pm_fit, Deleter<pm_fit, pm_fit_destroy>>;
using RankingPtr =
    std::unique_ptr<pm_ranking, Deleter<pm_ranking, pm_ranking_destroy>>;

CachePtr make_cache(std::uint64_t guard) {
  pm_cache* raw = nullptr;
  check(pm_cache_create(guard, &raw), "creating cache");
  return CachePtr(raw);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Uniform double in [lo, hi) from a seed, for the random chain start.
double uniform_from_seed(std::uint64_t seed, double lo, double hi) {
  const double u =
      static_cast<double>(derive_seed(seed, 0) >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

std::vector<int> parse_stage_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw CommandError(kExitUsage, "invalid stage list '" + text + "'");
    }
  }
  if (out.empty()) throw CommandError(kExitUsage, "empty stage list");
  return out;
}

std::string join(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out += (i ? "," : "") + std::to_string(v[i]);
  }
  return out;
}

Json base_manifest(const std::string& subcommand, std::uint64_t seed) {
  Json m;
  m["tool"] = "pmallows";
  m["version"] = pm_version();
  m["subcommand"] = subcommand;
  m["seed"] = seed;
  return m;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CommandError(kExitUsage, "cannot write '" + path.string() + "'");
  out << content;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw CommandError(kExitUsage,
                       "cannot create '" + dir.string() + "': " + ec.message());
  }
}

std::string format_number(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(6);
  os << v;
  return os.str();
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
  std::size_t n = 0;
  int l = 0;
  double lambda = 1.0;
  std::string center;
  bool center_random = false;
  std::size_t respondents = 100;
  double missing_pct = 0.0;
  double censor_location = 0.75;
  double censor_scale = 1.0;
  int stage_offset = 1;
  double p = 0.5;
  std::uint64_t seed = 0;
  std::uint64_t guard = 0;
  std::string out;
};

void add_simulate_flags(CLI::App* cmd, SimulateOptions& o, bool with_out) {
  cmd->add_option("--n", o.n, "Number of items")->required()->check(CLI::PositiveNumber);
  cmd->add_option("--l", o.l, "Number of stages")->required()->check(CLI::PositiveNumber);
  cmd->add_option("--lambda", o.lambda, "Generating spread")->required();
  cmd->add_option("--center", o.center, "Generating center, e.g. 1,2,2,3");
  cmd->add_flag("--center-random", o.center_random,
                "Draw the generating center uniformly");
  cmd->add_option("--M", o.respondents, "Respondents per dataset")
      ->required()->check(CLI::PositiveNumber);
  cmd->add_option("--missing-pct", o.missing_pct,
                  "Percent of respondents right-censored")
      ->required()->check(CLI::Range(0.0, 100.0));
  cmd->add_option("--censor-location", o.censor_location,
                  "Censor cut location as a fraction of n")
      ->capture_default_str();
  cmd->add_option("--censor-scale", o.censor_scale, "Censor cut std deviation")
      ->capture_default_str();
  cmd->add_option("--stage-offset", o.stage_offset,
                  "External label of internal stage 1")
      ->capture_default_str();
  cmd->add_option("--p", o.p, "Tie penalty in [0.5, 1]")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Random seed")->required();
  cmd->add_option("--guard", o.guard, "Enumeration guard (0 = 2^24)");
  if (with_out) {
    cmd->add_option("--out", o.out, "Output stem (writes .csv, .json, .truth.json)")
        ->required();
  }
}

std::vector<int> simulate_center(const SimulateOptions& o) {
  if (o.center_random == !o.center.empty()) {
    throw CommandError(kExitUsage,
                       "give exactly one of --center or --center-random");
  }
  std::vector<int> center(o.n);
  if (o.center_random) {
    check(pm_uniform_ranking(o.n, o.l, derive_seed(o.seed, 0xCE17E5ULL),
                             center.data()),
          "drawing center");
  } else {
    center = parse_stage_list(o.center);
    if (center.size() != o.n) {
      throw CommandError(kExitUsage, "--center has " +
                                         std::to_string(center.size()) +
                                         " entries, --n is " + std::to_string(o.n));
    }
  }
  return center;
}

Json simulate_config_json(const SimulateOptions& o,
                          const std::vector<int>& center) {
  return Json{{"n", o.n},
              {"l", o.l},
              {"lambda", o.lambda},
              {"center", center},
              {"center_random", o.center_random},
              {"M", o.respondents},
              {"missing_pct", o.missing_pct},
              {"censor_location", o.censor_location},
              {"censor_scale", o.censor_scale},
              {"stage_offset", o.stage_offset},
              {"p", o.p},
              {"guard", o.guard}};
}

std::pair<DatasetPtr, TruthPtr> run_simulation(const SimulateOptions& o,
                                               const std::vector<int>& center,
                                               std::uint64_t seed,
                                               pm_cache* cache) {
  pm_simulate_config cfg;
  pm_simulate_config_init(&cfg);
  cfg.n = o.n;
  cfg.l = o.l;
  cfg.center = center.data();
  cfg.lambda = o.lambda;
  cfg.respondents = o.respondents;
  cfg.missing_percent = o.missing_pct;
  cfg.censor_location_factor = o.censor_location;
  cfg.censor_scale = o.censor_scale;
  cfg.seed = seed;
  cfg.p = o.p;
  cfg.stage_label_offset = o.stage_offset;
  pm_dataset* ds = nullptr;
  pm_truth* truth = nullptr;
  check(pm_simulate(&cfg, cache, &ds, &truth), "simulating");
  return {DatasetPtr(ds), TruthPtr(truth)};
}

int cmd_simulate(const SimulateOptions& o) {
  const auto center = simulate_center(o);
  auto cache = make_cache(o.guard);
  auto [ds, truth] = run_simulation(o, center, o.seed, cache.get());

  const fs::path stem(o.out);
  if (stem.has_parent_path()) ensure_dir(stem.parent_path());
  const fs::path csv = stem.string() + ".csv";
  const fs::path truth_path = stem.string() + ".truth.json";

  Json manifest = base_manifest("simulate", o.seed);
  manifest["config"] = simulate_config_json(o, center);
  manifest["outputs"] = {{"dataset", csv.string()},
                         {"truth", truth_path.string()}};
  const Json extra = {{"manifest", manifest}};
  check(pm_dataset_write(ds.get(), csv.c_str(), extra.dump().c_str()),
        "writing dataset");
  check(pm_truth_write(truth.get(), ds.get(), truth_path.c_str(),
                       manifest.dump().c_str()),
        "writing truth");

  std::cout << "wrote " << pm_dataset_respondent_count(ds.get())
            << " respondents over " << o.n << " items to " << csv.string()
            << "\n"
            << "censored respondents: " << pm_truth_censored_count(truth.get())
            << "\n";
  return kExitOk;
}

// --------------------------------------------------------------------- fit

struct FitOptions {
  std::string data;
  std::string sidecar;
  std::string prior_center;
  std::string prior_spread = "coupled";
  double lambda_prior_scale = 1.0;
  std::size_t iterations = 1500;
  std::size_t burn_in = 500;
  std::size_t thinning = 1;
  double lambda_init = 1.0;
  double lambda_scale = 0.1;
  std::string init = "prior";
  std::string normalization = "restricted";
  double p = 0.5;
  double min_rate = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t guard = 0;
  std::string truth;
  std::string out_dir;
};

void add_chain_flags(CLI::App* cmd, FitOptions& o) {
  cmd->add_option("--iterations", o.iterations, "MCMC iterations R")
      ->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--burn-in", o.burn_in, "Discarded leading iterations")
      ->capture_default_str();
  cmd->add_option("--thinning", o.thinning, "Keep every k-th sample")
      ->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--lambda-init", o.lambda_init, "Chain start for lambda")
      ->capture_default_str();
  cmd->add_option("--lambda-scale", o.lambda_scale,
                  "Lambda random-walk scale (0 pins lambda)")
      ->capture_default_str();
  cmd->add_option("--prior-spread", o.prior_spread,
                  "'coupled' or a fixed spread for the center prior")
      ->capture_default_str();
  cmd->add_option("--lambda-prior-scale", o.lambda_prior_scale,
                  "Scale of the truncated-normal prior on lambda")
      ->capture_default_str();
  cmd->add_option("--normalization", o.normalization,
                  "Likelihood normalization under missingness")
      ->capture_default_str()
      ->check(CLI::IsMember({"restricted", "global"}));
}

pm_normalization parse_normalization(const std::string& s) {
  return s == "global" ? PM_NORMALIZATION_GLOBAL : PM_NORMALIZATION_RESTRICTED;
}

void apply_prior_spread(const std::string& text, pm_fit_config& cfg) {
  if (text == "coupled") {
    cfg.prior_spread_fixed = 0;
    return;
  }
  try {
    std::size_t used = 0;
    cfg.prior_spread = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    cfg.prior_spread_fixed = 1;
  } catch (const std::exception&) {
    throw CommandError(kExitUsage,
                       "--prior-spread must be 'coupled' or a number");
  }
}

Json chain_config_json(const FitOptions& o) {
  return Json{{"iterations", o.iterations},
              {"burn_in", o.burn_in},
              {"thinning", o.thinning},
              {"lambda_init", o.lambda_init},
              {"lambda_scale", o.lambda_scale},
              {"prior_spread", o.prior_spread},
              {"lambda_prior", {{"location", 0.0}, {"scale", o.lambda_prior_scale}}},
              {"normalization", o.normalization},
              {"p", o.p}};
}

int cmd_fit(const FitOptions& o) {
  if (o.init != "prior" && o.init != "random") {
    throw CommandError(kExitUsage, "--init must be 'prior' or 'random'");
  }
  pm_dataset* raw = nullptr;
  check(pm_dataset_read(o.data.c_str(),
                        o.sidecar.empty() ? nullptr : o.sidecar.c_str(), &raw),
        "reading dataset");
  DatasetPtr ds(raw);

  std::size_t dropped = 0;
  if (o.min_rate > 0.0) {
    pm_dataset* filtered = nullptr;
    check(pm_dataset_filter(ds.get(), o.min_rate, &filtered, &dropped),
          "filtering items");
    ds.reset(filtered);
  }

  const std::size_t n = pm_dataset_item_count(ds.get());
  const int l = pm_dataset_stage_count(ds.get());

  std::vector<int> prior_center(n);
  if (o.prior_center == "uniform-random") {
    check(pm_uniform_ranking(n, l, derive_seed(o.seed, 0x9A1ULL),
                             prior_center.data()),
          "drawing prior center");
  } else {
    pm_ranking* ranking = nullptr;
    check(pm_ranking_read(o.prior_center.c_str(), &ranking),
          "reading prior center");
    RankingPtr holder(ranking);
    check(pm_ranking_to_center(ranking, ds.get(), prior_center.data()),
          "matching prior center to dataset");
  }

  pm_fit_config cfg;
  pm_fit_config_init(&cfg);
  cfg.prior_center = prior_center.data();
  apply_prior_spread(o.prior_spread, cfg);
  cfg.lambda_prior_scale = o.lambda_prior_scale;
  cfg.iterations = o.iterations;
  cfg.burn_in = o.burn_in;
  cfg.thinning = o.thinning;
  cfg.lambda_init = o.lambda_init;
  cfg.lambda_proposal_scale = o.lambda_scale;
  cfg.seed = o.seed;
  cfg.normalization = parse_normalization(o.normalization);
  cfg.p = o.p;

  std::vector<int> initial(n);
  if (o.init == "random") {
    check(pm_uniform_ranking(n, l, derive_seed(o.seed, 0x1417ULL),
                             initial.data()),
          "drawing initial center");
    cfg.initial_center = initial.data();
    cfg.lambda_init = uniform_from_seed(derive_seed(o.seed, 0x1A4BDAULL), 0.5, 2.0);
  }

  fs::path truth_path = o.truth;
  if (truth_path.empty()) {
    fs::path guess = o.data;
    guess.replace_extension(".truth.json");
    if (fs::exists(guess)) truth_path = guess;
  }
  TruthPtr truth;
  if (!truth_path.empty()) {
    pm_truth* t = nullptr;
    check(pm_truth_read(truth_path.c_str(), ds.get(), &t), "reading truth");
    truth.reset(t);
  }

  auto cache = make_cache(o.guard);
  pm_fit* fit_raw = nullptr;
  check(pm_fit_run(ds.get(), &cfg, cache.get(), &fit_raw), "fitting");
  FitPtr fit(fit_raw);

  const fs::path out_dir(o.out_dir);
  ensure_dir(out_dir);
  const fs::path report = out_dir / "report.json";
  const fs::path trace = out_dir / "trace.jsonl";
  const fs::path heatmap = out_dir / "heatmap.svg";

  Json manifest = base_manifest("fit", o.seed);
  Json config = chain_config_json(o);
  config["init"] = o.init;
  config["lambda_init"] = cfg.lambda_init;
  config["initial_center"] =
      o.init == "random" ? Json(initial) : Json("prior center");
  config["prior_center"] = o.prior_center;
  config["prior_center_stages"] = prior_center;
  config["min_rate"] = o.min_rate;
  config["dropped_respondents"] = dropped;
  config["guard"] = o.guard;
  manifest["config"] = config;
  manifest["inputs"] = {{"data", o.data},
                        {"sidecar", o.sidecar},
                        {"truth", truth_path.string()}};
  manifest["outputs"] = {{"report", report.string()},
                         {"trace", trace.string()},
                         {"heatmap", heatmap.string()}};
  const std::string manifest_text = manifest.dump();

  check(pm_fit_write_report(fit.get(), ds.get(), report.c_str(),
                            manifest_text.c_str(), truth.get()),
        "writing report");
  check(pm_fit_write_trace(fit.get(), ds.get(), trace.c_str()), "writing trace");
  check(pm_fit_write_heatmap(fit.get(), ds.get(), heatmap.c_str(),
                             manifest_text.c_str()),
        "writing heatmap");

  std::vector<int> center(n);
  check(pm_fit_map_center(fit.get(), center.data(), n), "reading MAP");
  const int offset = pm_dataset_stage_label_offset(ds.get());
  double acc_center = 0.0;
  double acc_lambda = 0.0;
  pm_fit_acceptance(fit.get(), &acc_center, &acc_lambda);

  std::cout << "MAP center:\n";
  for (std::size_t i = 0; i < n; ++i) {
    std::cout << "  stage " << center[i] - 1 + offset << "  "
              << pm_dataset_item_label(ds.get(), i) << "\n";
  }
  std::cout << "lambda_MAP: " << format_number(pm_fit_lambda_map(fit.get()))
            << "\n"
            << "acceptance: center " << format_number(acc_center)
            << ", lambda " << format_number(acc_lambda) << "\n"
            << "retained samples: " << pm_fit_sample_count(fit.get()) << "\n"
            << "wrote " << report.string() << ", " << trace.string() << ", "
            << heatmap.string() << "\n";
  return kExitOk;
}

// -------------------------------------------------------------------- eval

struct EvalOptions {
  SimulateOptions sim;
  FitOptions fit;
  std::size_t repeats = 12;
  std::size_t threads = 0;
  std::string prior_center = "uniform-random";
  std::string out_dir;
};

struct RepeatRow {
  std::uint64_t data_seed = 0;
  std::uint64_t chain_seed = 0;
  double lambda_init = 0.0;
  double lambda_map = 0.0;
  double abs_error = 0.0;
  double distance = 0.0;
  double acc_center = 0.0;
  double acc_lambda = 0.0;
  std::vector<int> center_map;
};

RepeatRow run_repeat(const EvalOptions& o, const std::vector<int>& truth_center,
                     const std::vector<int>& prior_center, std::size_t r,
                     pm_cache* cache) {
  RepeatRow row;
  row.data_seed = derive_seed(o.sim.seed, 2 * r);
  row.chain_seed = derive_seed(o.sim.seed, 2 * r + 1);
  auto [ds, truth] = run_simulation(o.sim, truth_center, row.data_seed, cache);

  const std::size_t n = o.sim.n;
  std::vector<int> initial(n);
  check(pm_uniform_ranking(n, o.sim.l, derive_seed(row.chain_seed, 0x1417ULL),
                           initial.data()),
        "drawing initial center");
  row.lambda_init =
      uniform_from_seed(derive_seed(row.chain_seed, 0x1A4BDAULL), 0.5, 2.0);

  pm_fit_config cfg;
  pm_fit_config_init(&cfg);
  cfg.prior_center = prior_center.data();
  apply_prior_spread(o.fit.prior_spread, cfg);
  cfg.lambda_prior_scale = o.fit.lambda_prior_scale;
  cfg.initial_center = initial.data();
  cfg.iterations = o.fit.iterations;
  cfg.burn_in = o.fit.burn_in;
  cfg.thinning = o.fit.thinning;
  cfg.lambda_init = row.lambda_init;
  cfg.lambda_proposal_scale = o.fit.lambda_scale;
  cfg.seed = row.chain_seed;
  cfg.normalization = parse_normalization(o.fit.normalization);
  cfg.p = o.sim.p;

  pm_fit* raw = nullptr;
  check(pm_fit_run(ds.get(), &cfg, cache, &raw),
        "fitting repeat " + std::to_string(r));
  FitPtr fit(raw);
  row.center_map.resize(n);
  check(pm_fit_map_center(fit.get(), row.center_map.data(), n), "reading MAP");
  row.lambda_map = pm_fit_lambda_map(fit.get());
  row.abs_error = std::abs(row.lambda_map - o.sim.lambda);
  pm_pair_tally tally;
  check(pm_distance(truth_center.data(), row.center_map.data(), n, o.sim.p,
                    &tally),
        "distance to truth");
  row.distance = tally.distance;
  pm_fit_acceptance(fit.get(), &row.acc_center, &row.acc_lambda);
  return row;
}

int cmd_eval(EvalOptions o) {
  if (o.repeats == 0) throw CommandError(kExitUsage, "--repeats must be positive");
  const auto truth_center = simulate_center(o.sim);
  const std::size_t n = o.sim.n;

  std::vector<int> prior_center(n);
  if (o.prior_center == "uniform-random") {
    check(pm_uniform_ranking(n, o.sim.l, derive_seed(o.sim.seed, 0x9A1ULL),
                             prior_center.data()),
          "drawing prior center");
  } else if (o.prior_center == "truth") {
    prior_center = truth_center;
  } else {
    prior_center = parse_stage_list(o.prior_center);
    if (prior_center.size() != n) {
      throw CommandError(kExitUsage, "--prior-center length differs from --n");
    }
  }

  auto cache = make_cache(o.sim.guard);
  std::vector<RepeatRow> rows(o.repeats);
  std::vector<std::unique_ptr<CommandError>> errors(o.repeats);
  std::size_t threads = o.threads;
  if (threads == 0) {
    threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  }
  threads = std::min(threads, o.repeats);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < o.repeats; r = next++) {
      try {
        rows[r] = run_repeat(o, truth_center, prior_center, r, cache.get());
      } catch (const CommandError& e) {
        errors[r] = std::make_unique<CommandError>(e);
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) throw *e;
  }

  double mean_err = 0.0;
  double mean_dist = 0.0;
  for (const auto& row : rows) {
    mean_err += row.abs_error;
    mean_dist += row.distance;
  }
  mean_err /= static_cast<double>(rows.size());
  mean_dist /= static_cast<double>(rows.size());

  const fs::path out_dir(o.out_dir);
  ensure_dir(out_dir);
  const fs::path csv_path = out_dir / "eval.csv";
  const fs::path json_path = out_dir / "eval.json";

  Json manifest = base_manifest("eval", o.sim.seed);
  Json config = simulate_config_json(o.sim, truth_center);
  config["chain"] = chain_config_json(o.fit);
  config["chain"]["init"] = "random";
  config["repeats"] = o.repeats;
  config["prior_center"] = o.prior_center;
  config["prior_center_stages"] = prior_center;
  manifest["config"] = config;
  manifest["outputs"] = {{"csv", csv_path.string()}, {"summary", json_path.string()}};

  std::string csv =
      "repeat,data_seed,chain_seed,lambda_init,lambda_map,abs_error_lambda,"
      "distance_to_truth,acceptance_center,acceptance_lambda,map_center\n";
  Json repeats = Json::array();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const Json values = {row.lambda_init, row.lambda_map, row.abs_error,
                         row.distance,    row.acc_center, row.acc_lambda};
    csv += std::to_string(r) + "," + std::to_string(row.data_seed) + "," +
           std::to_string(row.chain_seed);
    for (const auto& v : values) csv += "," + v.dump();
    csv += ",\"" + join(row.center_map) + "\"\n";
    repeats.push_back({{"repeat", r},
                       {"data_seed", row.data_seed},
                       {"chain_seed", row.chain_seed},
                       {"lambda_init", row.lambda_init},
                       {"lambda_map", row.lambda_map},
                       {"abs_error_lambda", row.abs_error},
                       {"distance_to_truth", row.distance},
                       {"acceptance", {{"center", row.acc_center},
                                       {"lambda", row.acc_lambda}}},
                       {"map_center", row.center_map}});
  }
  csv += "mean,,,,," + Json(mean_err).dump() + "," + Json(mean_dist).dump() +
         ",,,\n";
  write_file(csv_path, csv);

  Json summary;
  summary["manifest"] = manifest;
  summary["repeats"] = repeats;
  summary["mean_abs_error_lambda"] = mean_err;
  summary["mean_distance_to_truth"] = mean_dist;
  write_file(json_path, summary.dump(2) + "\n");

  std::cout << "repeats: " << rows.size() << "\n"
            << "mean |lambda_MAP - lambda_0|: " << format_number(mean_err) << "\n"
            << "mean d_p(pi_0, pi_MAP): " << format_number(mean_dist) << "\n"
            << "wrote " << csv_path.string() << ", " << json_path.string()
            << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- distance

int cmd_distance(const std::string& first, const std::string& second,
                 double p) {
  pm_ranking* a = nullptr;
  check(pm_ranking_read(first.c_str(), &a), "reading " + first);
  RankingPtr ha(a);
  pm_ranking* b = nullptr;
  check(pm_ranking_read(second.c_str(), &b), "reading " + second);
  RankingPtr hb(b);
  pm_pair_tally tally;
  check(pm_ranking_compare(a, b, p, &tally), "comparing rankings");
  std::cout << "distance: " << format_number(tally.distance) << "\n"
            << "discordant: " << tally.discordant << "\n"
            << "tied_one: " << tally.tied_one << "\n"
            << "tied_both: " << tally.tied_both << "\n"
            << "concordant: " << tally.concordant << "\n"
            << "dropped: " << tally.dropped << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mallows model for partial and right-censored rankings"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pm_version()));

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic dataset");
  add_simulate_flags(simulate, sim, true);

  FitOptions fit;
  auto* fitcmd = app.add_subcommand("fit", "Fit the model by MCMC");
  fitcmd->add_option("--data", fit.data, "Dataset CSV")->required();
  fitcmd->add_option("--sidecar", fit.sidecar,
                     "Dataset sidecar JSON (default: <data stem>.json)");
  fitcmd->add_option("--prior-center", fit.prior_center,
                     "Ranking file (item,stage) or 'uniform-random'")
      ->required();
  add_chain_flags(fitcmd, fit);
  fitcmd->add_option("--init", fit.init,
                     "'prior' starts at the prior center and --lambda-init; "
                     "'random' draws both")
      ->capture_default_str();
  fitcmd->add_option("--p", fit.p, "Tie penalty in [0.5, 1]")->capture_default_str();
  fitcmd->add_option("--min-rate", fit.min_rate,
                     "Drop items ranked by fewer than this fraction")
      ->capture_default_str()->check(CLI::Range(0.0, 1.0));
  fitcmd->add_option("--truth", fit.truth,
                     "Truth JSON (default: <data stem>.truth.json if present)");
  fitcmd->add_option("--seed", fit.seed, "Random seed")->required();
  fitcmd->add_option("--guard", fit.guard, "Enumeration guard (0 = 2^24)");
  fitcmd->add_option("--out-dir", fit.out_dir, "Output directory")->required();

  EvalOptions eval;
  auto* evalcmd = app.add_subcommand(
      "eval", "Repeat simulate -> fit and summarize recovery error");
  add_simulate_flags(evalcmd, eval.sim, false);
  add_chain_flags(evalcmd, eval.fit);
  evalcmd->add_option("--repeats", eval.repeats, "Number of repeats")
      ->capture_default_str();
  evalcmd->add_option("--threads", eval.threads, "Worker threads (0 = all cores)");
  evalcmd->add_option("--prior-center", eval.prior_center,
                      "'uniform-random', 'truth' or a stage list")
      ->capture_default_str();
  evalcmd->add_option("--out-dir", eval.out_dir, "Output directory")->required();

  std::string first;
  std::string second;
  double p = 0.5;
  auto* distance = app.add_subcommand(
      "distance", "Penalized Kendall tau between two ranking files");
  distance->add_option("first", first, "Ranking CSV (item,stage)")->required();
  distance->add_option("second", second, "Ranking CSV (item,stage)")->required();
  distance->add_option("--p", p, "Tie penalty in [0.5, 1]")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(sim);
    if (*fitcmd) return cmd_fit(fit);
    if (*evalcmd) return cmd_eval(eval);
    if (*distance) return cmd_distance(first, second, p);
  } catch (const CommandError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code;
  }
  return kExitUsage;
}
