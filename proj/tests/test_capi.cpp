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
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "pmallows/pmallows.h"
#include "scratch.hpp"

extern "C" int pm_c_smoke(void);

namespace {

struct Cache {
  Cache() { REQUIRE(pm_cache_create(0, &ptr) == PM_OK); }
  ~Cache() { pm_cache_destroy(ptr); }
  pm_cache* ptr = nullptr;
};

std::string data_file(const char* name) {
  return std::string(PMALLOWS_DATA_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("header compiles and works from C") { CHECK(pm_c_smoke() == 0); }

TEST_CASE("status names and version") {
  CHECK(std::string(pm_version()) == "0.1.0");
  CHECK(std::string(pm_status_name(PM_OK)) == "ok");
  CHECK(std::string(pm_status_name(PM_ERR_CAPACITY)) == "capacity error");
}

TEST_CASE("distance and partition function") {
  const int x[3] = {1, 2, PM_MISSING};
  const int y[3] = {2, 2, 1};
  pm_pair_tally t{};
  REQUIRE(pm_distance(x, y, 3, 0.5, &t) == PM_OK);
  CHECK(t.tied_one == 1);
  CHECK(t.dropped == 2);
  CHECK(t.distance == 0.5);
  CHECK(pm_distance(x, y, 3, 0.2, &t) == PM_ERR_DOMAIN);
  CHECK(std::string(pm_last_error()).find("0.5") != std::string::npos);

  Cache cache;
  const int c[2] = {1, 2};
  double v = 0.0;
  REQUIRE(pm_log_partition(c, 2, 2, 1.0, 0.5, cache.ptr, &v) == PM_OK);
  CHECK(std::exp(v) == doctest::Approx(2.580940760596709).epsilon(1e-13));
  CHECK(std::string(pm_last_error()).empty());
  CHECK(pm_log_partition(c, 2, 2, 0.0, 0.5, cache.ptr, &v) == PM_ERR_DOMAIN);

  double lp = 0.0;
  REQUIRE(pm_log_pmf(c, c, 2, 2, 1.0, 0.5, cache.ptr, &lp) == PM_OK);
  CHECK(lp == doctest::Approx(-v));

  pm_cache* small = nullptr;
  REQUIRE(pm_cache_create(10, &small) == PM_OK);
  const int wide[4] = {1, 1, 2, 2};
  CHECK(pm_log_partition(wide, 4, 2, 1.0, 0.5, small, &v) == PM_ERR_CAPACITY);
  CHECK(std::string(pm_last_error()).find("2^4") != std::string::npos);
  pm_cache_destroy(small);
}

TEST_CASE("sampling is seeded") {
  Cache cache;
  const int c[3] = {1, 2, 3};
  std::vector<int> a(30), b(30);
  REQUIRE(pm_sample(c, 3, 3, 1.0, 0.5, 5, 10, cache.ptr, a.data()) == PM_OK);
  REQUIRE(pm_sample(c, 3, 3, 1.0, 0.5, 5, 10, cache.ptr, b.data()) == PM_OK);
  CHECK(a == b);
  int u[4];
  REQUIRE(pm_uniform_ranking(4, 3, 1, u) == PM_OK);
  for (int s : u) CHECK((s >= 1 && s <= 3));
}

TEST_CASE("dataset handles") {
  pm_dataset* ds = nullptr;
  REQUIRE(pm_dataset_read(data_file("ppa_shaped_synthetic.csv").c_str(), nullptr,
                          &ds) == PM_OK);
  CHECK(pm_dataset_item_count(ds) == 8);
  CHECK(pm_dataset_respondent_count(ds) == 30);
  CHECK(pm_dataset_stage_count(ds) == 4);
  CHECK(pm_dataset_stage_label_offset(ds) == 2);
  CHECK(std::string(pm_dataset_item_label(ds, 1)) == "Gluttonous");
  double rates[8];
  REQUIRE(pm_dataset_response_rates(ds, rates, 8) == PM_OK);
  CHECK(rates[0] == 23.0 / 30.0);
  CHECK(pm_dataset_response_rates(ds, rates, 7) == PM_ERR_DOMAIN);
  int stages[8];
  REQUIRE(pm_dataset_stages(ds, 0, stages) == PM_OK);
  CHECK(pm_dataset_stages(ds, 30, stages) == PM_ERR_DOMAIN);

  pm_dataset* filtered = nullptr;
  size_t dropped = 99;
  REQUIRE(pm_dataset_filter(ds, 0.5, &filtered, &dropped) == PM_OK);
  CHECK(pm_dataset_item_count(filtered) == 6);
  pm_dataset_destroy(filtered);

  pm_ranking* prior = nullptr;
  REQUIRE(pm_ranking_read(data_file("ppa_prior_center.csv").c_str(), &prior) == PM_OK);
  CHECK(pm_ranking_item_count(prior) == 8);
  int center[8];
  REQUIRE(pm_ranking_to_center(prior, ds, center) == PM_OK);
  CHECK(std::vector<int>(center, center + 8) == std::vector<int>{1, 2, 2, 2, 2, 3, 3, 4});
  pm_pair_tally t{};
  REQUIRE(pm_ranking_compare(prior, prior, 0.5, &t) == PM_OK);
  CHECK(t.distance == 0.0);
  pm_ranking_destroy(prior);
  pm_dataset_destroy(ds);

  pm_dataset* missing = nullptr;
  CHECK(pm_dataset_read("/nonexistent/x.csv", nullptr, &missing) == PM_ERR_IO);
  CHECK(missing == nullptr);
}

TEST_CASE("simulate, fit and report through handles") {
  scratch::TempDir dir("capi");
  Cache cache;
  const int truth_center[4] = {1, 2, 2, 3};
  pm_simulate_config sim;
  pm_simulate_config_init(&sim);
  sim.n = 4;
  sim.l = 3;
  sim.center = truth_center;
  sim.lambda = 0.5;
  sim.respondents = 40;
  sim.missing_percent = 10.0;
  sim.seed = 3;
  pm_dataset* ds = nullptr;
  pm_truth* truth = nullptr;
  REQUIRE(pm_simulate(&sim, cache.ptr, &ds, &truth) == PM_OK);
  CHECK(pm_dataset_respondent_count(ds) == 40);
  CHECK(pm_truth_censored_count(truth) == 4);
  CHECK(pm_truth_lambda(truth) == 0.5);

  const std::string csv = (dir / "sim.csv").string();
  REQUIRE(pm_dataset_write(ds, csv.c_str(), R"({"note": "x"})") == PM_OK);
  REQUIRE(pm_truth_write(truth, ds, (dir / "sim.truth.json").string().c_str(),
                         "{}") == PM_OK);
  pm_truth* back = nullptr;
  REQUIRE(pm_truth_read((dir / "sim.truth.json").string().c_str(), ds, &back) == PM_OK);
  int tc[4];
  REQUIRE(pm_truth_center(back, tc, 4) == PM_OK);
  CHECK(std::vector<int>(tc, tc + 4) == std::vector<int>{1, 2, 2, 3});
  pm_truth_destroy(back);

  pm_fit_config cfg;
  pm_fit_config_init(&cfg);
  const int prior[4] = {2, 2, 2, 2};
  cfg.prior_center = prior;
  cfg.seed = 8;
  cfg.iterations = 600;
  cfg.burn_in = 200;
  pm_fit* fit = nullptr;
  REQUIRE(pm_fit_run(ds, &cfg, cache.ptr, &fit) == PM_OK);
  CHECK(pm_fit_sample_count(fit) == 400);
  int map[4];
  REQUIRE(pm_fit_map_center(fit, map, 4) == PM_OK);
  CHECK(pm_fit_map_center(fit, map, 3) == PM_ERR_DOMAIN);
  CHECK(pm_fit_lambda_map(fit) > 0.0);
  CHECK(std::isfinite(pm_fit_map_log_posterior(fit)));
  double ca = -1, la = -1;
  pm_fit_acceptance(fit, &ca, &la);
  CHECK((ca >= 0.0 && ca <= 1.0));
  CHECK((la > 0.0 && la <= 1.0));
  std::vector<double> marg(12);
  REQUIRE(pm_fit_marginals(fit, marg.data(), marg.size()) == PM_OK);
  CHECK(marg[0] + marg[1] + marg[2] == doctest::Approx(1.0));

  const std::string report = (dir / "report.json").string();
  REQUIRE(pm_fit_write_report(fit, ds, report.c_str(), R"({"seed": 8})", truth) ==
          PM_OK);
  const auto j = nlohmann::json::parse(scratch::slurp(report));
  CHECK(j.at("evaluation").at("truth_lambda") == 0.5);
  REQUIRE(pm_fit_write_trace(fit, ds, (dir / "t.jsonl").string().c_str()) == PM_OK);
  REQUIRE(pm_fit_write_heatmap(fit, ds, (dir / "h.svg").string().c_str(), nullptr) ==
          PM_OK);
  CHECK(pm_fit_write_report(fit, ds, report.c_str(), "{not json", nullptr) ==
        PM_ERR_DOMAIN);
  pm_fit_destroy(fit);

  cfg.lambda_init = 1e200;
  CHECK(pm_fit_run(ds, &cfg, cache.ptr, &fit) == PM_ERR_INIT);
  cfg.lambda_init = 1.0;
  cfg.prior_center = nullptr;
  CHECK(pm_fit_run(ds, &cfg, cache.ptr, &fit) == PM_ERR_DOMAIN);

  pm_truth_destroy(truth);
  pm_dataset_destroy(ds);
}

TEST_CASE("destroy functions accept null") {
  pm_cache_destroy(nullptr);
  pm_dataset_destroy(nullptr);
  pm_truth_destroy(nullptr);
  pm_fit_destroy(nullptr);
  pm_ranking_destroy(nullptr);
}
