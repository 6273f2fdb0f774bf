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
#include <string>
#include <vector>

#include "cli_runner.hpp"
#include "doctest.h"
#include "json.hpp"
#include "scratch.hpp"

using cli::q;

namespace {

const std::string kData = std::string(PMALLOWS_DATA_DIR) + "/ppa_shaped_synthetic.csv";
const std::string kPrior = std::string(PMALLOWS_DATA_DIR) + "/ppa_prior_center.csv";

std::string simulate_args(const std::filesystem::path& stem) {
  return "simulate --n 4 --l 3 --lambda 0.5 --center 1,2,2,3 --M 25 "
         "--missing-pct 20 --seed 4 --out " +
         q(stem);
}

}  // namespace

TEST_CASE("exit codes") {
  scratch::TempDir dir("cli");
  const auto log = dir / "log";
  CHECK(cli::run("fit --prior-center uniform-random --seed 1 --out-dir " +
                     q(dir / "o"),
                 log)
            .code == 2);
  CHECK(cli::run("frobnicate", log).code == 2);

  const auto big = cli::run("simulate --n 13 --l 4 --lambda 1 --center-random --M 5 "
                            "--missing-pct 0 --seed 1 --out " +
                                q(dir / "big"),
                            log);
  CHECK(big.code == 3);
  CHECK(big.out.find("4^13") != std::string::npos);

  const auto init = cli::run("fit --data '" + kData + "' --prior-center '" + kPrior +
                                 "' --lambda-init 1e200 --seed 1 --out-dir " +
                                 q(dir / "o"),
                             log);
  CHECK(init.code == 4);

  CHECK(cli::run("fit --data " + q(dir / "absent.csv") +
                     " --prior-center uniform-random --seed 1 --out-dir " + q(dir / "o"),
                 log)
            .code == 2);
  scratch::spit(dir / "bad.csv", "respondent_id,item,stage\nr1,a,9\n");
  scratch::spit(dir / "bad.json", R"({"items": ["a"], "l": 4})");
  const auto bad = cli::run("fit --data " + q(dir / "bad.csv") +
                                " --prior-center uniform-random --seed 1 --out-dir " +
                                q(dir / "o"),
                            log);
  CHECK(bad.code == 2);
  CHECK(bad.out.find("row 2") != std::string::npos);
  CHECK(cli::run("distance --p 0.3 '" + kPrior + "' '" + kPrior + "'", log).code == 2);
}

TEST_CASE("simulate writes data, sidecar and truth reproducibly") {
  scratch::TempDir dir("cli");
  const auto log = dir / "log";
  REQUIRE(cli::run(simulate_args(dir / "a"), log).code == 0);
  std::vector<std::string> first;
  for (const char* ext : {".csv", ".json", ".truth.json"}) {
    first.push_back(scratch::slurp(dir / ("a" + std::string(ext))));
  }
  REQUIRE(cli::run(simulate_args(dir / "a"), log).code == 0);
  std::size_t k = 0;
  for (const char* ext : {".csv", ".json", ".truth.json"}) {
    CHECK(scratch::slurp(dir / ("a" + std::string(ext))) == first[k++]);
  }
  const auto truth = nlohmann::json::parse(scratch::slurp(dir / "a.truth.json"));
  CHECK(truth.at("lambda") == 0.5);
  CHECK(truth.at("censored").size() == 5);
  const auto sidecar = nlohmann::json::parse(scratch::slurp(dir / "a.json"));
  CHECK(sidecar.at("l") == 3);
  CHECK(sidecar.at("manifest").at("seed") == 4);
}

TEST_CASE("fit on simulated data reports the evaluation") {
  scratch::TempDir dir("cli");
  const auto log = dir / "log";
  REQUIRE(cli::run(simulate_args(dir / "s"), log).code == 0);
  const std::string fit = "fit --data " + q(dir / "s.csv") +
                          " --prior-center uniform-random --seed 9 --out-dir ";
  const auto r1 = cli::run(fit + q(dir / "f1"), log);
  REQUIRE(r1.code == 0);
  CHECK(r1.out.find("MAP center") != std::string::npos);
  const std::vector<std::string> names = {"report.json", "trace.jsonl", "heatmap.svg"};
  std::vector<std::string> first;
  for (const auto& name : names) first.push_back(scratch::slurp(dir / "f1" / name));
  const auto r2 = cli::run(fit + q(dir / "f1"), log);
  REQUIRE(r2.code == 0);
  CHECK(r2.out == r1.out);
  for (std::size_t k = 0; k < names.size(); ++k) {
    CHECK(scratch::slurp(dir / "f1" / names[k]) == first[k]);
  }
  const auto trace = scratch::slurp(dir / "f1" / "trace.jsonl");
  CHECK(std::count(trace.begin(), trace.end(), '\n') == 1000);
  const auto report = nlohmann::json::parse(scratch::slurp(dir / "f1" / "report.json"));
  CHECK(report.at("retained_samples") == 1000);
  CHECK(report.at("evaluation").at("truth_lambda") == 0.5);
  CHECK(report.at("evaluation").contains("center_distance"));
  CHECK(report.at("map_center").size() == 4);
}

TEST_CASE("eval summarizes repeats reproducibly") {
  scratch::TempDir dir("cli");
  const auto log = dir / "log";
  const std::string args =
      "eval --n 4 --l 3 --lambda 0.5 --center 1,2,2,3 --M 20 --missing-pct 10 "
      "--seed 3 --iterations 300 --burn-in 100 --repeats 3 --out-dir ";
  REQUIRE(cli::run(args + q(dir / "e1"), log).code == 0);
  const auto csv = scratch::slurp(dir / "e1" / "eval.csv");
  REQUIRE(cli::run(args + q(dir / "e1") + " --threads 2", log).code == 0);
  CHECK(scratch::slurp(dir / "e1" / "eval.csv") == csv);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  CHECK(csv.find("\nmean,") != std::string::npos);
}

TEST_CASE("distance between ranking files") {
  scratch::TempDir dir("cli");
  scratch::spit(dir / "x.csv", "item,stage\na,1\nb,\nc,3\n");
  scratch::spit(dir / "y.csv", "item,stage\nc,2\na,2\nb,1\n");
  const auto r = cli::run("distance " + q(dir / "x.csv") + " " + q(dir / "y.csv"),
                          dir / "log");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("distance: 0.5\n", 0) == 0);
  CHECK(r.out.find("dropped: 2") != std::string::npos);
  const auto p1 = cli::run("distance --p 1 " + q(dir / "x.csv") + " " + q(dir / "y.csv"),
                           dir / "log");
  CHECK(p1.out.rfind("distance: 1\n", 0) == 0);
}
