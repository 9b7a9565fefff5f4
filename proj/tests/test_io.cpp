// Copyright 2026 The qpart Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "qpart/instances.hpp"
#include "qpart/io.hpp"
#include "qpart/runner.hpp"

namespace {

std::filesystem::path scratch_path(const std::string& name) {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "qpart_io_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("g17 formatting round-trips doubles exactly") {
  for (double value :
       {0.1, 1.0 / 3.0, 3.141592653589793, 1e-300, 1e300, 2e-3, 0.25,
        6.9667331856244186, -0.0079947399058319414}) {
    CHECK(std::stod(qpart::format_g17(value)) == value);
  }
  CHECK(qpart::format_g17(1.0) == "1");
  CHECK(qpart::format_g17(0.25) == "0.25");
  CHECK(std::isinf(std::stod(qpart::format_g17(
      std::numeric_limits<double>::infinity()))));
}

TEST_CASE("instance files round-trip losslessly") {
  std::vector<qpart::ProblemInstance> instances;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    instances.push_back(qpart::gen_instance(7, 9, seed));
  }
  const std::string path = scratch_path("roundtrip.jsonl").string();
  qpart::write_instances_jsonl(path, instances);
  const std::vector<qpart::ProblemInstance> loaded =
      qpart::read_instances_jsonl(path);
  REQUIRE(loaded.size() == instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    CHECK(loaded[i].n == instances[i].n);
    CHECK(loaded[i].k == instances[i].k);
    CHECK(loaded[i].seed == instances[i].seed);
    CHECK(loaded[i].raw_weights == instances[i].raw_weights);
  }
  // No temp file left behind.
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
}

TEST_CASE("malformed instance lines identify their line number") {
  CHECK_THROWS_WITH_AS(
      qpart::instances_from_jsonl(
          "{\"n\":2,\"k\":2,\"weights\":[1,2],\"seed\":1}\nnot json\n"),
      doctest::Contains("line 2"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      qpart::instances_from_jsonl(
          "{\"n\":3,\"k\":2,\"weights\":[1,2],\"seed\":1}\n"),
      doctest::Contains("line 1"), std::runtime_error);
  // Blank lines are tolerated.
  const std::vector<qpart::ProblemInstance> ok = qpart::instances_from_jsonl(
      "\n{\"n\":2,\"k\":2,\"weights\":[3,4],\"seed\":9}\n\n");
  REQUIRE(ok.size() == 1);
  CHECK(ok[0].raw_weights == std::vector<std::int64_t>{3, 4});
}

TEST_CASE("trace CSV layout") {
  qpart::RunTrace trace;
  trace.instance_id = 7;
  trace.probs = {0.25, 0.5};
  trace.norms = {1.0, 1.0};
  CHECK(qpart::traces_to_csv({trace}) ==
        "instance_id,T,P_T,norm\n"
        "7,0,0.25,1\n"
        "7,1,0.5,1\n");
}

TEST_CASE("sweep CSV carries one quantile column per requested quantile") {
  qpart::SweepRecord rec;
  rec.n = 8;
  rec.k = 8;
  rec.gamma = 0.25;
  rec.t_opt = 3;
  rec.q_quantiles = {0.5, 2.0};
  const std::string csv =
      qpart::sweep_records_to_csv({rec}, {0.25, 0.75});
  const std::string header = csv.substr(0, csv.find('\n'));
  CHECK(header ==
        "n,k,gamma,r,T_opt,P_opt,T_total_median,mean_NA,Q_median,"
        "Q_q0.25,Q_q0.75,physical_time,instances,attempts,flagged");
  CHECK(csv.find("\n8,8,0.25,0,3,") != std::string::npos);
}

TEST_CASE("ledger JSON is machine-readable") {
  qpart::QueryLedger ledger;
  ledger.oracle_queries = 87;
  ledger.physical_time = 2784.0;
  ledger.layers = {{1, 2, 1, 2}, {2, 3, 5, 15}, {3, 2, 35, 70}};
  const nlohmann::json doc =
      nlohmann::json::parse(qpart::ledger_to_json(ledger));
  CHECK(doc["total"] == 87);
  CHECK(doc["physical_time"] == 2784.0);
  REQUIRE(doc["layers"].size() == 3);
  CHECK(doc["layers"][1]["l"] == 2);
  CHECK(doc["layers"][1]["T_l"] == 3);
  CHECK(doc["layers"][1]["tau_l"] == 5);
  CHECK(doc["layers"][1]["queries"] == 15);
}

TEST_CASE("atomic_write replaces content and cleans up") {
  const std::string path = scratch_path("atomic.txt").string();
  qpart::atomic_write(path, "first");
  CHECK(qpart::read_file(path) == "first");
  qpart::atomic_write(path, "second");
  CHECK(qpart::read_file(path) == "second");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  CHECK_THROWS(qpart::read_file(scratch_path("missing.txt").string()));
}
