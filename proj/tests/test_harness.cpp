//
// Copyright 2026 the dplang authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dplang/harness.hpp"

#include <cstring>
#include <sstream>

#include "doctest.h"

using namespace dplang;

namespace {

// Minimal CSV splitter for the round-trip check.
std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

std::vector<ResultRecord> ParseCsvBack(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  REQUIRE(std::getline(in, line));
  REQUIRE(line == kCsvHeader);
  std::vector<ResultRecord> records;
  while (std::getline(in, line)) {
    auto cells = SplitCsv(line);
    REQUIRE(cells.size() == 19);
    ResultRecord r;
    r.task = cells[0];
    r.instance = cells[1];
    r.mechanism = cells[2];
    r.n = std::stoull(cells[3]);
    r.epsilon = std::stod(cells[4]);
    r.delta = std::stod(cells[5]);
    auto opt_u = [](const std::string& s) -> std::optional<std::uint64_t> {
      if (s.empty()) return std::nullopt;
      return std::stoull(s);
    };
    auto opt_d = [](const std::string& s) -> std::optional<double> {
      if (s.empty()) return std::nullopt;
      return std::stod(s);
    };
    r.f = opt_u(cells[6]);
    r.g = opt_u(cells[7]);
    r.h = opt_u(cells[8]);
    r.witness_bound = opt_u(cells[9]);
    r.trials = std::stoull(cells[10]);
    r.failures = std::stoull(cells[11]);
    r.estimate = opt_d(cells[12]);
    r.ci_low = opt_d(cells[13]);
    r.ci_high = opt_d(cells[14]);
    r.theoretical_bound = opt_d(cells[15]);
    r.lower_bound = opt_d(cells[16]);
    r.seed = std::stoull(cells[17]);
    r.wall_time_ms = std::stoll(cells[18]);
    records.push_back(std::move(r));
  }
  return records;
}

std::string Csv(const std::vector<ResultRecord>& records) {
  std::ostringstream out;
  EmitResults(records, "csv", out);
  return out.str();
}

std::string StripWallTime(std::string csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    out << line.substr(0, line.rfind(',')) << "\n";
  }
  return out.str();
}

}  // namespace

TEST_CASE("schedule evaluation") {
  CHECK(Schedule::Constant(12).Evaluate(99) == 12);
  CHECK(Schedule::Parse("7").Evaluate(5) == 7);

  Schedule sqrt_log = Schedule::Parse("sqrt-log:1:12");
  CHECK(sqrt_log.Evaluate(20000) == 12);  // floor dominates at desk scale
  CHECK(Schedule::Parse("sqrt-log:9:1").Evaluate(20000) ==
        10);  // ceil(sqrt(9 ln 20000)) = ceil(9.44)

  CHECK(Schedule::Parse("poly:0.5:1").Evaluate(100) == 10);
  CHECK(Schedule::Parse("poly:0.5:25").Evaluate(100) == 25);
  CHECK(Schedule::Parse("linear-floor:0.125").Evaluate(2000) == 125);
  CHECK(Schedule::Parse("linear-floor:0.125").Evaluate(4) == 1);  // clamped
  CHECK(Schedule::Parse("sublinear:2:0.5").Evaluate(100) == 20);
  CHECK(Schedule::Parse("auto").IsAuto());
  CHECK_THROWS_AS(Schedule::Parse("mystery:1").Evaluate(10), ConfigError);
  CHECK_THROWS_AS(Schedule{}.Evaluate(10), ConfigError);
}

TEST_CASE("config parsing") {
  SUBCASE("defaults") {
    ExperimentConfig cfg = ParseConfig(R"({"task":"identify"})");
    CHECK(cfg.task == Task::kIdentify);
    CHECK(cfg.instance.name == "ipp-d");
    CHECK(cfg.mechanism == "pure");
    CHECK(cfg.n_values == std::vector<std::uint64_t>{1000});
    CHECK(cfg.epsilons == std::vector<double>{1.0});
  }

  SUBCASE("scalar and list forms") {
    ExperimentConfig cfg = ParseConfig(
        R"({"task":"identify","n":[100,200],"epsilon":0.5,"f":12})");
    CHECK(cfg.n_values.size() == 2);
    CHECK(cfg.epsilons == std::vector<double>{0.5});
    CHECK(cfg.f.Evaluate(1) == 12);
  }

  SUBCASE("schedule objects") {
    ExperimentConfig cfg = ParseConfig(
        R"({"task":"identify","f":{"form":"sqrt-log","c":1,"floor":12}})");
    CHECK(cfg.f.Evaluate(20000) == 12);
  }

  SUBCASE("atoms shorthand") {
    ExperimentConfig cfg = ParseConfig(
        R"({"task":"identify","instance":"atoms:5=0.75,9=0.25",
            "languages":[{"kind":"finite","indices":[5]},
                         {"kind":"finite","indices":[5,9]}]})");
    CHECK(cfg.instance.name == "custom");
    Instance inst = ResolveInstance(cfg.instance, 100);
    CHECK(inst.optimal_index == 2);
    CHECK(inst.population_errs[0] == 0.25);
  }

  SUBCASE("rejections name the field") {
    CHECK_THROWS_WITH_AS(ParseConfig("{nope"),
                         doctest::Contains("not valid JSON"), ConfigError);
    CHECK_THROWS_WITH_AS(ParseConfig(R"({"task":"dance"})"),
                         doctest::Contains("task"), ConfigError);
    CHECK_THROWS_WITH_AS(ParseConfig(R"({"task":"identify","epsilon":0})"),
                         doctest::Contains("epsilon"), ConfigError);
    CHECK_THROWS_WITH_AS(ParseConfig(R"({"task":"identify","delta":1.5})"),
                         doctest::Contains("delta"), ConfigError);
    CHECK_THROWS_WITH_AS(
        ParseConfig(R"({"task":"identify","mechanism":"public"})"),
        doctest::Contains("mechanism"), ConfigError);
    CHECK_THROWS_WITH_AS(ParseConfig(R"({"task":"identify","typo":1})"),
                         doctest::Contains("typo"), ConfigError);
  }

  SUBCASE("unknown instances fail at resolution") {
    ExperimentConfig cfg =
        ParseConfig(R"({"task":"identify","instance":"iidp-d"})");
    cfg.instance.name = "martian";
    CHECK_THROWS_AS(ResolveInstance(cfg.instance, 100), InstanceError);
  }
}

TEST_CASE("identification grid runs") {
  ExperimentConfig cfg = ParseConfig(R"({
    "task": "identify", "instance": "ipp-d", "mechanism": "pure",
    "n": [50, 100], "epsilon": [0.5, 1.0], "f": 3,
    "trials": 300, "seed": 11
  })");
  std::vector<ResultRecord> records = RunExperiment(cfg);
  REQUIRE(records.size() == 4);
  for (const ResultRecord& r : records) {
    CHECK(r.task == "identify");
    CHECK(*r.f == 3);
    CHECK(r.trials == 300);
    CHECK(r.theoretical_bound.has_value());  // i* = 1: preconditions hold
    CHECK(*r.ci_low <= *r.estimate);
    CHECK(*r.estimate <= *r.ci_high);
  }

  SUBCASE("reruns are byte-identical modulo wall time") {
    std::vector<ResultRecord> again = RunExperiment(cfg);
    CHECK(StripWallTime(Csv(records)) == StripWallTime(Csv(again)));
  }

  SUBCASE("thread counts do not alter results") {
    ExperimentConfig threaded = cfg;
    threaded.threads = 4;
    std::vector<ResultRecord> again = RunExperiment(threaded);
    CHECK(StripWallTime(Csv(records)) == StripWallTime(Csv(again)));
  }
}

TEST_CASE("any row replays from its own fields") {
  // Trial streams derive from (seed, n, epsilon, task), all present in the
  // row, so re-running a single grid point reproduces it exactly.
  ExperimentConfig grid = ParseConfig(R"({
    "task": "identify", "instance": "ipp-d", "mechanism": "pure",
    "n": [50, 80, 130], "epsilon": [0.4, 0.9], "f": 3,
    "trials": 400, "seed": 31337
  })");
  std::vector<ResultRecord> records = RunExperiment(grid);
  REQUIRE(records.size() == 6);
  const ResultRecord& row = records[4];  // n = 130, epsilon = 0.4

  std::ostringstream replay_cfg;
  replay_cfg << R"({"task":"identify","instance":"ipp-d","mechanism":"pure",)"
             << "\"n\":[" << row.n << "],\"epsilon\":["
             << RenderDouble(row.epsilon) << "],\"f\":" << *row.f
             << ",\"trials\":" << row.trials << ",\"seed\":" << row.seed
             << "}";
  std::vector<ResultRecord> replayed =
      RunExperiment(ParseConfig(replay_cfg.str()));
  REQUIRE(replayed.size() == 1);
  CHECK(replayed[0].failures == row.failures);
  CHECK(*replayed[0].estimate == *row.estimate);
}

TEST_CASE("trial count of one yields a degenerate record") {
  ExperimentConfig cfg = ParseConfig(R"({
    "task": "identify", "instance": "ipp-d", "mechanism": "nonprivate",
    "n": [40], "epsilon": [1.0], "f": 3, "trials": 1, "seed": 2
  })");
  std::vector<ResultRecord> records = RunExperiment(cfg);
  REQUIRE(records.size() == 1);
  CHECK((*records[0].estimate == 0.0 || *records[0].estimate == 1.0));
  CHECK(*records[0].ci_high > 0.75);  // near-vacuous interval at one trial
  CHECK_FALSE(records[0].theoretical_bound.has_value());  // nonprivate
}

TEST_CASE("generation runs resolve schedules from ground truth") {
  ExperimentConfig cfg = ParseConfig(R"({
    "task": "generate", "instance": "iidp-d", "mode": "public",
    "n": [2000], "epsilon": [1.0], "f": 2, "g": "linear-floor:0.125",
    "witness_bound": 4, "trials": 400, "seed": 5
  })");
  std::vector<ResultRecord> records = RunExperiment(cfg);
  REQUIRE(records.size() == 1);
  const ResultRecord& r = records[0];
  CHECK(*r.g == 125);
  CHECK(*r.witness_bound == 4);
  CHECK(r.failures == 0);
  CHECK(r.theoretical_bound.has_value());
  CHECK(*r.theoretical_bound < 1e-12);

  SUBCASE("auto schedules fill g and h") {
    ExperimentConfig auto_cfg = ParseConfig(R"({
      "task": "generate", "instance": "iidp-d", "mode": "joint",
      "n": [2000], "epsilon": [1.0], "f": 2,
      "trials": 50, "seed": 5
    })");
    std::vector<ResultRecord> auto_records = RunExperiment(auto_cfg);
    REQUIRE(auto_records.size() == 1);
    CHECK(*auto_records[0].h == 8);   // twice the witness position
    CHECK(*auto_records[0].g == 62);  // floor(n * 1/16 / 2)
    CHECK(auto_records[0].theoretical_bound.has_value());
  }

  SUBCASE("oversized g downgrades the bound") {
    ExperimentConfig bad = ParseConfig(R"({
      "task": "generate", "instance": "iidp-d", "mode": "public",
      "n": [2000], "epsilon": [1.0], "f": 2, "g": 500,
      "witness_bound": 4, "trials": 50, "seed": 5
    })");
    std::vector<ResultRecord> bad_records = RunExperiment(bad);
    CHECK_FALSE(bad_records[0].theoretical_bound.has_value());
    CHECK_FALSE(bad_records[0].bound_guaranteed);
  }
}

TEST_CASE("lower-bound task emits the closed form") {
  ExperimentConfig cfg = ParseConfig(R"({
    "task": "lowerbound", "instance": "ipp", "mechanism": "pure",
    "n": [20], "epsilon": [0.1], "f": 3, "trials": 4000, "seed": 6
  })");
  std::vector<ResultRecord> records = RunExperiment(cfg);
  REQUIRE(records.size() == 1);
  CHECK(records[0].lower_bound.has_value());
  CHECK(*records[0].lower_bound == doctest::Approx(0.21814).epsilon(1e-4));
  CHECK(records[0].check_pass);
}

TEST_CASE("audit task emits one row per check") {
  ExperimentConfig cfg = ParseConfig(R"({
    "task": "audit", "instance": "ipp-d",
    "n": [20], "epsilon": [1.0], "delta": 0.05,
    "trials": 1, "audit_pairs": 40, "seed": 8
  })");
  std::vector<ResultRecord> records = RunExperiment(cfg);
  CHECK(records.size() == 9);
  for (const ResultRecord& r : records) {
    CHECK(r.check_pass);
    CHECK(r.mechanism.find(':') != std::string::npos);
  }
}

TEST_CASE("bounds task runs without sampling") {
  ExperimentConfig cfg = ParseConfig(R"({
    "task": "bounds", "instance": "ipp-d", "mechanism": "pure",
    "n": [20000], "epsilon": [1.0], "f": 12, "trials": 0, "seed": 0
  })");
  std::vector<ResultRecord> records = RunExperiment(cfg);
  REQUIRE(records.size() == 1);
  CHECK(records[0].trials == 0);
  CHECK_FALSE(records[0].estimate.has_value());
  CHECK(*records[0].theoretical_bound ==
        doctest::Approx(1.04e-6).epsilon(0.01));

  SUBCASE("generation modes evaluate their own closed form") {
    ExperimentConfig gen = ParseConfig(R"({
      "task": "bounds", "instance": "iidp-d", "mode": "public",
      "n": [2000], "epsilon": [1.0], "f": 2, "g": 125,
      "witness_bound": 4, "trials": 0, "seed": 0
    })");
    std::vector<ResultRecord> rows = RunExperiment(gen);
    REQUIRE(rows.size() == 1);
    CHECK(*rows[0].theoretical_bound ==
          doctest::Approx(1.1e-13).epsilon(0.05));
    CHECK(rows[0].lower_bound.has_value());  // hard-pair instance
    CHECK(*rows[0].g == 125);
    CHECK(*rows[0].witness_bound == 4);
  }
}

TEST_CASE("custom instances carry their configured name") {
  ExperimentConfig cfg = ParseConfig(R"({
    "task": "identify", "mechanism": "nonprivate",
    "instance": {"name": "two-atoms",
                 "languages": [{"kind": "finite", "indices": [5]},
                               {"kind": "finite", "indices": [5, 9]}],
                 "atoms": [[5, 0.75], [9, 0.25]]},
    "n": [30], "epsilon": [1.0], "f": 2, "trials": 40, "seed": 12
  })");
  std::vector<ResultRecord> records = RunExperiment(cfg);
  REQUIRE(records.size() == 1);
  CHECK(records[0].instance == "two-atoms");
  CHECK(records[0].failures <= 40);
}

TEST_CASE("result emission") {
  SUBCASE("empty record list is a bare header") {
    std::ostringstream out;
    EmitResults({}, "csv", out);
    CHECK(out.str() == std::string(kCsvHeader) + "\n");
  }

  SUBCASE("identify rows leave the lower bound empty") {
    ResultRecord r;
    r.task = "identify";
    r.instance = "ipp-d";
    r.mechanism = "pure";
    r.n = 100;
    r.epsilon = 1.0;
    r.trials = 10;
    r.estimate = 0.1;
    r.ci_low = 0.0;
    r.ci_high = 0.3;
    std::string csv = Csv({r});
    auto parsed = ParseCsvBack(csv);
    REQUIRE(parsed.size() == 1);
    CHECK_FALSE(parsed[0].lower_bound.has_value());
    CHECK_FALSE(parsed[0].f.has_value());
  }

  SUBCASE("round trip through CSV is lossless") {
    ExperimentConfig cfg = ParseConfig(R"({
      "task": "identify", "instance": "ipp-d", "mechanism": "pure",
      "n": [50], "epsilon": [0.7], "f": 3, "trials": 100, "seed": 3
    })");
    std::vector<ResultRecord> records = RunExperiment(cfg);
    auto parsed = ParseCsvBack(Csv(records));
    REQUIRE(parsed.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
      CHECK(parsed[i].task == records[i].task);
      CHECK(parsed[i].n == records[i].n);
      // %.17g rendering is lossless for doubles.
      CHECK(parsed[i].epsilon == records[i].epsilon);
      CHECK(*parsed[i].estimate == *records[i].estimate);
      CHECK(*parsed[i].ci_low == *records[i].ci_low);
      CHECK(*parsed[i].ci_high == *records[i].ci_high);
      CHECK(*parsed[i].theoretical_bound == *records[i].theoretical_bound);
      CHECK(parsed[i].seed == records[i].seed);
    }
  }

  SUBCASE("json lines mirror the field names") {
    ResultRecord r;
    r.task = "generate";
    r.instance = "iidp-d";
    r.mechanism = "public";
    r.n = 7;
    r.epsilon = 0.25;
    r.trials = 3;
    r.g = 5;
    r.witness_bound = 4;
    std::ostringstream out;
    EmitResults({r}, "json-lines", out);
    const std::string line = out.str();
    CHECK(line.find("\"task\":\"generate\"") != std::string::npos);
    CHECK(line.find("\"W\":4") != std::string::npos);
    CHECK(line.find("\"g\":5") != std::string::npos);
    CHECK(line.find("\"estimate\"") == std::string::npos);  // absent
  }

  SUBCASE("seventeen significant digits round-trip") {
    const double value = 1.0 / 3.0;
    CHECK(std::stod(RenderDouble(value)) == value);
    CHECK(RenderDouble(value).size() >= 17);
  }

  SUBCASE("unwritable paths raise IoError") {
    CHECK_THROWS_AS(EmitResultsToFile({}, "csv", "/nonexistent/dir/x.csv"),
                    IoError);
  }
}
