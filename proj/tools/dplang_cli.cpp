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

// Command-line front end. All functionality lives behind the shared
// library's C API; this binary only assembles the JSON configuration
// (precedence: flag > config file > default) and routes the output.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dplang/dplang.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitAssertion = 3;

struct FlagSet {
  std::string config_path;
  std::string instance;
  std::string mechanism;
  std::string mode;
  std::vector<std::uint64_t> n;
  std::vector<double> epsilon;
  double delta = -1.0;
  std::uint64_t trials = 0;
  std::int64_t seed = -1;
  std::string f, g, h;
  std::uint64_t witness_bound = 0;
  std::string out;
  std::string format;
  bool assert_bounds = false;
  unsigned threads = 0;
  bool threads_set = false;
  std::uint64_t pairs = 0;
};

void AddCommonFlags(CLI::App* cmd, FlagSet& flags) {
  cmd->set_help_flag("--help", "print help");  // frees --h for the schedule
  cmd->add_option("--config", flags.config_path, "JSON config file");
  cmd->add_option("--instance", flags.instance,
                  "instance name (ipp-d, ipp-dprime, iidp-d, iidp-dprime, "
                  "ipp, iidp, atoms:<i>=<m>,...)");
  cmd->add_option("--n", flags.n, "sample sizes");
  cmd->add_option("--epsilon", flags.epsilon, "privacy parameters");
  cmd->add_option("--delta", flags.delta, "approximate-DP delta");
  cmd->add_option("--trials", flags.trials, "Monte Carlo trials per grid point");
  cmd->add_option("--seed", flags.seed, "master seed");
  cmd->add_option("--f", flags.f, "f schedule (number or form:params)");
  cmd->add_option("--g", flags.g, "g schedule");
  cmd->add_option("--h", flags.h, "h schedule");
  cmd->add_option("--witness-bound", flags.witness_bound,
                  "public witness bound W");
  cmd->add_option("--out", flags.out, "output path (default: stdout)");
  cmd->add_option("--format", flags.format, "csv | json-lines");
  cmd->add_flag("--assert-bounds", flags.assert_bounds,
                "exit 3 when a bound or lower-bound check fails");
  cmd->add_option("--threads", flags.threads, "worker threads (0 = hardware)")
      ->each([&flags](const std::string&) { flags.threads_set = true; });
  cmd->add_option("--pairs", flags.pairs, "audit probe pairs");
}

json ScheduleJson(const std::string& text) {
  try {
    std::size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos == text.size()) return json(v);
  } catch (const std::exception&) {
  }
  return json(text);
}

int Run(const std::string& task, const FlagSet& flags) {
  json cfg = json::object();
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) {
      std::fprintf(stderr, "error: cannot read config '%s'\n",
                   flags.config_path.c_str());
      return kExitConfig;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
      cfg = json::parse(buffer.str());
    } catch (const json::parse_error& e) {
      std::fprintf(stderr, "error: config is not valid JSON: %s\n", e.what());
      return kExitConfig;
    }
    if (!cfg.is_object()) {
      std::fprintf(stderr, "error: config must be a JSON object\n");
      return kExitConfig;
    }
  }

  cfg["task"] = task;
  if (!flags.instance.empty()) cfg["instance"] = flags.instance;
  if (!flags.mechanism.empty()) {
    cfg.erase("mode");
    cfg["mechanism"] = flags.mechanism;
  }
  if (!flags.mode.empty()) {
    cfg.erase("mechanism");
    cfg["mode"] = flags.mode;
  }
  if (!flags.n.empty()) cfg["n"] = flags.n;
  if (!flags.epsilon.empty()) cfg["epsilon"] = flags.epsilon;
  if (flags.delta >= 0.0) cfg["delta"] = flags.delta;
  if (flags.trials > 0) cfg["trials"] = flags.trials;
  if (flags.seed >= 0) cfg["seed"] = static_cast<std::uint64_t>(flags.seed);
  if (!flags.f.empty()) cfg["f"] = ScheduleJson(flags.f);
  if (!flags.g.empty()) cfg["g"] = ScheduleJson(flags.g);
  if (!flags.h.empty()) cfg["h"] = ScheduleJson(flags.h);
  if (flags.witness_bound > 0) cfg["witness_bound"] = flags.witness_bound;
  if (!flags.out.empty()) cfg["out"] = flags.out;
  if (!flags.format.empty()) cfg["format"] = flags.format;
  if (flags.assert_bounds) cfg["assert_bounds"] = true;
  if (flags.threads_set) cfg["threads"] = flags.threads;
  if (flags.pairs > 0) cfg["audit_pairs"] = flags.pairs;

  const std::string doc = cfg.dump();

  dplang_experiment* experiment = nullptr;
  dplang_status status = dplang_experiment_create(doc.c_str(), &experiment);
  if (status != DPLANG_OK) {
    std::fprintf(stderr, "error: %s\n", dplang_last_error());
    return status == DPLANG_ERROR_CONFIG ? kExitConfig : kExitFailure;
  }

  dplang_results* results = nullptr;
  status = dplang_experiment_run(experiment, &results);
  if (status != DPLANG_OK) {
    std::fprintf(stderr, "error: %s\n", dplang_last_error());
    dplang_experiment_destroy(experiment);
    return status == DPLANG_ERROR_CONFIG ? kExitConfig : kExitFailure;
  }

  const std::string format =
      cfg.contains("format") ? cfg["format"].get<std::string>() : "csv";
  const std::string out_path =
      cfg.contains("out") ? cfg["out"].get<std::string>() : "";
  int exit_code = kExitOk;
  if (out_path.empty()) {
    char* text = nullptr;
    status = dplang_results_render(results, format.c_str(), &text);
    if (status == DPLANG_OK) {
      std::fputs(text, stdout);
      dplang_string_free(text);
    }
  } else {
    status = dplang_results_write(results, out_path.c_str(), format.c_str());
  }
  if (status != DPLANG_OK) {
    std::fprintf(stderr, "error: %s\n", dplang_last_error());
    exit_code = status == DPLANG_ERROR_IO ? kExitFailure : kExitConfig;
  }

  if (exit_code == kExitOk && cfg.value("assert_bounds", false)) {
    int ok = 0;
    if (dplang_results_checks_passed(results, &ok) == DPLANG_OK && ok == 0) {
      std::fprintf(stderr, "assertion failed: a bound check did not hold\n");
      exit_code = kExitAssertion;
    }
  }

  dplang_results_destroy(results);
  dplang_experiment_destroy(experiment);
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private language identification and "
               "generation experiments"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    bool has_mechanism;
    bool has_mode;
  };
  const Sub subs[] = {
      {"identify", "Monte Carlo identification error", true, false},
      {"generate", "Monte Carlo generation error", false, true},
      {"lowerbound", "empirical lower-bound checks on the hard pair", true,
       true},
      {"audit", "privacy ratio / sensitivity / calibration audits", false,
       false},
      {"bounds", "evaluate closed-form bounds only (no sampling)", true, true},
  };

  std::vector<FlagSet> flag_sets(std::size(subs));
  std::vector<CLI::App*> cmds;
  for (std::size_t i = 0; i < std::size(subs); ++i) {
    CLI::App* cmd = app.add_subcommand(subs[i].name, subs[i].help);
    AddCommonFlags(cmd, flag_sets[i]);
    if (subs[i].has_mechanism) {
      cmd->add_option("--mechanism", flag_sets[i].mechanism,
                      "pure | approximate | nonprivate");
    }
    if (subs[i].has_mode) {
      cmd->add_option("--mode", flag_sets[i].mode,
                      "public | joint | approximate-joint | nonprivate");
    }
    cmds.push_back(cmd);
  }

  CLI11_PARSE(app, argc, argv);

  for (std::size_t i = 0; i < cmds.size(); ++i) {
    if (cmds[i]->parsed()) return Run(subs[i].name, flag_sets[i]);
  }
  return kExitConfig;
}
