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

#include "dplang/dplang.h"

#include <cstring>
#include <sstream>
#include <string>

#include "dplang/errors.hpp"
#include "dplang/harness.hpp"

struct dplang_experiment {
  dplang::ExperimentConfig config;
};

struct dplang_results {
  std::vector<dplang::ResultRecord> records;
};

namespace {

thread_local std::string g_last_error;

dplang_status Fail(dplang_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
dplang_status Guard(Fn&& fn) {
  try {
    return fn();
  } catch (const dplang::ConfigError& e) {
    return Fail(DPLANG_ERROR_CONFIG, e.what());
  } catch (const dplang::InstanceError& e) {
    return Fail(DPLANG_ERROR_CONFIG, e.what());
  } catch (const dplang::IoError& e) {
    return Fail(DPLANG_ERROR_IO, e.what());
  } catch (const std::exception& e) {
    return Fail(DPLANG_ERROR_INTERNAL, e.what());
  } catch (...) {
    return Fail(DPLANG_ERROR_INTERNAL, "unknown error");
  }
}

}  // namespace

extern "C" {

const char* dplang_version(void) { return "1.0.0"; }

const char* dplang_last_error(void) { return g_last_error.c_str(); }

dplang_status dplang_experiment_create(const char* config_json,
                                       dplang_experiment** out) {
  if (config_json == nullptr || out == nullptr) {
    return Fail(DPLANG_ERROR_INVALID_ARGUMENT, "null argument");
  }
  *out = nullptr;
  return Guard([&]() {
    auto* experiment = new dplang_experiment{dplang::ParseConfig(config_json)};
    *out = experiment;
    return DPLANG_OK;
  });
}

void dplang_experiment_destroy(dplang_experiment* experiment) {
  delete experiment;
}

dplang_status dplang_experiment_run(const dplang_experiment* experiment,
                                    dplang_results** out) {
  if (experiment == nullptr || out == nullptr) {
    return Fail(DPLANG_ERROR_INVALID_ARGUMENT, "null argument");
  }
  *out = nullptr;
  return Guard([&]() {
    auto* results =
        new dplang_results{dplang::RunExperiment(experiment->config)};
    *out = results;
    return DPLANG_OK;
  });
}

void dplang_results_destroy(dplang_results* results) { delete results; }

dplang_status dplang_results_count(const dplang_results* results,
                                   size_t* out) {
  if (results == nullptr || out == nullptr) {
    return Fail(DPLANG_ERROR_INVALID_ARGUMENT, "null argument");
  }
  *out = results->records.size();
  return DPLANG_OK;
}

dplang_status dplang_results_render(const dplang_results* results,
                                    const char* format, char** out) {
  if (results == nullptr || format == nullptr || out == nullptr) {
    return Fail(DPLANG_ERROR_INVALID_ARGUMENT, "null argument");
  }
  *out = nullptr;
  return Guard([&]() {
    std::ostringstream buffer;
    dplang::EmitResults(results->records, format, buffer);
    std::string text = buffer.str();
    char* copy = new char[text.size() + 1];
    std::memcpy(copy, text.c_str(), text.size() + 1);
    *out = copy;
    return DPLANG_OK;
  });
}

dplang_status dplang_results_write(const dplang_results* results,
                                   const char* path, const char* format) {
  if (results == nullptr || path == nullptr || format == nullptr) {
    return Fail(DPLANG_ERROR_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&]() {
    dplang::EmitResultsToFile(results->records, format, path);
    return DPLANG_OK;
  });
}

void dplang_string_free(char* text) { delete[] text; }

dplang_status dplang_results_checks_passed(const dplang_results* results,
                                           int* out) {
  if (results == nullptr || out == nullptr) {
    return Fail(DPLANG_ERROR_INVALID_ARGUMENT, "null argument");
  }
  *out = dplang::AllChecksPass(results->records) ? 1 : 0;
  return DPLANG_OK;
}

}  // extern "C"
