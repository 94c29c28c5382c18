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

#ifndef DPLANG_AUDIT_HPP_
#define DPLANG_AUDIT_HPP_

#include <cstdint>
#include <string>

#include "dplang/instance.hpp"

namespace dplang {

enum class ScoreFamily { kIdentification, kGenPublic, kGenPair };

// Schedule values the audited score families are built with.
struct AuditParams {
  std::uint64_t f_n = 3;
  std::uint64_t g_n = 4;
  std::uint64_t h_n = 8;
  std::uint64_t witness_bound = 4;
};

struct AuditReport {
  std::string check;
  double statistic = 0.0;  // worst case over all probes
  double bound = 0.0;
  double tolerance = 0.0;
  double margin = 0.0;  // bound + tolerance - statistic
  bool pass = false;
  std::uint64_t pairs = 0;
  std::uint64_t seed = 0;
};

// Exact per-outcome log-probability gap of exponential-mechanism selection
// across `pairs` random neighboring datasets (group_size entries replaced
// per probe). Bound: group_size * epsilon, tolerance 1e-9.
AuditReport AuditExpRatio(ScoreFamily family, const Instance& instance,
                          std::uint64_t n, double epsilon, std::uint64_t pairs,
                          std::uint64_t master_seed, const AuditParams& params,
                          int group_size = 1);

// Worst-case score change across adversarial single-entry replacements
// drawn from the instance's probe atoms, against the declared sensitivity.
// Tolerance 1e-12.
AuditReport AuditSensitivity(ScoreFamily family, const Instance& instance,
                             std::uint64_t n, std::uint64_t pairs,
                             std::uint64_t master_seed,
                             const AuditParams& params);

// Recomputes the Gaussian calibration at high precision and compares the
// mechanism's sigma within relative 1e-12.
AuditReport AuditGaussian(double l2_sensitivity, double epsilon, double delta);

// Same check against the identification noise path, whose Euclidean
// sensitivity is sqrt(f_n)/n.
AuditReport AuditGaussianIdScale(std::uint64_t f_n, std::uint64_t n,
                                 double epsilon, double delta);

}  // namespace dplang

#endif  // DPLANG_AUDIT_HPP_
