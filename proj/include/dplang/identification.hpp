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

#ifndef DPLANG_IDENTIFICATION_HPP_
#define DPLANG_IDENTIFICATION_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "dplang/instance.hpp"
#include "dplang/mechanisms.hpp"
#include "dplang/stats.hpp"

namespace dplang {

enum class IdMechanism { kPure, kApproximate, kNonPrivate };

struct IdConfig {
  std::uint64_t f_n = 1;
  PrivacyParams privacy;
  IdMechanism mechanism = IdMechanism::kPure;
};

// Margins, deficits and scores over the candidate horizon. The horizon is
// min(f_n, |collection|); thresholds and penalties always use f_n itself.
struct IdDiagnostics {
  std::uint64_t f_n = 1;
  std::uint64_t horizon = 0;
  std::vector<double> empirical_errs;
  std::vector<double> margins;   // margin(1) = 1
  std::vector<double> deficits;  // (2/f_n - margin)_+
  std::vector<double> scores;    // i - f_n^2 * deficit
  // Approximate mechanism only:
  double sigma = 0.0;
  std::vector<double> noisy_errs;
  std::vector<double> noisy_margins;
};

IdDiagnostics MarginAndScore(const Dataset& data, const Collection& collection,
                             std::uint64_t f_n);

// Score vector for the exponential mechanism: declared per-coordinate
// sensitivity 2 f_n^2 / n.
ScoreVector IdScoreVector(const Dataset& data, const Collection& collection,
                          std::uint64_t f_n);

// Noise scale of the approximate mechanism: the error vector has Euclidean
// sensitivity sqrt(f_n)/n.
double IdNoiseSigma(std::uint64_t f_n, std::uint64_t n, double epsilon,
                    double delta);

// Exponential-mechanism selection over the candidate horizon (1-based).
std::uint64_t PureDpIdentify(const Dataset& data, const Collection& collection,
                             const IdConfig& cfg, RandomStream& rng,
                             IdDiagnostics* diag = nullptr);

// Gaussian perturbation of the error vector followed by the deterministic
// margin rule: the largest index with noisy margin > 2/f_n, or 1 when no
// index passes (possible only for f_n <= 2). noise_override is a test hook
// substituting a fixed noise vector for the stream.
std::uint64_t ApproxDpIdentify(const Dataset& data,
                               const Collection& collection,
                               const IdConfig& cfg, RandomStream& rng,
                               const std::vector<double>* noise_override =
                                   nullptr,
                               IdDiagnostics* diag = nullptr);

// Deterministic baseline: largest index whose empirical risk beats every
// predecessor by strictly more than 2/f_n (index 1 passes vacuously).
std::uint64_t NonPrivateIdentify(const Dataset& data,
                                 const Collection& collection,
                                 std::uint64_t f_n);

// Closed-form error bound, clamped to 1. Defined for the pure and
// approximate mechanisms only.
double IdErrorBound(std::uint64_t n, std::uint64_t f_n,
                    const PrivacyParams& privacy, IdMechanism mechanism);

struct IdEstimate {
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;      // misidentifications
  double misid_freq = 0.0;
  Interval wilson;                 // 95% interval on misid_freq
  double iderr_estimate = 0.0;     // mean realized excess risk
  std::optional<double> bound;     // closed form, when defined
};

IdEstimate EstimateIdErr(const Instance& instance, const IdConfig& cfg,
                         std::uint64_t n, std::uint64_t trials,
                         std::uint64_t master_seed, std::uint64_t stream_id = 0,
                         unsigned threads = 0);

}  // namespace dplang

#endif  // DPLANG_IDENTIFICATION_HPP_
