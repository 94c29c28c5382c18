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

#ifndef DPLANG_MECHANISMS_HPP_
#define DPLANG_MECHANISMS_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dplang/errors.hpp"
#include "dplang/random.hpp"

namespace dplang {

struct PrivacyParams {
  double epsilon = 1.0;
  double delta = 0.0;  // 0 = pure DP

  bool pure() const { return delta == 0.0; }
};

enum class SensitivityKind { kPerCoordinate, kEuclidean };

// Candidate scores with their declared sensitivity: per-coordinate for the
// exponential mechanism, Euclidean for the Gaussian mechanism.
struct ScoreVector {
  std::vector<double> scores;
  double sensitivity = 1.0;
  SensitivityKind kind = SensitivityKind::kPerCoordinate;
};

// Exact selection probabilities p_i ∝ exp(epsilon * q_i / (2 * sensitivity)).
// Computed in log space with the max score subtracted, so strongly negative
// scores cannot underflow the normalization.
std::vector<double> ExpMechProbs(const ScoreVector& sv, double epsilon);

// Samples a candidate (0-based) by inverse CDF over the exact probability
// vector; consumes exactly one uniform draw.
std::size_t ExpMechSample(const ScoreVector& sv, double epsilon,
                          RandomStream& rng);

struct GaussianCalibration {
  double sigma;
  // The classical calibration is proved for epsilon in (0,1); larger values
  // are still served but flagged.
  bool regime_warning;
};

// sigma = (l2_sensitivity / epsilon) * sqrt(2 * ln(1.25 / delta)).
GaussianCalibration GaussianSigma(double l2_sensitivity, double epsilon,
                                  double delta);

// Adds independent zero-mean normal noise of standard deviation sigma to
// each coordinate, consuming one normal draw (two uniforms) per coordinate
// in index order.
void AddGaussianNoise(std::vector<double>& values, double sigma,
                      RandomStream& rng);

}  // namespace dplang

#endif  // DPLANG_MECHANISMS_HPP_
