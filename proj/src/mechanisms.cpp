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

#include "dplang/mechanisms.hpp"

#include <algorithm>
#include <cmath>

namespace dplang {

std::vector<double> ExpMechProbs(const ScoreVector& sv, double epsilon) {
  if (sv.scores.empty()) throw EmptyCandidates("empty candidate set");
  if (sv.kind != SensitivityKind::kPerCoordinate) {
    throw Error("exponential mechanism requires a per-coordinate sensitivity");
  }
  if (!(sv.sensitivity > 0.0)) throw Error("sensitivity must be positive");
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive");
  for (double q : sv.scores) {
    if (!std::isfinite(q)) throw Error("scores must be finite");
  }
  const double coef = epsilon / (2.0 * sv.sensitivity);
  const double top = *std::max_element(sv.scores.begin(), sv.scores.end());
  std::vector<double> probs(sv.scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < sv.scores.size(); ++i) {
    probs[i] = std::exp(coef * (sv.scores[i] - top));
    total += probs[i];
  }
  for (double& p : probs) p /= total;
  return probs;
}

std::size_t ExpMechSample(const ScoreVector& sv, double epsilon,
                          RandomStream& rng) {
  std::vector<double> probs = ExpMechProbs(sv, epsilon);
  const double u = rng.NextUniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  return probs.size() - 1;  // floating-point remainder
}

GaussianCalibration GaussianSigma(double l2_sensitivity, double epsilon,
                                  double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidDelta("delta must lie in (0, 1)");
  }
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive");
  if (!(l2_sensitivity > 0.0)) throw Error("sensitivity must be positive");
  const double sigma =
      (l2_sensitivity / epsilon) * std::sqrt(2.0 * std::log(1.25 / delta));
  return {sigma, epsilon >= 1.0};
}

void AddGaussianNoise(std::vector<double>& values, double sigma,
                      RandomStream& rng) {
  for (double& v : values) v += rng.NextGaussian(sigma);
}

}  // namespace dplang
