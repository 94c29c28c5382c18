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

#ifndef DPLANG_STATS_HPP_
#define DPLANG_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace dplang {

// Two-sided 95% normal quantile.
inline constexpr double kZ95TwoSided = 1.959963984540054;
// One-sided 95% normal quantile.
inline constexpr double kZ95OneSided = 1.6448536269514722;

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

// Wilson score interval for a binomial proportion. Valid at zero observed
// successes or failures, unlike the normal approximation.
inline Interval WilsonInterval(std::uint64_t successes, std::uint64_t trials,
                               double z = kZ95TwoSided) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // The boundary endpoints are exact analytically; rounding must not push
  // the interval off the observed frequency.
  const double low = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double high =
      successes == trials ? 1.0 : std::min(1.0, center + half);
  return {std::min(low, p), std::max(high, p)};
}

}  // namespace dplang

#endif  // DPLANG_STATS_HPP_
