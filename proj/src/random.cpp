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

#include "dplang/random.hpp"

#include <cmath>

namespace dplang {

double RandomStream::NextGaussian(double sigma) {
  // u1 in (0, 1] keeps the log finite.
  double u1 = 1.0 - NextUniform();
  double u2 = NextUniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  return sigma * r * std::cos(2.0 * M_PI * u2);
}

}  // namespace dplang
