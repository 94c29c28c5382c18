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

#ifndef DPLANG_INSTANCE_HPP_
#define DPLANG_INSTANCE_HPP_

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dplang/distribution.hpp"
#include "dplang/language.hpp"

namespace dplang {

// Ground-truth bundle consumed by the Monte Carlo estimators: a collection,
// the sampling distribution, and exact population quantities computed once
// at construction. Immutable; shared across trial workers.
struct Instance {
  std::string name;
  Collection collection;
  Distribution dist;

  // Exact per-language population risks over the materialized prefix.
  std::vector<double> population_errs;
  bool population_errs_truncated = false;
  // Smallest index attaining the minimum population risk (1-based).
  std::uint64_t optimal_index = 1;
  // min_{j < optimal} err(j) - err(optimal); +inf when optimal_index == 1.
  double risk_gap = std::numeric_limits<double>::infinity();

  // Smallest index of a language contained in supp(D); nullopt when none is
  // (or containment is undecidable).
  std::optional<std::uint64_t> reference_index;
  // Witness position of the collection against D; nullopt when the scan was
  // inconclusive.
  std::optional<std::uint64_t> witness_index;

  // Support atoms plus adversarial replacement elements for audits.
  std::vector<UniverseIndex> probe_atoms;

  double ExcessRisk(std::uint64_t selected_index) const {
    return population_errs[selected_index - 1] -
           population_errs[optimal_index - 1];
  }
};

Instance MakeInstance(Collection collection, Distribution dist,
                      std::string name,
                      std::uint64_t scan_limit = kDefaultWitnessScanLimit);

}  // namespace dplang

#endif  // DPLANG_INSTANCE_HPP_
