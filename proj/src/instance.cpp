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

#include "dplang/instance.hpp"

#include <algorithm>

namespace dplang {

namespace {

void AddProbe(std::vector<UniverseIndex>& probes, UniverseIndex k) {
  if (k == 0) return;
  if (std::find(probes.begin(), probes.end(), k) == probes.end()) {
    probes.push_back(k);
  }
}

}  // namespace

Instance MakeInstance(Collection collection, Distribution dist,
                      std::string name, std::uint64_t scan_limit) {
  Instance inst{std::move(name), std::move(collection), std::move(dist)};

  const std::uint64_t m = inst.collection.size();
  inst.population_errs.reserve(m);
  for (std::uint64_t i = 1; i <= m; ++i) {
    bool truncated = false;
    inst.population_errs.push_back(
        PopulationErr(inst.dist, inst.collection.At(i), &truncated));
    inst.population_errs_truncated |= truncated;
  }

  inst.optimal_index = 1;
  for (std::uint64_t i = 2; i <= m; ++i) {
    if (inst.population_errs[i - 1] <
        inst.population_errs[inst.optimal_index - 1]) {
      inst.optimal_index = i;
    }
  }
  if (inst.optimal_index > 1) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::uint64_t j = 1; j < inst.optimal_index; ++j) {
      gap = std::min(gap, inst.population_errs[j - 1] -
                              inst.population_errs[inst.optimal_index - 1]);
    }
    inst.risk_gap = gap;
  }

  for (std::uint64_t i = 1; i <= m; ++i) {
    std::optional<bool> contained =
        inst.dist.ContainsLanguage(inst.collection.At(i));
    if (contained.has_value() && *contained) {
      inst.reference_index = i;
      break;
    }
  }

  try {
    inst.witness_index =
        WitnessIndex(inst.collection.Prefix(m), inst.dist, scan_limit);
  } catch (const ScanLimitInconclusive&) {
    inst.witness_index = std::nullopt;
  }

  // Audit probes: support atoms, the first members of every language, and a
  // small element outside all languages when one exists.
  if (inst.dist.kind() == Distribution::Kind::kFiniteAtoms) {
    for (const AtomMass& a : inst.dist.atoms()) AddProbe(inst.probe_atoms, a.index);
  } else {
    AddProbe(inst.probe_atoms, inst.dist.anchor());
    for (std::uint64_t k = 1; k <= 6; ++k) {
      AddProbe(inst.probe_atoms, inst.dist.FamilyIndex(k));
    }
  }
  for (std::uint64_t i = 1; i <= m; ++i) {
    const Language& lang = inst.collection.At(i);
    try {
      AddProbe(inst.probe_atoms, lang.KthMemberAbove(0, 1));
      AddProbe(inst.probe_atoms, lang.KthMemberAbove(0, 2));
    } catch (const EnumerationExhausted&) {
    }
  }
  for (UniverseIndex k = 1; k <= 64; ++k) {
    bool in_any = false;
    for (std::uint64_t i = 1; i <= m && !in_any; ++i) {
      in_any = inst.collection.At(i).Contains(k);
    }
    if (!in_any) {
      AddProbe(inst.probe_atoms, k);
      break;
    }
  }
  return inst;
}

}  // namespace dplang
