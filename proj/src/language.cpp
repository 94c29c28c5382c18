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

#include "dplang/language.hpp"

#include <algorithm>
#include <limits>

#include "dplang/distribution.hpp"

namespace dplang {

namespace {

using u128 = unsigned __int128;

// Members <= x of the progression {offset + step*k : k >= 1}.
u128 ProgressionCount(u128 x, std::uint64_t offset, std::uint64_t step) {
  if (x <= offset) return 0;
  return (x - offset) / step;
}

}  // namespace

std::string RenderElement(UniverseIndex k) { return "u" + std::to_string(k); }

Language Language::Progression(std::uint64_t offset, std::uint64_t step,
                               std::vector<UniverseIndex> extras,
                               std::string label) {
  if (step == 0) throw InstanceError("progression step must be >= 1");
  Language lang;
  lang.kind_ = Kind::kProgression;
  lang.label_ = std::move(label);
  lang.offset_ = offset;
  lang.step_ = step;
  std::sort(extras.begin(), extras.end());
  extras.erase(std::unique(extras.begin(), extras.end()), extras.end());
  for (UniverseIndex e : extras) {
    if (e == 0) throw InstanceError("universe indices start at 1");
    bool in_progression = e > offset && (e - offset) % step == 0;
    if (!in_progression) lang.extras_.push_back(e);
  }
  if (offset + step == 0) throw InstanceError("smallest member must be >= 1");
  return lang;
}

Language Language::FiniteSet(std::vector<UniverseIndex> indices,
                             std::string label) {
  Language lang;
  lang.kind_ = Kind::kFiniteSet;
  lang.label_ = std::move(label);
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  for (UniverseIndex e : indices) {
    if (e == 0) throw InstanceError("universe indices start at 1");
  }
  lang.extras_ = std::move(indices);
  return lang;
}

Language Language::Predicate(std::function<bool(UniverseIndex)> fn,
                             std::uint64_t enumeration_cap, std::string label) {
  if (!fn) throw InstanceError("predicate language requires a membership test");
  if (enumeration_cap == 0) throw InstanceError("enumeration cap must be >= 1");
  Language lang;
  lang.kind_ = Kind::kPredicate;
  lang.label_ = std::move(label);
  lang.fn_ = std::move(fn);
  lang.cap_ = enumeration_cap;
  return lang;
}

bool Language::Contains(UniverseIndex k) const {
  if (k == 0) return false;
  switch (kind_) {
    case Kind::kProgression:
      if (std::binary_search(extras_.begin(), extras_.end(), k)) return true;
      return k > offset_ && (k - offset_) % step_ == 0;
    case Kind::kFiniteSet:
      return std::binary_search(extras_.begin(), extras_.end(), k);
    case Kind::kPredicate:
      return fn_(k);
  }
  return false;
}

std::uint64_t Language::CountMembersUpTo(std::uint64_t x) const {
  switch (kind_) {
    case Kind::kProgression: {
      u128 count = ProgressionCount(x, offset_, step_);
      count += static_cast<std::uint64_t>(
          std::upper_bound(extras_.begin(), extras_.end(), x) -
          extras_.begin());
      return static_cast<std::uint64_t>(count);
    }
    case Kind::kFiniteSet:
      return static_cast<std::uint64_t>(
          std::upper_bound(extras_.begin(), extras_.end(), x) -
          extras_.begin());
    case Kind::kPredicate: {
      if (x > cap_)
        throw EnumerationExhausted("predicate enumeration cap exceeded");
      std::uint64_t count = 0;
      for (UniverseIndex k = 1; k <= x; ++k) count += fn_(k) ? 1 : 0;
      return count;
    }
  }
  return 0;
}

UniverseIndex Language::KthMemberAbove(std::uint64_t t,
                                       std::uint64_t j) const {
  if (j == 0) throw InstanceError("member rank must be >= 1");
  switch (kind_) {
    case Kind::kProgression: {
      // Smallest x > t with count(x) - count(t) >= j, by binary search on
      // the monotone closed-form counter.
      auto count = [this](u128 x) -> u128 {
        u128 c = ProgressionCount(x, offset_, step_);
        for (UniverseIndex e : extras_) {
          if (u128(e) <= x) ++c;
        }
        return c;
      };
      const u128 target = count(t) + j;
      u128 lo = u128(t) + 1;
      u128 hi = u128(offset_) + u128(step_) * target + 1;
      while (lo < hi) {
        u128 mid = lo + (hi - lo) / 2;
        if (count(mid) >= target) {
          hi = mid;
        } else {
          lo = mid + 1;
        }
      }
      if (lo > std::numeric_limits<std::uint64_t>::max()) {
        throw EnumerationExhausted("member index exceeds the universe range");
      }
      return static_cast<UniverseIndex>(lo);
    }
    case Kind::kFiniteSet: {
      auto it = std::upper_bound(extras_.begin(), extras_.end(), t);
      if (static_cast<std::uint64_t>(extras_.end() - it) < j) {
        throw EnumerationExhausted("finite language has too few members above " +
                                   std::to_string(t));
      }
      return *(it + (j - 1));
    }
    case Kind::kPredicate: {
      std::uint64_t found = 0;
      for (UniverseIndex k = t + 1; k <= cap_; ++k) {
        if (fn_(k) && ++found == j) return k;
      }
      throw EnumerationExhausted("predicate enumeration cap reached before " +
                                 std::to_string(j) + " members were found");
    }
  }
  throw EnumerationExhausted("unreachable");
}

std::vector<UniverseIndex> Language::MembersUpTo(std::uint64_t t) const {
  std::vector<UniverseIndex> members;
  switch (kind_) {
    case Kind::kProgression: {
      for (UniverseIndex e : extras_) {
        if (e <= t) members.push_back(e);
      }
      for (u128 m = u128(offset_) + step_; m <= t; m += step_) {
        members.push_back(static_cast<UniverseIndex>(m));
      }
      std::sort(members.begin(), members.end());
      return members;
    }
    case Kind::kFiniteSet: {
      for (UniverseIndex e : extras_) {
        if (e <= t) members.push_back(e);
      }
      return members;
    }
    case Kind::kPredicate: {
      if (t > cap_)
        throw EnumerationExhausted("predicate enumeration cap exceeded");
      for (UniverseIndex k = 1; k <= t; ++k) {
        if (fn_(k)) members.push_back(k);
      }
      return members;
    }
  }
  return members;
}

Collection::Collection(std::vector<Language> languages)
    : languages_(std::move(languages)) {
  if (languages_.empty()) throw InstanceError("collection must be non-empty");
}

Collection Collection::Generate(
    const std::function<Language(std::uint64_t)>& generator,
    std::uint64_t count) {
  if (count == 0) throw InstanceError("collection must be non-empty");
  std::vector<Language> langs;
  langs.reserve(count);
  for (std::uint64_t i = 1; i <= count; ++i) langs.push_back(generator(i));
  return Collection(std::move(langs));
}

const Language& Collection::At(std::uint64_t i) const {
  if (i == 0 || i > languages_.size()) {
    throw InstanceError("language index " + std::to_string(i) +
                        " outside the materialized prefix");
  }
  return languages_[i - 1];
}

std::vector<const Language*> Collection::Prefix(std::uint64_t m) const {
  if (m == 0 || m > languages_.size()) {
    throw InstanceError("prefix length " + std::to_string(m) +
                        " outside the materialized prefix");
  }
  std::vector<const Language*> out;
  out.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) out.push_back(&languages_[i]);
  return out;
}

std::uint64_t Collection::HorizonCap(std::uint64_t f_n) const {
  return std::min<std::uint64_t>(f_n, languages_.size());
}

std::uint64_t WitnessIndex(const std::vector<const Language*>& prefix,
                           const Distribution& dist, std::uint64_t scan_limit) {
  if (scan_limit == 0) throw InstanceError("scan limit must be >= 1");
  std::uint64_t result = 1;  // empty quantifier holds at every i
  bool inconclusive = false;
  for (const Language* lang : prefix) {
    std::optional<std::uint64_t> witness;
    for (std::uint64_t k = 1; k <= scan_limit; ++k) {
      if (lang->Contains(k) && !dist.InSupport(k)) {
        witness = k;
        break;
      }
    }
    if (witness.has_value()) {
      result = std::max(result, *witness);
      continue;
    }
    // No witness within the scan: either the language is contained in the
    // support (no constraint) or its first witness lies beyond the limit.
    std::optional<bool> contained = dist.ContainsLanguage(*lang);
    if (!contained.has_value() || !*contained) inconclusive = true;
  }
  if (inconclusive) {
    throw ScanLimitInconclusive(
        "witness scan limit " + std::to_string(scan_limit) +
            " reached with undecided languages",
        result);
  }
  return result;
}

}  // namespace dplang
