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

#ifndef DPLANG_PARALLEL_HPP_
#define DPLANG_PARALLEL_HPP_

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace dplang {

inline unsigned ResolveThreads(unsigned requested, std::uint64_t trials) {
  unsigned t = requested;
  if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
  if (trials < t) t = static_cast<unsigned>(std::max<std::uint64_t>(1, trials));
  return t;
}

// Runs fn(trial, partial) over trial indices [0, trials) on a worker pool.
// Workers own fixed contiguous chunks and partials are merged in chunk
// order, so the result is independent of execution interleaving (trials
// must derive their own randomness from the trial index).
template <typename Partial, typename Fn>
Partial ParallelAccumulate(std::uint64_t trials, unsigned threads, Fn fn) {
  const unsigned workers = ResolveThreads(threads, trials);
  const std::uint64_t chunk = (trials + workers - 1) / workers;
  std::vector<Partial> partials(workers);
  if (workers == 1) {
    for (std::uint64_t t = 0; t < trials; ++t) fn(t, partials[0]);
    return partials[0];
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::uint64_t begin = std::uint64_t(w) * chunk;
        const std::uint64_t end = std::min(trials, begin + chunk);
        for (std::uint64_t t = begin; t < end; ++t) fn(t, partials[w]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  Partial total = std::move(partials[0]);
  for (unsigned w = 1; w < workers; ++w) total.MergeFrom(partials[w]);
  return total;
}

}  // namespace dplang

#endif  // DPLANG_PARALLEL_HPP_
