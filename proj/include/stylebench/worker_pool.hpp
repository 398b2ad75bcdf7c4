// Copyright 2026 The StyleBench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STYLEBENCH__WORKER_POOL_HPP_
#define STYLEBENCH__WORKER_POOL_HPP_

#include <cstddef>
#include <functional>
#include <vector>

namespace stylebench
{

/// Hardware concurrency, at least 1.
std::size_t default_jobs();

/// Runs `task(i)` for every i in [0, count) on `jobs` threads. Every index is
/// processed exactly once; callers write results into slot i so the merged
/// output does not depend on scheduling. The first exception thrown by a task
/// is rethrown after all threads have joined.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)> & task);

/// Index-ordered map over a vector.
template <typename In, typename Out>
std::vector<Out> parallel_map(
  const std::vector<In> & inputs, std::size_t jobs, const std::function<Out(const In &)> & fn)
{
  std::vector<Out> out(inputs.size());
  parallel_for(inputs.size(), jobs, [&](std::size_t i) { out[i] = fn(inputs[i]); });
  return out;
}

}  // namespace stylebench

#endif  // STYLEBENCH__WORKER_POOL_HPP_
