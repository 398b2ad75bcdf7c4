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

#ifndef STYLEBENCH__VALIDATION_HPP_
#define STYLEBENCH__VALIDATION_HPP_

#include "stylebench/types.hpp"

#include <string>
#include <vector>

namespace stylebench
{

struct Violation
{
  std::string kind;    // e.g. "non-monotone timestamps"
  std::string detail;  // location and values

  bool operator==(const Violation &) const = default;
};

struct ValidationReport
{
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(const std::string & kind) const;
};

/// Checks trajectory invariants, yaw range, agent footprints, and that every
/// agent state lies within dt_nominal/2 of some ego sample. Pure.
ValidationReport validate_clip(
  const Trajectory & traj, const std::vector<AgentTrack> & agents, const SceneContext & ctx);

inline ValidationReport validate_clip(const Clip & clip)
{
  return validate_clip(clip.ego, clip.agents, clip.context);
}

}  // namespace stylebench

#endif  // STYLEBENCH__VALIDATION_HPP_
