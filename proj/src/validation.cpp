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

#include "stylebench/validation.hpp"

#include "stylebench/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace stylebench
{
namespace
{
std::string at_index(const char * what, std::size_t i)
{
  std::ostringstream os;
  os << what << "[" << i << "]";
  return os.str();
}

bool finite_sample(const TrajectorySample & s)
{
  return std::isfinite(s.t) && std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.yaw) &&
         std::isfinite(s.vx) && std::isfinite(s.vy) && std::isfinite(s.ax) && std::isfinite(s.ay);
}

double nearest_gap(const std::vector<TrajectorySample> & samples, double t)
{
  const auto it = std::lower_bound(
    samples.begin(), samples.end(), t,
    [](const TrajectorySample & s, double value) { return s.t < value; });
  double best = std::numeric_limits<double>::infinity();
  if (it != samples.end()) best = std::min(best, std::abs(it->t - t));
  if (it != samples.begin()) best = std::min(best, std::abs(std::prev(it)->t - t));
  return best;
}
}  // namespace

bool ValidationReport::has(const std::string & kind) const
{
  return std::any_of(
    violations.begin(), violations.end(), [&](const Violation & v) { return v.kind == kind; });
}

ValidationReport validate_clip(
  const Trajectory & traj, const std::vector<AgentTrack> & agents, const SceneContext & /*ctx*/)
{
  ValidationReport report;
  auto add = [&](std::string kind, std::string detail) {
    report.violations.push_back({std::move(kind), std::move(detail)});
  };

  if (traj.clip_id.empty()) add("missing clip_id", "clip_id is empty");

  const double dt = traj.dt_nominal;
  const bool dt_ok = std::isfinite(dt) && dt > 0.0;
  if (!dt_ok) add("invalid dt_nominal", "dt_nominal must be finite and positive");

  const auto & samples = traj.samples;
  if (samples.size() < 2) {
    add("too few samples", "need at least 2 samples, got " + std::to_string(samples.size()));
  }

  bool monotone = true;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto & s = samples[i];
    if (!finite_sample(s)) {
      add("non-finite value", at_index("samples", i));
      continue;
    }
    if (!(s.yaw > -geometry::kPi && s.yaw <= geometry::kPi)) {
      add("yaw out of range", at_index("samples", i) + " yaw=" + std::to_string(s.yaw));
    }
    if (i == 0) continue;
    const double step = s.t - samples[i - 1].t;
    if (!(step > 0.0)) {
      monotone = false;
      add("non-monotone timestamps", at_index("samples", i) + " t=" + std::to_string(s.t));
    } else if (dt_ok && (step < 0.5 * dt || step > 1.5 * dt)) {
      add(
        "irregular sample spacing",
        at_index("samples", i) + " step=" + std::to_string(step) + " dt_nominal=" +
          std::to_string(dt));
    }
  }
  if (samples.size() >= 2 && monotone && !(traj.duration() > 0.0)) {
    add("zero duration", "clip duration must be positive");
  }

  for (std::size_t a = 0; a < agents.size(); ++a) {
    const auto & track = agents[a];
    const std::string where = "agent " + track.agent_id;
    if (!(track.half_length > 0.0) || !(track.half_width > 0.0) ||
        !std::isfinite(track.half_length) || !std::isfinite(track.half_width)) {
      add("non-positive footprint", where);
    }
    for (std::size_t i = 0; i < track.states.size(); ++i) {
      const auto & s = track.states[i];
      if (!std::isfinite(s.t) || !std::isfinite(s.x) || !std::isfinite(s.y) ||
          !std::isfinite(s.yaw) || !std::isfinite(s.speed)) {
        add("non-finite value", where + " " + at_index("states", i));
        continue;
      }
      if (!(s.yaw > -geometry::kPi && s.yaw <= geometry::kPi)) {
        add("yaw out of range", where + " " + at_index("states", i));
      }
      if (i > 0 && !(s.t > track.states[i - 1].t)) {
        add("non-monotone agent timestamps", where + " " + at_index("states", i));
      }
      // association needs an ordered ego timeline
      if (dt_ok && monotone && !samples.empty() && nearest_gap(samples, s.t) > 0.5 * dt) {
        add("unaligned agent sample", where + " t=" + std::to_string(s.t));
      }
    }
  }
  return report;
}

}  // namespace stylebench
