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

#ifndef STYLEBENCH__KINEMATICS_HPP_
#define STYLEBENCH__KINEMATICS_HPP_

#include "stylebench/thresholds.hpp"
#include "stylebench/types.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace stylebench::kinematics
{

enum class TrendClass { Accelerating, Decelerating, AccelThenDecel, DecelThenAccel, QuasiConstant };
std::string_view to_string(TrendClass trend);
std::optional<TrendClass> parse_trend(std::string_view text);

struct SpeedPoint
{
  double t{0.0};
  double v{0.0};
};

struct LinearFit
{
  double intercept{0.0};  // at t = 0
  double slope{0.0};
  double rss{0.0};
};

/// Coefficients of v = c2*t^2 + c1*t + c0.
struct QuadraticFit
{
  double c0{0.0};
  double c1{0.0};
  double c2{0.0};
  double rss{0.0};
  bool ok{false};  // false when the normal equations are singular
};

LinearFit fit_linear(std::span<const SpeedPoint> points);
QuadraticFit fit_quadratic(std::span<const SpeedPoint> points);

/// Trend of a speed profile. Quasi-constant check first, then an interior-vertex
/// quadratic that beats the line by at least 20% RSS, then the linear slope.
/// Throws InvalidInput for fewer than 2 points.
TrendClass fit_velocity_trend(std::span<const SpeedPoint> speeds, const ThresholdSet & thresholds);

std::vector<SpeedPoint> speed_profile(const Trajectory & traj);

struct KinematicFeatures
{
  double v_avg{0.0};
  double v_std{0.0};
  double a_max{0.0};
  double sigma_a{0.0};
  double vy_max{0.0};
  double ay_max{0.0};  // max |ay|
  double delta_psi{0.0};
  TrendClass trend{TrendClass::QuasiConstant};
  double unsafe_ratio{0.0};
  double safe_ratio{0.0};
  double min_ttc{0.0};  // +inf when no agent ever closes in

  bool operator==(const KinematicFeatures &) const = default;
};

/// Fills v_avg, v_std, a_max, sigma_a, vy_max, ay_max, delta_psi. Standard
/// deviations are population (divide by n).
KinematicFeatures compute_motion_stats(const Trajectory & traj);

struct HeadwayRatios
{
  double unsafe_ratio{0.0};
  double safe_ratio{0.0};
};

/// Ego speed below which a frame does not count toward headway ratios.
constexpr double kHeadwayMinSpeed = 0.5;

/// Fractions of lead-qualifying frames with time headway below
/// unsafe_headway_s / above safe_headway_s. A frame qualifies when the lead
/// is ahead along the ego heading and ego speed exceeds kHeadwayMinSpeed.
HeadwayRatios headway_ratios(
  const Trajectory & traj, const AgentTrack & lead, const ThresholdSet & thresholds);

/// Lateral half-width of the forward cone used for TTC and lead selection.
constexpr double kForwardConeHalfWidth = 2.0;

/// Minimum time-to-collision over all frames and agents inside the forward cone.
double compute_min_ttc(const Trajectory & traj, const std::vector<AgentTrack> & agents);

Maneuver detect_maneuver(double delta_psi, double threshold);
/// Uses yaw_lane_change for lane changes and yaw_turn_min for intersections.
Maneuver detect_maneuver(double delta_psi, const ThresholdSet & thresholds, ScenarioType scenario);

/// The vehicle inside the forward cone for the most frames; ties go to the
/// smaller mean gap, then agent_id.
std::optional<std::size_t> select_lead(const Trajectory & traj, const std::vector<AgentTrack> & agents);

/// Full feature vector. Headway ratios are only computed when the context
/// declares a lead and one can be selected from the agents.
KinematicFeatures extract_features(const Clip & clip, const ThresholdSet & thresholds);

}  // namespace stylebench::kinematics

#endif  // STYLEBENCH__KINEMATICS_HPP_
