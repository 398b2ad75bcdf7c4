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

#ifndef STYLEBENCH__SM_PDMS_HPP_
#define STYLEBENCH__SM_PDMS_HPP_

#include "stylebench/types.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace stylebench::metric
{

/// Style-conditioned knobs of the metric.
struct StyleParams
{
  double ttc_min_aggressive{0.8};
  double ttc_min_normal{1.0};
  double ttc_min_conservative{1.2};
  double comfort_scale_aggressive{1.2};
  double comfort_scale_normal{1.0};
  double comfort_scale_conservative{0.8};
  double alpha{1.2};

  double ttc_min(StyleLabel style) const;
  double comfort_scale(StyleLabel style) const;
};

/// Baseline comfort bounds, scaled per style.
struct ComfortLimits
{
  double max_lon_accel{2.40};  // m/s^2
  double max_lon_decel{4.05};  // m/s^2, magnitude
  double max_lat_accel{4.89};  // m/s^2
  double max_jerk{8.37};       // m/s^3
  double max_yaw_rate{0.95};   // rad/s

  ComfortLimits scaled(double factor) const;
};

struct Weights
{
  double ttc{5.0};
  double comfort{2.0};
  double ep{5.0};
};

struct EgoFootprint
{
  double half_length{2.5};
  double half_width{1.0};
};

enum class DacMode { Center, Footprint };

struct EvalConfig
{
  StyleParams style_params;
  ComfortLimits comfort_limits;
  Weights weights;
  double horizon_s{4.0};
  EgoFootprint ego_footprint;
  DacMode dac_mode{DacMode::Center};

  /// Throws InvalidInput when a parameter breaks its invariants.
  void validate() const;
};

nlohmann::json eval_config_to_json(const EvalConfig & config);
/// Overlays `doc` onto the defaults. Unknown keys are appended to `warnings`.
EvalConfig eval_config_from_json(
  const nlohmann::json & doc, std::vector<std::string> * warnings = nullptr);

struct SubScores
{
  double nc{1.0};
  double dac{1.0};
  double ttc{1.0};
  double comfort{1.0};
  double ep{1.0};
};

struct SmPdmsReport
{
  std::string clip_id;
  StyleLabel style{StyleLabel::Normal};
  double nc{1.0};
  double dac{1.0};
  double ttc{1.0};
  double comfort{1.0};
  double ep{1.0};
  double ep_raw{1.0};  // before the clamp at 0
  double sm_pdms{1.0};
  double ep_agent{0.0};
  double ep_target{0.0};
  double ref_used{0.0};
  double min_ttc{0.0};
  std::vector<std::string> warnings;
};

/// Progress tolerance by target progress band. Throws InvalidInput for a
/// negative target.
double ref_tolerance(double ep_target);

/// 1 - alpha * (ep_agent - ep_target)^2 / ref^2, unbounded below.
double ep_score_raw(double ep_agent, double ep_target, double alpha);
/// ep_score_raw clamped at 0.
double ep_score(double ep_agent, double ep_target, double alpha);

/// Polyline length of the samples with t <= t0 + horizon. Appends a warning
/// when the trajectory ends before the horizon.
double progress_along(
  const Trajectory & traj, double horizon, std::vector<std::string> * warnings = nullptr);

/// 1 at or above the style's TTC floor, min_ttc / floor below it.
double ttc_score(double min_ttc, StyleLabel style, const StyleParams & params);

/// Per-frame comfort quantities derived by finite differences.
struct ComfortFrame
{
  double lon_accel{0.0};
  double lat_accel{0.0};
  double jerk{0.0};
  double yaw_rate{0.0};
};
std::vector<ComfortFrame> comfort_frames(const Trajectory & traj);

/// Fraction of frames with every comfort quantity inside the style-scaled
/// limits.
double comfort_score(
  const Trajectory & traj, StyleLabel style, const ComfortLimits & limits,
  const StyleParams & params);

/// 0 if the ego footprint touches or overlaps any agent footprint at any
/// frame. Agent states are matched to ego samples within dt_nominal/2.
double nc_score(
  const Trajectory & ego, const std::vector<AgentTrack> & agents, const EgoFootprint & footprint);

/// 0 if any ego sample lies outside the corridor (boundary counts as inside).
/// Footprint mode tests the four corners instead of the center.
double dac_score(
  const Trajectory & ego, const Polygon & corridor, DacMode mode = DacMode::Center,
  const EgoFootprint & footprint = {});

/// nc * dac * weighted mean of (ttc, comfort, ep). Throws InvalidInput for a
/// non-positive weight.
double aggregate_sm_pdms(const SubScores & scores, const Weights & weights);

/// Scores `agent` against the human reference `human`. Without a corridor the
/// DAC gate passes and a warning is recorded.
SmPdmsReport evaluate_clip(
  const Trajectory & agent, const Trajectory & human, const std::vector<AgentTrack> & agents,
  const std::optional<Polygon> & corridor, StyleLabel style, const EvalConfig & config);

nlohmann::json report_to_json(const SmPdmsReport & report);

/// CSV helpers for the corpus summary.
std::string csv_header();
std::string csv_row(const SmPdmsReport & report);

}  // namespace stylebench::metric

#endif  // STYLEBENCH__SM_PDMS_HPP_
