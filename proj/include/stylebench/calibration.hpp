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

#ifndef STYLEBENCH__CALIBRATION_HPP_
#define STYLEBENCH__CALIBRATION_HPP_

#include "stylebench/kinematics.hpp"
#include "stylebench/thresholds.hpp"

#include <json.hpp>

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace stylebench::calibration
{

struct PercentileConfig
{
  double upper{85.0};  // aggressive-side thresholds
  double lower{15.0};  // conservative-side thresholds
  std::size_t min_clips{30};
};

PercentileConfig percentile_config_from_json(const nlohmann::json & doc);
nlohmann::json percentile_config_to_json(const PercentileConfig & config);

/// Linear-interpolation percentile (rank p/100 * (n-1) into sorted values).
/// Throws InvalidInput on an empty input or p outside [0, 100].
double percentile(std::vector<double> values, double p);

/// Threshold section a clip's rules read from; nullopt for carparks.
std::optional<std::string> section_for(
  const SceneContext & ctx, const kinematics::KinematicFeatures & feats,
  const ThresholdSet & thresholds);

struct SectionReport
{
  std::string section;
  std::size_t samples{0};
  bool calibrated{false};
  StyleThresholds values;
};

struct CalibrationResult
{
  ThresholdSet thresholds;
  std::vector<SectionReport> sections;
  std::vector<std::string> warnings;
};

using LabeledFeatures = std::pair<SceneContext, kinematics::KinematicFeatures>;

/// Per section with at least min_clips samples: aggressive-side fields get
/// the upper percentile of the matching feature, conservative-side fields the
/// lower one. Sections below the minimum keep `base`. Global knobs, including
/// the fixed lane-change yaw and crosswalk speed, are never touched.
CalibrationResult calibrate_thresholds(
  std::span<const LabeledFeatures> corpus, const PercentileConfig & config,
  const ThresholdSet & base = ThresholdSet::defaults());

nlohmann::json calibration_report_to_json(const CalibrationResult & result, const PercentileConfig & config);

}  // namespace stylebench::calibration

#endif  // STYLEBENCH__CALIBRATION_HPP_
