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

#ifndef STYLEBENCH__THRESHOLDS_HPP_
#define STYLEBENCH__THRESHOLDS_HPP_

#include "stylebench/types.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace stylebench
{

/// One block of per-scenario rule thresholds.
///
/// Aggressive-side: theta_v [m/s], theta_a [m/s^2], theta_sigma [m/s^2],
/// tau_v_a [m/s] and tau_a_a [m/s^2] (both-must-hold form), theta_psi [rad],
/// theta_a_lat [m/s^2]. Conservative-side: tau_v_c [m/s],
/// tau_sigma_c [m/s^2], psi_low [rad]. A rule only consults the fields
/// relevant to its scenario.
struct StyleThresholds
{
  double theta_v{15.0};
  double theta_a{2.5};
  double theta_sigma{0.8};
  double tau_v_a{14.0};
  double tau_a_a{2.0};
  double tau_v_c{6.0};
  double tau_sigma_c{0.3};
  double theta_psi{0.45};
  double psi_low{0.30};
  double theta_a_lat{2.5};

  StyleThresholds scaled_aggressive(double factor) const;
  bool operator==(const StyleThresholds &) const = default;
};

/// Complete rule configuration: global knobs plus named per-scenario sections.
///
/// Section keys are stable strings, e.g. "lane_following.close.curve",
/// "intersection.left", "lane_change", "crosswalk".
struct ThresholdSet
{
  // trend fitting
  double slope_min{0.15};   // m/s^2
  double v_std_max{0.5};    // m/s
  // time headway bounds and frame fractions
  double unsafe_headway_s{1.0};
  double safe_headway_s{2.5};
  double unsafe_ratio_max{0.5};
  double safe_ratio_min{0.7};
  // maneuver detection
  double yaw_turn_min{0.5};      // rad
  double yaw_lane_change{0.25};  // rad, fixed
  // crosswalk conservative speed (fixed)
  double crosswalk_v_conservative{2.0};  // m/s
  // context multipliers applied to aggressive-side thresholds
  double unprotected_factor{0.85};
  double pedestrian_factor{0.8};
  double curve_factor{0.85};
  double merge_risk_factor{0.85};

  std::map<std::string, StyleThresholds> sections;

  /// Shipped defaults with every section populated.
  static ThresholdSet defaults();

  /// Throws InvalidInput for an unknown section key.
  const StyleThresholds & section(const std::string & key) const;
  StyleThresholds & section(const std::string & key);

  /// Human-readable invariant violations; empty when valid.
  std::vector<std::string> violations() const;

  bool operator==(const ThresholdSet &) const = default;
};

std::string lane_following_section(LeadPresence lead, RoadShape shape);

enum class Maneuver { Left, Right, Straight };
std::string_view to_string(Maneuver maneuver);
std::string intersection_section(Maneuver maneuver);

/// Names of every section a ThresholdSet carries.
std::vector<std::string> all_section_keys();

nlohmann::json thresholds_to_json(const ThresholdSet & thresholds);

/// Overlays `doc` onto the shipped defaults: missing keys keep their default
/// value, unknown keys are reported through `warnings`.
ThresholdSet thresholds_from_json(
  const nlohmann::json & doc, std::vector<std::string> * warnings = nullptr);

/// Parses and validates thresholds text; `origin` names it in messages.
/// Throws ParseError or InvalidInput.
ThresholdSet parse_thresholds(const std::string & text, const std::string & origin);

/// Reads and validates a thresholds file. Throws ParseError or InvalidInput.
ThresholdSet load_thresholds(const std::string & path);

}  // namespace stylebench

#endif  // STYLEBENCH__THRESHOLDS_HPP_
