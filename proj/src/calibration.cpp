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

#include "stylebench/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace stylebench::calibration
{

PercentileConfig percentile_config_from_json(const nlohmann::json & doc)
{
  PercentileConfig config;
  if (!doc.is_object()) throw ParseError("percentile config must be a JSON object");
  config.upper = doc.value("upper", config.upper);
  config.lower = doc.value("lower", config.lower);
  config.min_clips = doc.value("min_clips", config.min_clips);
  if (!(config.lower >= 0.0 && config.lower <= config.upper && config.upper <= 100.0)) {
    throw InvalidInput("percentiles must satisfy 0 <= lower <= upper <= 100");
  }
  return config;
}

nlohmann::json percentile_config_to_json(const PercentileConfig & config)
{
  return {{"upper", config.upper}, {"lower", config.lower}, {"min_clips", config.min_clips}};
}

double percentile(std::vector<double> values, double p)
{
  if (values.empty()) throw InvalidInput("percentile of an empty sample");
  if (!(p >= 0.0 && p <= 100.0)) throw InvalidInput("percentile must lie in [0, 100]");
  std::sort(values.begin(), values.end());
  const double rank = p / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::optional<std::string> section_for(
  const SceneContext & ctx, const kinematics::KinematicFeatures & feats,
  const ThresholdSet & thresholds)
{
  switch (ctx.scenario) {
    case ScenarioType::LaneFollowing:
      return lane_following_section(ctx.lead, ctx.road_shape);
    case ScenarioType::ProtectedIntersection:
    case ScenarioType::UnprotectedIntersection:
      return intersection_section(kinematics::detect_maneuver(feats.delta_psi, thresholds.yaw_turn_min));
    case ScenarioType::LaneChange:
      if (kinematics::detect_maneuver(feats.delta_psi, thresholds.yaw_lane_change) ==
          Maneuver::Straight) {
        return lane_following_section(ctx.lead, ctx.road_shape);
      }
      return "lane_change";
    case ScenarioType::Crosswalk:
      return "crosswalk";
    case ScenarioType::SideToMainEgoMerging:
      return "side_to_main_ego_merging";
    case ScenarioType::SideToMainEgoMain:
      return "side_to_main_ego_main";
    case ScenarioType::SpecialInteriorRoad:
      return "special_interior_road";
    case ScenarioType::RoundaboutEntrance:
      return "roundabout_entrance";
    case ScenarioType::RoundaboutInterior:
      return "roundabout_interior";
    case ScenarioType::CountrysideRoad:
      return "countryside_road";
    case ScenarioType::Carpark:
      return std::nullopt;
  }
  return std::nullopt;
}

namespace
{
struct Bucket
{
  std::vector<double> v_avg;
  std::vector<double> a_max;
  std::vector<double> sigma_a;
  std::vector<double> abs_delta_psi;
  std::vector<double> ay_max;
};

// Keeps the base value when the calibrated one would break the positivity
// invariant (e.g. a perfectly smooth corpus with sigma_a == 0).
void assign(
  double & field, double value, const std::string & where, std::vector<std::string> & warnings)
{
  if (std::isfinite(value) && value > 0.0) {
    field = value;
  } else {
    warnings.push_back(where + ": calibrated value not positive, keeping default");
  }
}
}  // namespace

CalibrationResult calibrate_thresholds(
  std::span<const LabeledFeatures> corpus, const PercentileConfig & config,
  const ThresholdSet & base)
{
  CalibrationResult result;
  result.thresholds = base;
  if (corpus.empty()) {
    result.warnings.emplace_back("empty corpus; returning default thresholds");
    for (const auto & key : all_section_keys()) {
      result.sections.push_back({key, 0, false, base.section(key)});
    }
    return result;
  }

  std::map<std::string, Bucket> buckets;
  for (const auto & [ctx, feats] : corpus) {
    const auto key = section_for(ctx, feats, base);
    if (!key) continue;
    auto & b = buckets[*key];
    b.v_avg.push_back(feats.v_avg);
    b.a_max.push_back(feats.a_max);
    b.sigma_a.push_back(feats.sigma_a);
    b.abs_delta_psi.push_back(std::abs(feats.delta_psi));
    b.ay_max.push_back(feats.ay_max);
  }

  for (const auto & key : all_section_keys()) {
    SectionReport report{key, 0, false, base.section(key)};
    const auto it = buckets.find(key);
    if (it != buckets.end()) report.samples = it->second.v_avg.size();
    if (report.samples < config.min_clips) {
      if (report.samples > 0) {
        result.warnings.push_back(
          key + ": " + std::to_string(report.samples) + " clips < " +
          std::to_string(config.min_clips) + "; keeping defaults");
      }
      result.sections.push_back(report);
      continue;
    }

    const Bucket & b = it->second;
    StyleThresholds t = base.section(key);
    auto & w = result.warnings;
    assign(t.theta_v, percentile(b.v_avg, config.upper), key + ".theta_v", w);
    assign(t.theta_a, percentile(b.a_max, config.upper), key + ".theta_a", w);
    assign(t.theta_sigma, percentile(b.sigma_a, config.upper), key + ".theta_sigma", w);
    assign(t.tau_v_a, percentile(b.v_avg, config.upper), key + ".tau_v_a", w);
    assign(t.tau_a_a, percentile(b.a_max, config.upper), key + ".tau_a_a", w);
    assign(t.tau_v_c, percentile(b.v_avg, config.lower), key + ".tau_v_c", w);
    assign(t.tau_sigma_c, percentile(b.sigma_a, config.lower), key + ".tau_sigma_c", w);
    if (key == "lane_change") {
      assign(t.theta_psi, percentile(b.abs_delta_psi, config.upper), key + ".theta_psi", w);
      assign(t.psi_low, percentile(b.abs_delta_psi, config.lower), key + ".psi_low", w);
    }
    if (key == "roundabout_interior") {
      assign(t.theta_a_lat, percentile(b.ay_max, config.upper), key + ".theta_a_lat", w);
    }
    if (!(t.tau_v_a > t.tau_v_c)) {
      w.push_back(key + ": degenerate speed distribution; keeping defaults");
      result.sections.push_back(report);
      continue;
    }
    result.thresholds.section(key) = t;
    report.calibrated = true;
    report.values = t;
    result.sections.push_back(report);
  }
  return result;
}

nlohmann::json calibration_report_to_json(const CalibrationResult & result, const PercentileConfig & config)
{
  nlohmann::json sections = nlohmann::json::array();
  for (const auto & s : result.sections) {
    sections.push_back(
      {{"section", s.section},
       {"samples", s.samples},
       {"calibrated", s.calibrated},
       {"theta_v", s.values.theta_v},
       {"theta_a", s.values.theta_a},
       {"theta_sigma", s.values.theta_sigma},
       {"tau_v_a", s.values.tau_v_a},
       {"tau_a_a", s.values.tau_a_a},
       {"tau_v_c", s.values.tau_v_c},
       {"tau_sigma_c", s.values.tau_sigma_c},
       {"theta_psi", s.values.theta_psi},
       {"psi_low", s.values.psi_low},
       {"theta_a_lat", s.values.theta_a_lat}});
  }
  return {
    {"percentiles", percentile_config_to_json(config)},
    {"sections", sections},
    {"warnings", result.warnings},
  };
}

}  // namespace stylebench::calibration
