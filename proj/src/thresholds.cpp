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

#include "stylebench/thresholds.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

namespace stylebench
{
namespace
{
using SectionField = std::pair<const char *, double StyleThresholds::*>;
constexpr std::array<SectionField, 10> kSectionFields{{
  {"theta_v", &StyleThresholds::theta_v},
  {"theta_a", &StyleThresholds::theta_a},
  {"theta_sigma", &StyleThresholds::theta_sigma},
  {"tau_v_a", &StyleThresholds::tau_v_a},
  {"tau_a_a", &StyleThresholds::tau_a_a},
  {"tau_v_c", &StyleThresholds::tau_v_c},
  {"tau_sigma_c", &StyleThresholds::tau_sigma_c},
  {"theta_psi", &StyleThresholds::theta_psi},
  {"psi_low", &StyleThresholds::psi_low},
  {"theta_a_lat", &StyleThresholds::theta_a_lat},
}};

using GlobalField = std::pair<const char *, double ThresholdSet::*>;
constexpr std::array<GlobalField, 13> kGlobalFields{{
  {"slope_min", &ThresholdSet::slope_min},
  {"v_std_max", &ThresholdSet::v_std_max},
  {"unsafe_headway_s", &ThresholdSet::unsafe_headway_s},
  {"safe_headway_s", &ThresholdSet::safe_headway_s},
  {"unsafe_ratio_max", &ThresholdSet::unsafe_ratio_max},
  {"safe_ratio_min", &ThresholdSet::safe_ratio_min},
  {"yaw_turn_min", &ThresholdSet::yaw_turn_min},
  {"yaw_lane_change", &ThresholdSet::yaw_lane_change},
  {"crosswalk_v_conservative", &ThresholdSet::crosswalk_v_conservative},
  {"unprotected_factor", &ThresholdSet::unprotected_factor},
  {"pedestrian_factor", &ThresholdSet::pedestrian_factor},
  {"curve_factor", &ThresholdSet::curve_factor},
  {"merge_risk_factor", &ThresholdSet::merge_risk_factor},
}};

StyleThresholds make(
  double theta_v, double theta_a, double theta_sigma, double tau_v_c, double tau_sigma_c)
{
  StyleThresholds t;
  t.theta_v = theta_v;
  t.theta_a = theta_a;
  t.theta_sigma = theta_sigma;
  t.tau_v_c = tau_v_c;
  t.tau_sigma_c = tau_sigma_c;
  return t;
}

const nlohmann::json & units_doc()
{
  static const nlohmann::json units = {
    {"slope_min", "m/s^2"},
    {"v_std_max", "m/s"},
    {"unsafe_headway_s", "s"},
    {"safe_headway_s", "s"},
    {"unsafe_ratio_max", "fraction of lead-qualifying frames"},
    {"safe_ratio_min", "fraction of lead-qualifying frames"},
    {"yaw_turn_min", "rad"},
    {"yaw_lane_change", "rad (fixed)"},
    {"crosswalk_v_conservative", "m/s (fixed)"},
    {"unprotected_factor", "multiplier on aggressive thresholds"},
    {"pedestrian_factor", "multiplier on aggressive speed threshold"},
    {"curve_factor", "multiplier on aggressive thresholds"},
    {"merge_risk_factor", "multiplier on aggressive acceleration threshold"},
    {"theta_v", "m/s"},
    {"theta_a", "m/s^2"},
    {"theta_sigma", "m/s^2"},
    {"tau_v_a", "m/s"},
    {"tau_a_a", "m/s^2"},
    {"tau_v_c", "m/s"},
    {"tau_sigma_c", "m/s^2"},
    {"theta_psi", "rad"},
    {"psi_low", "rad"},
    {"theta_a_lat", "m/s^2"},
  };
  return units;
}
}  // namespace

StyleThresholds StyleThresholds::scaled_aggressive(double factor) const
{
  StyleThresholds out = *this;
  out.theta_v *= factor;
  out.theta_a *= factor;
  out.theta_sigma *= factor;
  out.tau_v_a *= factor;
  out.tau_a_a *= factor;
  out.theta_psi *= factor;
  out.theta_a_lat *= factor;
  return out;
}

std::string_view to_string(Maneuver maneuver)
{
  switch (maneuver) {
    case Maneuver::Left:
      return "left";
    case Maneuver::Right:
      return "right";
    case Maneuver::Straight:
      return "straight";
  }
  return "straight";
}

std::string lane_following_section(LeadPresence lead, RoadShape shape)
{
  return "lane_following." + std::string(to_string(lead)) + "." + std::string(to_string(shape));
}

std::string intersection_section(Maneuver maneuver)
{
  return "intersection." + std::string(to_string(maneuver));
}

std::vector<std::string> all_section_keys()
{
  std::vector<std::string> keys;
  for (auto lead : {LeadPresence::None, LeadPresence::Far, LeadPresence::Close}) {
    for (auto shape : {RoadShape::Straight, RoadShape::Curve}) {
      keys.push_back(lane_following_section(lead, shape));
    }
  }
  for (auto m : {Maneuver::Left, Maneuver::Right, Maneuver::Straight}) {
    keys.push_back(intersection_section(m));
  }
  for (const char * k :
       {"lane_change", "crosswalk", "side_to_main_ego_merging", "side_to_main_ego_main",
        "special_interior_road", "roundabout_entrance", "roundabout_interior",
        "countryside_road"}) {
    keys.emplace_back(k);
  }
  return keys;
}

ThresholdSet ThresholdSet::defaults()
{
  ThresholdSet set;
  auto & s = set.sections;

  s["lane_following.none.straight"] = make(16.0, 2.5, 0.8, 6.0, 0.3);
  s["lane_following.none.curve"] = make(13.0, 2.4, 0.7, 6.0, 0.3);
  s["lane_following.far.straight"] = make(15.0, 2.5, 0.8, 6.0, 0.3);
  s["lane_following.far.curve"] = make(12.5, 2.4, 0.7, 6.0, 0.3);
  s["lane_following.close.straight"] = make(14.0, 2.3, 0.7, 6.0, 0.3);
  s["lane_following.close.curve"] = make(12.0, 2.2, 0.65, 6.0, 0.3);

  s["intersection.left"] = make(8.0, 3.0, 0.8, 3.0, 0.3);
  s["intersection.right"] = make(7.0, 3.0, 0.8, 3.0, 0.3);
  s["intersection.straight"] = make(12.0, 2.5, 0.8, 4.0, 0.3);

  auto lane_change = make(14.0, 2.5, 0.8, 8.0, 0.3);
  lane_change.theta_psi = 0.45;
  lane_change.psi_low = 0.30;
  s["lane_change"] = lane_change;

  s["crosswalk"] = make(8.0, 2.5, 0.8, 2.0, 0.3);
  s["side_to_main_ego_merging"] = make(9.0, 2.5, 0.8, 3.0, 0.3);

  auto main_road = make(16.0, 2.5, 0.8, 5.0, 0.3);
  main_road.tau_v_a = 14.0;
  main_road.tau_a_a = 2.0;
  s["side_to_main_ego_main"] = main_road;

  s["special_interior_road"] = make(7.0, 2.3, 0.7, 3.0, 0.3);
  s["roundabout_entrance"] = make(8.0, 2.3, 0.7, 3.0, 0.3);

  auto interior = make(9.0, 2.5, 0.7, 3.0, 0.3);
  interior.theta_a_lat = 2.5;
  s["roundabout_interior"] = interior;

  s["countryside_road"] = make(20.0, 2.5, 0.8, 10.0, 0.3);
  return set;
}

const StyleThresholds & ThresholdSet::section(const std::string & key) const
{
  const auto it = sections.find(key);
  if (it == sections.end()) throw InvalidInput("unknown threshold section '" + key + "'");
  return it->second;
}

StyleThresholds & ThresholdSet::section(const std::string & key)
{
  const auto it = sections.find(key);
  if (it == sections.end()) throw InvalidInput("unknown threshold section '" + key + "'");
  return it->second;
}

std::vector<std::string> ThresholdSet::violations() const
{
  std::vector<std::string> out;
  for (const auto & [name, member] : kGlobalFields) {
    const double v = this->*member;
    if (!std::isfinite(v) || v <= 0.0) {
      out.push_back(std::string(name) + " must be finite and positive");
    }
  }
  if (!(safe_headway_s > unsafe_headway_s)) {
    out.emplace_back("safe_headway_s must exceed unsafe_headway_s");
  }
  for (const auto & key : all_section_keys()) {
    if (!sections.count(key)) out.push_back("missing section " + key);
  }
  for (const auto & [key, block] : sections) {
    for (const auto & [name, member] : kSectionFields) {
      const double v = block.*member;
      if (!std::isfinite(v) || v <= 0.0) {
        out.push_back(key + "." + name + " must be finite and positive");
      }
    }
    if (!(block.tau_v_a > block.tau_v_c)) {
      out.push_back(key + ": tau_v_a must exceed tau_v_c");
    }
  }
  return out;
}

nlohmann::json thresholds_to_json(const ThresholdSet & thresholds)
{
  nlohmann::json global = nlohmann::json::object();
  for (const auto & [name, member] : kGlobalFields) global[name] = thresholds.*member;

  nlohmann::json sections = nlohmann::json::object();
  for (const auto & [key, block] : thresholds.sections) {
    nlohmann::json entry = nlohmann::json::object();
    for (const auto & [name, member] : kSectionFields) entry[name] = block.*member;
    sections[key] = entry;
  }
  return {{"units", units_doc()}, {"global", global}, {"sections", sections}};
}

ThresholdSet thresholds_from_json(const nlohmann::json & doc, std::vector<std::string> * warnings)
{
  auto warn = [&](std::string message) {
    if (warnings) warnings->push_back(std::move(message));
  };
  if (!doc.is_object()) throw ParseError("thresholds document must be a JSON object");

  ThresholdSet set = ThresholdSet::defaults();
  for (const auto & [key, value] : doc.items()) {
    if (key != "units" && key != "global" && key != "sections") warn("unknown field '" + key + "'");
  }

  if (doc.contains("global")) {
    for (const auto & [key, value] : doc.at("global").items()) {
      bool known = false;
      for (const auto & [name, member] : kGlobalFields) {
        if (key == name) {
          if (!value.is_number()) throw ParseError("global." + key + " must be a number");
          set.*member = value.get<double>();
          known = true;
          break;
        }
      }
      if (!known) warn("unknown field 'global." + key + "'");
    }
  }

  if (doc.contains("sections")) {
    for (const auto & [key, entry] : doc.at("sections").items()) {
      const auto it = set.sections.find(key);
      if (it == set.sections.end()) {
        warn("unknown section '" + key + "'");
        continue;
      }
      for (const auto & [field, value] : entry.items()) {
        bool known = false;
        for (const auto & [name, member] : kSectionFields) {
          if (field == name) {
            if (!value.is_number()) throw ParseError(key + "." + field + " must be a number");
            it->second.*member = value.get<double>();
            known = true;
            break;
          }
        }
        if (!known) warn("unknown field '" + key + "." + field + "'");
      }
    }
  }
  return set;
}

ThresholdSet parse_thresholds(const std::string & text, const std::string & origin)
{
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception & e) {
    throw ParseError("thresholds file " + origin + ": " + e.what());
  }
  std::vector<std::string> warnings;
  ThresholdSet set = thresholds_from_json(doc, &warnings);
  for (const auto & w : warnings) spdlog::warn("{}: {}", origin, w);
  const auto problems = set.violations();
  if (!problems.empty()) {
    std::ostringstream msg;
    msg << "invalid thresholds in " << origin << ":";
    for (const auto & p : problems) msg << " " << p << ";";
    throw InvalidInput(msg.str());
  }
  return set;
}

ThresholdSet load_thresholds(const std::string & path)
{
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open thresholds file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_thresholds(text.str(), path);
}

}  // namespace stylebench
