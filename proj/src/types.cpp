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

#include "stylebench/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace stylebench
{
namespace
{
template <typename Enum, std::size_t N>
std::optional<Enum> lookup(
  std::string_view text, const std::array<std::pair<Enum, std::string_view>, N> & table)
{
  for (const auto & [value, name] : table) {
    if (name == text) return value;
  }
  return std::nullopt;
}

template <typename Enum, std::size_t N>
std::string_view name_of(Enum value, const std::array<std::pair<Enum, std::string_view>, N> & table)
{
  for (const auto & [v, name] : table) {
    if (v == value) return name;
  }
  return "unknown";
}

constexpr std::array<std::pair<StyleLabel, std::string_view>, 3> kStyleNames{{
  {StyleLabel::Aggressive, "A"},
  {StyleLabel::Normal, "N"},
  {StyleLabel::Conservative, "C"},
}};

constexpr std::array<std::pair<ScenarioType, std::string_view>, 12> kScenarioNames{{
  {ScenarioType::LaneFollowing, "lane_following"},
  {ScenarioType::ProtectedIntersection, "protected_intersection"},
  {ScenarioType::UnprotectedIntersection, "unprotected_intersection"},
  {ScenarioType::LaneChange, "lane_change"},
  {ScenarioType::Crosswalk, "crosswalk"},
  {ScenarioType::SideToMainEgoMerging, "side_to_main_ego_merging"},
  {ScenarioType::SideToMainEgoMain, "side_to_main_ego_main"},
  {ScenarioType::SpecialInteriorRoad, "special_interior_road"},
  {ScenarioType::RoundaboutEntrance, "roundabout_entrance"},
  {ScenarioType::RoundaboutInterior, "roundabout_interior"},
  {ScenarioType::CountrysideRoad, "countryside_road"},
  {ScenarioType::Carpark, "carpark"},
}};

constexpr std::array<std::pair<LeadPresence, std::string_view>, 3> kLeadNames{{
  {LeadPresence::None, "none"},
  {LeadPresence::Far, "far"},
  {LeadPresence::Close, "close"},
}};

constexpr std::array<std::pair<RoadShape, std::string_view>, 2> kShapeNames{{
  {RoadShape::Straight, "straight"},
  {RoadShape::Curve, "curve"},
}};

constexpr std::array<std::pair<AgentKind, std::string_view>, 2> kKindNames{{
  {AgentKind::Vehicle, "vehicle"},
  {AgentKind::Pedestrian, "pedestrian"},
}};
}  // namespace

std::string_view to_string(StyleLabel label) { return name_of(label, kStyleNames); }

std::optional<StyleLabel> parse_style_label(std::string_view text)
{
  return lookup(text, kStyleNames);
}

StyleLabel style_label_from_string(std::string_view text)
{
  const auto label = parse_style_label(text);
  if (!label) {
    throw InvalidInput("style label must be one of A, N, C (got '" + std::string(text) + "')");
  }
  return *label;
}

std::string_view to_string(ScenarioType scenario) { return name_of(scenario, kScenarioNames); }

std::optional<ScenarioType> parse_scenario(std::string_view text)
{
  return lookup(text, kScenarioNames);
}

std::string_view to_string(LeadPresence lead) { return name_of(lead, kLeadNames); }
std::optional<LeadPresence> parse_lead(std::string_view text) { return lookup(text, kLeadNames); }

std::string_view to_string(RoadShape shape) { return name_of(shape, kShapeNames); }
std::optional<RoadShape> parse_road_shape(std::string_view text)
{
  return lookup(text, kShapeNames);
}

std::string_view to_string(AgentKind kind) { return name_of(kind, kKindNames); }
std::optional<AgentKind> parse_agent_kind(std::string_view text)
{
  return lookup(text, kKindNames);
}

double TrajectorySample::speed() const { return std::hypot(vx, vy); }

double TrajectorySample::accel_magnitude() const { return std::hypot(ax, ay); }

std::optional<AgentState> AgentTrack::state_at(double t, double tolerance) const
{
  if (states.empty()) return std::nullopt;
  // states are ordered by t for any validated track
  const auto it = std::lower_bound(
    states.begin(), states.end(), t,
    [](const AgentState & s, double value) { return s.t < value; });

  const AgentState * best = nullptr;
  double best_dt = tolerance;
  auto consider = [&](const AgentState & s) {
    const double d = std::abs(s.t - t);
    if (d <= best_dt && (best == nullptr || d < std::abs(best->t - t))) {
      best = &s;
      best_dt = d;
    }
  };
  if (it != states.end()) consider(*it);
  if (it != states.begin()) consider(*std::prev(it));
  if (best == nullptr) return std::nullopt;
  return *best;
}

}  // namespace stylebench
