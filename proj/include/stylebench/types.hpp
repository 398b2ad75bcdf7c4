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

#ifndef STYLEBENCH__TYPES_HPP_
#define STYLEBENCH__TYPES_HPP_

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stylebench
{

/// Raised when an operation receives arguments outside its domain.
class InvalidInput : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a referenced entity (clip, record) does not exist.
class NotFound : public std::out_of_range
{
public:
  using std::out_of_range::out_of_range;
};

/// Raised when a write would contradict already recorded state.
class Conflict : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

/// Raised when an external document cannot be decoded.
class ParseError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

enum class StyleLabel { Aggressive, Normal, Conservative };

/// "A" / "N" / "C".
std::string_view to_string(StyleLabel label);
std::optional<StyleLabel> parse_style_label(std::string_view text);
/// Throws InvalidInput for anything outside {A, N, C}.
StyleLabel style_label_from_string(std::string_view text);

constexpr std::array<StyleLabel, 3> kAllStyles{
  StyleLabel::Aggressive, StyleLabel::Normal, StyleLabel::Conservative};

enum class ScenarioType {
  LaneFollowing,
  ProtectedIntersection,
  UnprotectedIntersection,
  LaneChange,
  Crosswalk,
  SideToMainEgoMerging,
  SideToMainEgoMain,
  SpecialInteriorRoad,
  RoundaboutEntrance,
  RoundaboutInterior,
  CountrysideRoad,
  Carpark,
};

constexpr std::array<ScenarioType, 12> kAllScenarios{
  ScenarioType::LaneFollowing,        ScenarioType::ProtectedIntersection,
  ScenarioType::UnprotectedIntersection, ScenarioType::LaneChange,
  ScenarioType::Crosswalk,            ScenarioType::SideToMainEgoMerging,
  ScenarioType::SideToMainEgoMain,    ScenarioType::SpecialInteriorRoad,
  ScenarioType::RoundaboutEntrance,   ScenarioType::RoundaboutInterior,
  ScenarioType::CountrysideRoad,      ScenarioType::Carpark,
};

std::string_view to_string(ScenarioType scenario);
std::optional<ScenarioType> parse_scenario(std::string_view text);

enum class LeadPresence { None, Far, Close };
std::string_view to_string(LeadPresence lead);
std::optional<LeadPresence> parse_lead(std::string_view text);

enum class RoadShape { Straight, Curve };
std::string_view to_string(RoadShape shape);
std::optional<RoadShape> parse_road_shape(std::string_view text);

enum class AgentKind { Vehicle, Pedestrian };
std::string_view to_string(AgentKind kind);
std::optional<AgentKind> parse_agent_kind(std::string_view text);

/// One ego state. Velocities and accelerations are body frame
/// (x longitudinal, y lateral).
struct TrajectorySample
{
  double t{0.0};
  double x{0.0};
  double y{0.0};
  double yaw{0.0};
  double vx{0.0};
  double vy{0.0};
  double ax{0.0};
  double ay{0.0};

  double speed() const;
  double accel_magnitude() const;

  bool operator==(const TrajectorySample &) const = default;
};

struct Trajectory
{
  std::string clip_id;
  std::vector<TrajectorySample> samples;
  double dt_nominal{0.1};

  double start_time() const { return samples.front().t; }
  double end_time() const { return samples.back().t; }
  double duration() const { return samples.empty() ? 0.0 : end_time() - start_time(); }

  bool operator==(const Trajectory &) const = default;
};

struct AgentState
{
  double t{0.0};
  double x{0.0};
  double y{0.0};
  double yaw{0.0};
  double speed{0.0};

  bool operator==(const AgentState &) const = default;
};

struct AgentTrack
{
  std::string agent_id;
  AgentKind kind{AgentKind::Vehicle};
  double half_length{2.0};
  double half_width{0.9};
  std::vector<AgentState> states;

  /// State whose timestamp is nearest to `t`, if within `tolerance`.
  std::optional<AgentState> state_at(double t, double tolerance) const;

  bool operator==(const AgentTrack &) const = default;
};

/// Semantic flags of a clip. Flags a scenario's rules do not consult are
/// carried but ignored.
struct SceneContext
{
  ScenarioType scenario{ScenarioType::LaneFollowing};
  LeadPresence lead{LeadPresence::None};
  RoadShape road_shape{RoadShape::Straight};
  bool pedestrians{false};
  bool has_merging{false};
  bool merge_risk{false};
  bool main_road_vehicles{false};
  bool has_left_rear{false};
  bool has_right_rear{false};
  bool signal_protected{false};

  bool operator==(const SceneContext &) const = default;
};

struct Point2
{
  double x{0.0};
  double y{0.0};

  bool operator==(const Point2 &) const = default;
};

using Polygon = std::vector<Point2>;

/// Everything one corpus document carries.
struct Clip
{
  Trajectory ego;
  std::vector<AgentTrack> agents;
  SceneContext context;
  std::optional<Polygon> corridor;

  const std::string & id() const { return ego.clip_id; }

  bool operator==(const Clip &) const = default;
};

}  // namespace stylebench

#endif  // STYLEBENCH__TYPES_HPP_
