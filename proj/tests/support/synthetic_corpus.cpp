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

#include "synthetic_corpus.hpp"

#include "stylebench/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace stylebench::synthetic
{
namespace
{
constexpr double kTwoPi = 2.0 * geometry::kPi;
constexpr double kMinSpeed = 0.3;

class Draw
{
public:
  explicit Draw(std::mt19937_64 & rng) : rng_(rng) {}
  double u(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  double sign() { return coin() ? 1.0 : -1.0; }

private:
  std::mt19937_64 & rng_;
};

// Oscillation settings shared by most constructions.
void smooth(MotionSpec & s, Draw & d)
{
  s.osc_amp = d.u(0.0, 0.2);
  s.osc_freq = d.u(0.6, 1.0);
}

void moderate(MotionSpec & s, Draw & d, double amp_lo = 0.4, double amp_hi = 1.0)
{
  s.osc_amp = d.u(amp_lo, amp_hi);
  s.osc_freq = d.u(0.6, 1.0);
}

void harsh(MotionSpec & s, Draw & d)
{
  s.osc_amp = d.u(2.9, 3.8);
  s.osc_freq = d.u(0.6, 1.0);
}

void flat_trend(MotionSpec & s, Draw & d, double limit = 0.08) { s.slope = d.u(-limit, limit); }

void lane_following(MotionSpec & s, StyleLabel style, Draw & d)
{
  const int lead = d.pick(3);
  s.context.road_shape = d.coin() ? RoadShape::Curve : RoadShape::Straight;
  if (s.context.road_shape == RoadShape::Curve) s.delta_psi = d.sign() * d.u(0.2, 0.4);
  flat_trend(s, d, 0.3);
  switch (style) {
    case StyleLabel::Aggressive: {
      const int mode = d.pick(lead == 0 ? 2 : 3);
      s.v_center = d.u(8.0, 11.0);
      moderate(s, d);
      if (mode == 0) {
        s.v_center = d.u(17.5, 22.0);
      } else if (mode == 1) {
        harsh(s, d);
      } else {
        s.headway = d.u(0.4, 0.8);
      }
      if (lead != 0) {
        if (!s.headway) s.headway = d.u(0.9, 2.2);
        s.context.lead = *s.headway < 1.5 ? LeadPresence::Close : LeadPresence::Far;
      }
      break;
    }
    case StyleLabel::Normal:
      s.v_center = d.u(7.5, 11.0);
      moderate(s, d, 0.4, 0.9);
      if (lead != 0) {
        s.headway = d.u(1.3, 2.2);
        s.context.lead = *s.headway < 1.6 ? LeadPresence::Close : LeadPresence::Far;
      }
      break;
    case StyleLabel::Conservative:
      s.v_center = d.u(2.5, 5.0);
      smooth(s, d);
      flat_trend(s, d, 0.1);
      if (lead != 0) {
        s.headway = d.u(3.0, 4.5);
        s.context.lead = LeadPresence::Far;
      }
      break;
  }
}

void intersection(MotionSpec & s, StyleLabel style, Draw & d)
{
  const bool unprotected = s.context.scenario == ScenarioType::UnprotectedIntersection;
  s.context.signal_protected = !unprotected;
  s.context.pedestrians = d.coin(0.3);
  s.pedestrian = s.context.pedestrians;
  const int maneuver = d.pick(3);  // 0 left, 1 right, 2 straight
  s.delta_psi = maneuver == 0 ? d.u(0.8, 1.2) : maneuver == 1 ? -d.u(0.8, 1.2) : d.u(-0.15, 0.15);
  const bool lead = maneuver == 2 && d.coin();
  flat_trend(s, d, 0.2);
  switch (style) {
    case StyleLabel::Aggressive: {
      const int mode = d.pick(lead ? 3 : 2);
      s.v_center = maneuver == 2 ? d.u(5.0, 7.0) : d.u(3.6, 4.2);
      moderate(s, d);
      if (mode == 0) {
        s.v_center = maneuver == 0 ? d.u(9.5, 12.0) : maneuver == 1 ? d.u(8.5, 11.0) : d.u(13.5, 16.0);
      } else if (mode == 1) {
        s.osc_amp = d.u(3.3, 4.2);
      } else {
        s.headway = d.u(0.4, 0.8);
      }
      if (lead && !s.headway) s.headway = d.u(1.3, 2.2);
      break;
    }
    case StyleLabel::Normal:
      s.v_center = maneuver == 2 ? d.u(5.0, 7.0) : maneuver == 0 ? d.u(3.6, 4.6) : d.u(3.6, 4.2);
      moderate(s, d, 0.4, 0.8);
      if (lead) s.headway = d.u(1.3, 2.2);
      break;
    case StyleLabel::Conservative:
      s.v_center = d.u(1.5, 2.6);
      smooth(s, d);
      if (lead) s.headway = d.u(3.0, 4.5);
      break;
  }
  if (s.headway) s.context.lead = *s.headway < 1.5 ? LeadPresence::Close : LeadPresence::Far;
}

void lane_change(MotionSpec & s, StyleLabel style, Draw & d)
{
  const double dir = d.sign();
  s.rear_vehicle = d.coin();
  s.context.has_left_rear = s.rear_vehicle && dir > 0;
  s.context.has_right_rear = s.rear_vehicle && dir < 0;
  flat_trend(s, d, 0.2);
  switch (style) {
    case StyleLabel::Aggressive: {
      s.v_center = s.rear_vehicle ? d.u(9.0, 13.0) : d.u(16.0, 20.0);
      moderate(s, d);
      s.delta_psi = dir * d.u(0.32, 0.42);
      if (d.coin()) {
        s.delta_psi = dir * d.u(0.5, 0.7);
      } else {
        harsh(s, d);
      }
      break;
    }
    case StyleLabel::Normal:
      s.v_center = d.u(9.0, 13.0);
      moderate(s, d, 0.4, 0.9);
      s.delta_psi = dir * d.u(0.32, 0.42);
      break;
    case StyleLabel::Conservative:
      s.v_center = d.u(4.0, 7.0);
      smooth(s, d);
      s.delta_psi = dir * d.u(0.26, 0.29);
      break;
  }
}

void crosswalk(MotionSpec & s, StyleLabel style, Draw & d)
{
  s.context.pedestrians = d.coin(0.7);
  s.pedestrian = s.context.pedestrians;
  flat_trend(s, d);
  switch (style) {
    case StyleLabel::Aggressive: {
      const int mode = d.pick(3);
      s.v_center = d.u(4.5, 6.0);
      moderate(s, d, 0.3, 0.8);
      if (mode == 0) {
        s.v_center = d.u(9.0, 12.0);
      } else if (mode == 1) {
        harsh(s, d);
      } else {
        s.slope = d.u(0.6, 1.0);
      }
      break;
    }
    case StyleLabel::Normal:
      s.v_center = d.u(3.0, 6.5);
      moderate(s, d, 0.3, 0.8);
      if (d.coin(0.3)) s.slope = -d.u(0.2, 0.5);
      break;
    case StyleLabel::Conservative:
      s.v_center = d.u(0.8, 1.7);
      s.slope = d.u(-0.15, 0.25);
      moderate(s, d, 0.0, 0.5);
      break;
  }
}

void side_to_main_merging(MotionSpec & s, StyleLabel style, Draw & d)
{
  s.context.has_merging = d.coin();
  s.context.main_road_vehicles = s.context.has_merging;
  flat_trend(s, d);
  switch (style) {
    case StyleLabel::Aggressive: {
      const int mode = d.pick(s.context.has_merging ? 3 : 2);
      s.v_center = d.u(5.0, 7.0);
      moderate(s, d);
      if (mode == 0) {
        s.v_center = d.u(10.5, 14.0);
      } else if (mode == 1) {
        harsh(s, d);
      } else {
        s.slope = d.u(0.5, 0.9);
      }
      break;
    }
    case StyleLabel::Normal:
      s.v_center = d.u(4.0, 7.5);
      moderate(s, d);
      break;
    case StyleLabel::Conservative:
      s.v_center = d.u(1.0, 2.4);
      moderate(s, d, 0.0, 0.6);
      break;
  }
}

void side_to_main_main(MotionSpec & s, StyleLabel style, Draw & d)
{
  s.context.main_road_vehicles = true;
  flat_trend(s, d, 0.2);
  switch (style) {
    case StyleLabel::Aggressive:
      s.v_center = d.u(15.5, 19.0);
      s.osc_amp = d.u(2.6, 3.5);
      s.osc_freq = d.u(0.6, 1.0);
      break;
    case StyleLabel::Normal:
      s.v_center = d.u(8.0, 13.0);
      moderate(s, d);
      if (d.coin(0.3)) s.v_center = d.u(15.0, 18.0);
      break;
    case StyleLabel::Conservative:
      s.v_center = d.u(2.0, 4.0);
      smooth(s, d);
      break;
  }
}

void special_interior(MotionSpec & s, StyleLabel style, Draw & d)
{
  const int branch = d.pick(3);  // 0 merge risk, 1 interaction, 2 isolated
  s.context.merge_risk = branch == 0;
  const bool with_lead = branch == 1 && d.coin();
  if (branch == 1 && !with_lead) {
    s.context.pedestrians = true;
    s.pedestrian = true;
  }
  flat_trend(s, d);
  switch (style) {
    case StyleLabel::Aggressive: {
      const int mode = d.pick(with_lead ? 3 : 2);
      s.v_center = d.u(3.8, 5.5);
      moderate(s, d);
      if (mode == 0) {
        s.v_center = d.u(8.0, 10.0);
      } else if (mode == 1) {
        harsh(s, d);
      } else {
        s.headway = d.u(0.4, 0.8);
      }
      if (with_lead && !s.headway) s.headway = d.u(1.3, 2.2);
      break;
    }
    case StyleLabel::Normal:
      s.v_center = d.u(3.8, 6.0);
      moderate(s, d);
      if (with_lead) s.headway = d.u(1.3, 2.2);
      break;
    case StyleLabel::Conservative:
      s.v_center = d.u(1.2, 2.5);
      smooth(s, d);
      if (s.context.merge_risk && d.coin()) s.slope = -d.u(0.2, 0.3);
      if (with_lead) s.headway = d.u(3.0, 4.5);
      break;
  }
  if (s.headway) s.context.lead = *s.headway < 1.5 ? LeadPresence::Close : LeadPresence::Far;
}

void roundabout_entrance(MotionSpec & s, StyleLabel style, Draw & d)
{
  s.context.merge_risk = d.coin();
  s.delta_psi = d.u(0.2, 0.4);
  flat_trend(s, d);
  switch (style) {
    case StyleLabel::Aggressive: {
      s.v_center = d.u(4.0, 6.0);
      moderate(s, d);
      const int mode = d.pick(s.context.merge_risk ? 3 : 2);
      if (mode == 0) {
        if (s.context.merge_risk) {
          harsh(s, d);
        } else {
          s.v_center = d.u(9.0, 12.0);
        }
      } else if (mode == 1) {
        harsh(s, d);
      } else {
        s.slope = d.u(0.6, 0.9);
        s.osc_amp = d.u(1.6, 1.9);
      }
      break;
    }
    case StyleLabel::Normal:
      s.v_center = d.u(3.8, 6.0);
      moderate(s, d, 0.4, 0.9);
      break;
    case StyleLabel::Conservative:
      if (s.context.merge_risk && d.coin()) {
        s.v_center = d.u(3.5, 5.0);
        s.slope = -d.u(0.4, 0.7);
        moderate(s, d, 0.2, 0.6);
      } else {
        s.v_center = d.u(1.2, 2.5);
        smooth(s, d);
      }
      break;
  }
}

void roundabout_interior(MotionSpec & s, StyleLabel style, Draw & d)
{
  flat_trend(s, d);
  const double dir = d.sign();
  if (style == StyleLabel::Aggressive) {
    s.v_center = d.u(7.0, 9.0);
    if (d.coin()) {
      s.delta_psi = dir * d.u(2.9, 3.5) / s.v_center * s.duration;
      moderate(s, d, 0.2, 0.6);
    } else {
      s.delta_psi = dir * d.u(0.4, 0.9) / s.v_center * s.duration;
      s.osc_amp = d.u(3.2, 4.0);
      s.osc_freq = d.u(0.6, 1.0);
    }
    return;
  }
  s.v_center = d.u(5.0, 7.0);
  s.delta_psi = dir * d.u(1.0, 1.9) / s.v_center * s.duration;
  moderate(s, d, 0.3, 0.8);
}

void countryside(MotionSpec & s, StyleLabel style, Draw & d)
{
  const bool curve = d.coin();
  s.context.road_shape = curve ? RoadShape::Curve : RoadShape::Straight;
  if (curve) s.delta_psi = d.sign() * d.u(0.2, 0.4);
  flat_trend(s, d, 0.2);
  switch (style) {
    case StyleLabel::Aggressive:
      s.v_center = d.u(12.0, 15.0);
      moderate(s, d);
      if (d.coin()) {
        s.v_center = curve ? d.u(19.0, 23.0) : d.u(22.0, 27.0);
      } else {
        harsh(s, d);
      }
      break;
    case StyleLabel::Normal:
      s.v_center = curve ? d.u(12.0, 15.0) : d.u(12.0, 17.0);
      moderate(s, d, 0.4, 0.8);
      break;
    case StyleLabel::Conservative:
      s.v_center = d.u(5.0, 9.0);
      smooth(s, d);
      break;
  }
}

void carpark(MotionSpec & s, StyleLabel style, Draw & d)
{
  s.v_center = style == StyleLabel::Aggressive ? d.u(4.0, 7.0) : d.u(1.0, 4.0);
  s.delta_psi = d.u(-1.0, 1.0);
  if (style == StyleLabel::Aggressive) {
    harsh(s, d);
  } else {
    moderate(s, d, 0.1, 0.8);
  }
}

AgentTrack make_agent(
  const std::string & id, AgentKind kind, const Trajectory & ego,
  const std::function<AgentState(const TrajectorySample &)> & place)
{
  AgentTrack agent;
  agent.agent_id = id;
  agent.kind = kind;
  if (kind == AgentKind::Pedestrian) {
    agent.half_length = 0.3;
    agent.half_width = 0.3;
  }
  for (const auto & s : ego.samples) agent.states.push_back(place(s));
  return agent;
}
}  // namespace

double speed_at(const MotionSpec & s, double t)
{
  const double c = t - 0.5 * s.duration;
  const double quad = s.quad * (c * c - s.duration * s.duration / 12.0);
  const double osc = s.osc_amp > 0.0
                       ? s.osc_amp / (kTwoPi * s.osc_freq) * std::sin(kTwoPi * s.osc_freq * t + s.osc_phase)
                       : 0.0;
  return s.v_center + s.slope * c + quad + osc;
}

namespace
{
double accel_at(const MotionSpec & s, double t)
{
  const double c = t - 0.5 * s.duration;
  return s.slope + 2.0 * s.quad * c + s.osc_amp * std::cos(kTwoPi * s.osc_freq * t + s.osc_phase);
}
}  // namespace

Clip build_clip(const MotionSpec & spec_in, std::mt19937_64 * rng)
{
  MotionSpec spec = spec_in;
  const auto n = static_cast<std::size_t>(std::llround(spec.duration / spec.dt)) + 1;
  // lift the profile if it would dip below walking pace
  double v_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) v_min = std::min(v_min, speed_at(spec, spec.dt * i));
  if (v_min < kMinSpeed) spec.v_center += kMinSpeed - v_min;

  const double omega = spec.delta_psi / spec.duration;
  std::normal_distribution<double> noise(0.0, spec.accel_noise > 0.0 ? spec.accel_noise : 1.0);

  Clip clip;
  clip.context = spec.context;
  clip.ego.clip_id = spec.clip_id;
  clip.ego.dt_nominal = spec.dt;
  double x = spec.x0;
  double y = spec.y0;
  constexpr int kSubsteps = 20;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = spec.dt * static_cast<double>(i);
    if (i > 0) {
      const double h = spec.dt / kSubsteps;
      for (int k = 0; k < kSubsteps; ++k) {
        const double tm = t - spec.dt + (k + 0.5) * h;
        const double yaw = spec.yaw0 + omega * tm;
        const double v = speed_at(spec, tm);
        x += v * std::cos(yaw) * h;
        y += v * std::sin(yaw) * h;
      }
    }
    TrajectorySample s;
    s.t = t;
    s.x = x;
    s.y = y;
    s.yaw = geometry::wrap_angle(spec.yaw0 + omega * t);
    s.vx = speed_at(spec, t);
    s.vy = 0.0;
    s.ax = accel_at(spec, t);
    s.ay = s.vx * omega;
    if (rng && spec.accel_noise > 0.0) {
      s.ax += noise(*rng);
      s.ay += noise(*rng);
    }
    clip.ego.samples.push_back(s);
  }

  if (spec.headway) {
    const double h = *spec.headway;
    clip.agents.push_back(make_agent("lead", AgentKind::Vehicle, clip.ego, [&](const TrajectorySample & s) {
      const double gap = h * s.vx;
      return AgentState{s.t, s.x + gap * std::cos(s.yaw), s.y + gap * std::sin(s.yaw), s.yaw, s.vx};
    }));
  }
  if (spec.rear_vehicle) {
    const double side = spec.delta_psi >= 0.0 ? 1.0 : -1.0;
    clip.agents.push_back(make_agent("rear", AgentKind::Vehicle, clip.ego, [&](const TrajectorySample & s) {
      const double c = std::cos(s.yaw);
      const double sn = std::sin(s.yaw);
      const double back = -14.0;
      const double lateral = 3.5 * side;
      return AgentState{s.t, s.x + back * c - lateral * sn, s.y + back * sn + lateral * c, s.yaw, s.vx};
    }));
  }
  if (spec.pedestrian) {
    const auto & first = clip.ego.samples.front();
    const double px = first.x + 10.0 * std::cos(first.yaw) - 9.0 * std::sin(first.yaw);
    const double py = first.y + 10.0 * std::sin(first.yaw) + 9.0 * std::cos(first.yaw);
    clip.agents.push_back(make_agent("ped", AgentKind::Pedestrian, clip.ego, [&](const TrajectorySample & s) {
      return AgentState{s.t, px, py, 0.0, 0.0};
    }));
  }
  return clip;
}

LabeledClip generate(ScenarioType scenario, StyleLabel style, std::mt19937_64 & rng, const std::string & clip_id)
{
  Draw d(rng);
  if ((scenario == ScenarioType::RoundaboutInterior || scenario == ScenarioType::Carpark) &&
      style == StyleLabel::Conservative) {
    style = StyleLabel::Normal;
  }
  MotionSpec s;
  s.clip_id = clip_id;
  s.context.scenario = scenario;
  s.x0 = d.u(-500.0, 500.0);
  s.y0 = d.u(-500.0, 500.0);
  s.yaw0 = d.u(-geometry::kPi, geometry::kPi);
  s.osc_phase = d.u(0.0, kTwoPi);
  s.accel_noise = 0.03;
  switch (scenario) {
    case ScenarioType::LaneFollowing:
      lane_following(s, style, d);
      break;
    case ScenarioType::ProtectedIntersection:
    case ScenarioType::UnprotectedIntersection:
      intersection(s, style, d);
      break;
    case ScenarioType::LaneChange:
      lane_change(s, style, d);
      break;
    case ScenarioType::Crosswalk:
      crosswalk(s, style, d);
      break;
    case ScenarioType::SideToMainEgoMerging:
      side_to_main_merging(s, style, d);
      break;
    case ScenarioType::SideToMainEgoMain:
      side_to_main_main(s, style, d);
      break;
    case ScenarioType::SpecialInteriorRoad:
      special_interior(s, style, d);
      break;
    case ScenarioType::RoundaboutEntrance:
      roundabout_entrance(s, style, d);
      break;
    case ScenarioType::RoundaboutInterior:
      roundabout_interior(s, style, d);
      break;
    case ScenarioType::CountrysideRoad:
      countryside(s, style, d);
      break;
    case ScenarioType::Carpark:
      carpark(s, style, d);
      break;
  }
  return {build_clip(s, &rng), scenario == ScenarioType::Carpark ? StyleLabel::Normal : style};
}

std::vector<LabeledClip> generate_mix(
  ScenarioType scenario, std::size_t count, double aggressive_share, double conservative_share,
  std::mt19937_64 & rng, const std::string & prefix)
{
  std::vector<LabeledClip> out;
  out.reserve(count);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < count; ++i) {
    const double r = u(rng);
    const StyleLabel style = r < aggressive_share                          ? StyleLabel::Aggressive
                             : r < aggressive_share + conservative_share ? StyleLabel::Conservative
                                                                          : StyleLabel::Normal;
    char id[64];
    std::snprintf(id, sizeof(id), "%s-%05zu", prefix.c_str(), i);
    out.push_back(generate(scenario, style, rng, id));
  }
  return out;
}

std::vector<LabeledClip> generate_corpus(std::size_t count, std::uint64_t seed, const std::string & prefix)
{
  std::mt19937_64 rng(seed);
  std::vector<LabeledClip> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto scenario = kAllScenarios[i % kAllScenarios.size()];
    const auto style = kAllStyles[std::uniform_int_distribution<int>(0, 2)(rng)];
    char id[64];
    std::snprintf(id, sizeof(id), "%s-%05zu", prefix.c_str(), i);
    out.push_back(generate(scenario, style, rng, id));
  }
  return out;
}

Trajectory scaled_rollout(const Trajectory & human, double speed_factor, double lateral_offset)
{
  Trajectory out = human;
  const auto & first = human.samples.front();
  const double ox = -std::sin(first.yaw) * lateral_offset;
  const double oy = std::cos(first.yaw) * lateral_offset;
  for (auto & s : out.samples) {
    s.x = first.x + speed_factor * (s.x - first.x) + ox;
    s.y = first.y + speed_factor * (s.y - first.y) + oy;
    s.vx *= speed_factor;
    s.vy *= speed_factor;
    s.ax *= speed_factor;
    s.ay *= speed_factor;
  }
  return out;
}

void add_stationary_obstacle(Clip & clip, double distance, const std::string & agent_id)
{
  const auto & first = clip.ego.samples.front();
  const double px = first.x + distance * std::cos(first.yaw);
  const double py = first.y + distance * std::sin(first.yaw);
  clip.agents.push_back(make_agent(agent_id, AgentKind::Vehicle, clip.ego, [&](const TrajectorySample & s) {
    return AgentState{s.t, px, py, first.yaw, 0.0};
  }));
}

Polygon corridor_around(const Trajectory & traj, double margin)
{
  double x_lo = std::numeric_limits<double>::infinity();
  double y_lo = x_lo;
  double x_hi = -x_lo;
  double y_hi = -x_lo;
  for (const auto & s : traj.samples) {
    x_lo = std::min(x_lo, s.x);
    x_hi = std::max(x_hi, s.x);
    y_lo = std::min(y_lo, s.y);
    y_hi = std::max(y_hi, s.y);
  }
  return {
    {x_lo - margin, y_lo - margin},
    {x_hi + margin, y_lo - margin},
    {x_hi + margin, y_hi + margin},
    {x_lo - margin, y_hi + margin}};
}

}  // namespace stylebench::synthetic
