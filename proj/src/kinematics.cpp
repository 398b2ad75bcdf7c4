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

#include "stylebench/kinematics.hpp"

#include "stylebench/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace stylebench::kinematics
{
namespace
{
constexpr std::array<std::pair<TrendClass, std::string_view>, 5> kTrendNames{{
  {TrendClass::Accelerating, "accelerating"},
  {TrendClass::Decelerating, "decelerating"},
  {TrendClass::AccelThenDecel, "accel_then_decel"},
  {TrendClass::DecelThenAccel, "decel_then_accel"},
  {TrendClass::QuasiConstant, "quasi_constant"},
}};

double mean_time(std::span<const SpeedPoint> points)
{
  double sum = 0.0;
  for (const auto & p : points) sum += p.t;
  return sum / static_cast<double>(points.size());
}

double population_std(const std::vector<double> & values)
{
  if (values.empty()) return 0.0;
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / n);
}

// Gaussian elimination with partial pivoting on a 3x3 system.
bool solve3(std::array<std::array<double, 4>, 3> m, std::array<double, 3> & x)
{
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    }
    if (std::abs(m[pivot][col]) < 1e-300) return false;
    std::swap(m[col], m[pivot]);
    for (int r = col + 1; r < 3; ++r) {
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
    }
  }
  for (int r = 2; r >= 0; --r) {
    double acc = m[r][3];
    for (int c = r + 1; c < 3; ++c) acc -= m[r][c] * x[c];
    x[r] = acc / m[r][r];
  }
  return true;
}
}  // namespace

std::string_view to_string(TrendClass trend)
{
  for (const auto & [value, name] : kTrendNames) {
    if (value == trend) return name;
  }
  return "quasi_constant";
}

std::optional<TrendClass> parse_trend(std::string_view text)
{
  for (const auto & [value, name] : kTrendNames) {
    if (name == text) return value;
  }
  return std::nullopt;
}

LinearFit fit_linear(std::span<const SpeedPoint> points)
{
  LinearFit fit;
  if (points.empty()) return fit;
  const double t_mean = mean_time(points);
  double v_mean = 0.0;
  for (const auto & p : points) v_mean += p.v;
  v_mean /= static_cast<double>(points.size());

  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto & p : points) {
    sxx += (p.t - t_mean) * (p.t - t_mean);
    sxy += (p.t - t_mean) * (p.v - v_mean);
  }
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = v_mean - fit.slope * t_mean;
  for (const auto & p : points) {
    const double r = p.v - (fit.intercept + fit.slope * p.t);
    fit.rss += r * r;
  }
  return fit;
}

QuadraticFit fit_quadratic(std::span<const SpeedPoint> points)
{
  QuadraticFit fit;
  if (points.size() < 3) return fit;
  // centred time keeps the normal equations well conditioned
  const double t_mean = mean_time(points);
  std::array<double, 5> s{};
  std::array<double, 3> rhs{};
  for (const auto & p : points) {
    const double tau = p.t - t_mean;
    double power = 1.0;
    for (int k = 0; k < 5; ++k) {
      s[k] += power;
      if (k < 3) rhs[k] += power * p.v;
      power *= tau;
    }
  }
  std::array<std::array<double, 4>, 3> m{{
    {s[0], s[1], s[2], rhs[0]},
    {s[1], s[2], s[3], rhs[1]},
    {s[2], s[3], s[4], rhs[2]},
  }};
  std::array<double, 3> b{};
  if (!solve3(m, b)) return fit;

  fit.c2 = b[2];
  fit.c1 = b[1] - 2.0 * b[2] * t_mean;
  fit.c0 = b[0] - b[1] * t_mean + b[2] * t_mean * t_mean;
  for (const auto & p : points) {
    const double tau = p.t - t_mean;
    const double r = p.v - (b[0] + b[1] * tau + b[2] * tau * tau);
    fit.rss += r * r;
  }
  fit.ok = true;
  return fit;
}

TrendClass fit_velocity_trend(std::span<const SpeedPoint> speeds, const ThresholdSet & thresholds)
{
  if (speeds.size() < 2) throw InvalidInput("trend fitting needs at least 2 samples");
  std::vector<double> values;
  values.reserve(speeds.size());
  double t_first = speeds.front().t;
  double t_last = speeds.front().t;
  for (const auto & p : speeds) {
    if (!std::isfinite(p.v) || p.v < 0.0 || !std::isfinite(p.t)) {
      throw InvalidInput("speeds must be finite and non-negative");
    }
    values.push_back(p.v);
    t_first = std::min(t_first, p.t);
    t_last = std::max(t_last, p.t);
  }

  const LinearFit line = fit_linear(speeds);
  const double v_std = population_std(values);
  if (v_std < thresholds.v_std_max && std::abs(line.slope) < thresholds.slope_min) {
    return TrendClass::QuasiConstant;
  }

  if (speeds.size() >= 3) {
    const QuadraticFit quad = fit_quadratic(speeds);
    const double sst = v_std * v_std * static_cast<double>(values.size());
    if (quad.ok && quad.c2 != 0.0 && line.rss > 1e-12 * sst) {
      const double vertex = -quad.c1 / (2.0 * quad.c2);
      const double margin = 0.1 * (t_last - t_first);
      const bool interior = vertex > t_first + margin && vertex < t_last - margin;
      if (interior && quad.rss <= 0.8 * line.rss) {
        return quad.c2 < 0.0 ? TrendClass::AccelThenDecel : TrendClass::DecelThenAccel;
      }
    }
  }

  if (line.slope >= thresholds.slope_min) return TrendClass::Accelerating;
  if (line.slope <= -thresholds.slope_min) return TrendClass::Decelerating;
  return TrendClass::QuasiConstant;
}

std::vector<SpeedPoint> speed_profile(const Trajectory & traj)
{
  std::vector<SpeedPoint> out;
  out.reserve(traj.samples.size());
  for (const auto & s : traj.samples) out.push_back({s.t, s.speed()});
  return out;
}

KinematicFeatures compute_motion_stats(const Trajectory & traj)
{
  KinematicFeatures f;
  if (traj.samples.empty()) return f;
  std::vector<double> speeds;
  std::vector<double> accels;
  speeds.reserve(traj.samples.size());
  accels.reserve(traj.samples.size());
  for (const auto & s : traj.samples) {
    speeds.push_back(s.speed());
    accels.push_back(s.accel_magnitude());
    f.vy_max = std::max(f.vy_max, std::abs(s.vy));
    f.ay_max = std::max(f.ay_max, std::abs(s.ay));
  }
  const double n = static_cast<double>(speeds.size());
  f.v_avg = std::accumulate(speeds.begin(), speeds.end(), 0.0) / n;
  f.v_std = population_std(speeds);
  f.a_max = *std::max_element(accels.begin(), accels.end());
  f.sigma_a = population_std(accels);
  f.delta_psi = geometry::wrap_angle(traj.samples.back().yaw - traj.samples.front().yaw);
  return f;
}

HeadwayRatios headway_ratios(
  const Trajectory & traj, const AgentTrack & lead, const ThresholdSet & thresholds)
{
  std::size_t qualifying = 0;
  std::size_t unsafe = 0;
  std::size_t safe = 0;
  const double tolerance = 0.5 * traj.dt_nominal;
  for (const auto & s : traj.samples) {
    const auto state = lead.state_at(s.t, tolerance);
    if (!state) continue;
    const double heading_x = std::cos(s.yaw);
    const double heading_y = std::sin(s.yaw);
    const double gap = (state->x - s.x) * heading_x + (state->y - s.y) * heading_y;
    const double v = s.speed();
    if (!(gap > 0.0) || !(v > kHeadwayMinSpeed)) continue;
    ++qualifying;
    const double headway = gap / v;
    if (headway < thresholds.unsafe_headway_s) ++unsafe;
    if (headway > thresholds.safe_headway_s) ++safe;
  }
  if (qualifying == 0) return {};
  const double q = static_cast<double>(qualifying);
  return {static_cast<double>(unsafe) / q, static_cast<double>(safe) / q};
}

double compute_min_ttc(const Trajectory & traj, const std::vector<AgentTrack> & agents)
{
  double best = std::numeric_limits<double>::infinity();
  const double tolerance = 0.5 * traj.dt_nominal;
  for (const auto & s : traj.samples) {
    const double c = std::cos(s.yaw);
    const double sn = std::sin(s.yaw);
    const double ego_vx = c * s.vx - sn * s.vy;
    const double ego_vy = sn * s.vx + c * s.vy;
    for (const auto & agent : agents) {
      const auto state = agent.state_at(s.t, tolerance);
      if (!state) continue;
      const Point2 local = geometry::to_local_frame({state->x, state->y}, {s.x, s.y}, s.yaw);
      if (!(local.x > 0.0) || std::abs(local.y) >= kForwardConeHalfWidth) continue;
      const double dx = state->x - s.x;
      const double dy = state->y - s.y;
      const double dist = std::hypot(dx, dy);
      const double ux = dx / dist;
      const double uy = dy / dist;
      const double agent_vx = state->speed * std::cos(state->yaw);
      const double agent_vy = state->speed * std::sin(state->yaw);
      const double closing = (ego_vx - agent_vx) * ux + (ego_vy - agent_vy) * uy;
      if (closing > 0.0) best = std::min(best, dist / closing);
    }
  }
  return best;
}

Maneuver detect_maneuver(double delta_psi, double threshold)
{
  if (delta_psi > threshold) return Maneuver::Left;
  if (delta_psi < -threshold) return Maneuver::Right;
  return Maneuver::Straight;
}

Maneuver detect_maneuver(double delta_psi, const ThresholdSet & thresholds, ScenarioType scenario)
{
  const double threshold =
    scenario == ScenarioType::LaneChange ? thresholds.yaw_lane_change : thresholds.yaw_turn_min;
  return detect_maneuver(delta_psi, threshold);
}

std::optional<std::size_t> select_lead(const Trajectory & traj, const std::vector<AgentTrack> & agents)
{
  std::optional<std::size_t> best;
  std::size_t best_frames = 0;
  double best_gap = 0.0;
  const double tolerance = 0.5 * traj.dt_nominal;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto & agent = agents[i];
    if (agent.kind != AgentKind::Vehicle) continue;
    std::size_t frames = 0;
    double gap_sum = 0.0;
    for (const auto & s : traj.samples) {
      const auto state = agent.state_at(s.t, tolerance);
      if (!state) continue;
      const Point2 local = geometry::to_local_frame({state->x, state->y}, {s.x, s.y}, s.yaw);
      if (local.x > 0.0 && std::abs(local.y) < kForwardConeHalfWidth) {
        ++frames;
        gap_sum += local.x;
      }
    }
    if (frames == 0) continue;
    const double mean_gap = gap_sum / static_cast<double>(frames);
    const bool better = !best || frames > best_frames ||
                        (frames == best_frames && mean_gap < best_gap) ||
                        (frames == best_frames && mean_gap == best_gap &&
                         agent.agent_id < agents[*best].agent_id);
    if (better) {
      best = i;
      best_frames = frames;
      best_gap = mean_gap;
    }
  }
  return best;
}

KinematicFeatures extract_features(const Clip & clip, const ThresholdSet & thresholds)
{
  KinematicFeatures f = compute_motion_stats(clip.ego);
  const auto profile = speed_profile(clip.ego);
  f.trend = fit_velocity_trend(profile, thresholds);
  if (clip.context.lead != LeadPresence::None) {
    if (const auto lead = select_lead(clip.ego, clip.agents)) {
      const auto ratios = headway_ratios(clip.ego, clip.agents[*lead], thresholds);
      f.unsafe_ratio = ratios.unsafe_ratio;
      f.safe_ratio = ratios.safe_ratio;
    }
  }
  f.min_ttc = compute_min_ttc(clip.ego, clip.agents);
  return f;
}

}  // namespace stylebench::kinematics
