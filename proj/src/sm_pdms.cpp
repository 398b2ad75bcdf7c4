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

#include "stylebench/sm_pdms.hpp"

#include "stylebench/geometry.hpp"
#include "stylebench/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

namespace stylebench::metric
{
namespace
{
using nlohmann::json;

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

// Forward difference at the first sample, backward at the last, central
// elsewhere. `diff(i, j)` returns f[j] - f[i].
template <typename Diff>
std::vector<double> derivative(const std::vector<TrajectorySample> & s, Diff diff)
{
  const std::size_t n = s.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
    const double dt = s[hi].t - s[lo].t;
    out[i] = dt > 0.0 ? diff(lo, hi) / dt : 0.0;
  }
  return out;
}

std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string csv_field(const std::string & text)
{
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json finite_or_null(double v)
{
  if (std::isfinite(v)) return v;
  return nullptr;
}

void read_number(
  const json & obj, const char * key, double & field, const std::string & where)
{
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_number()) throw ParseError(where + "." + key + " must be a number");
  field = it->get<double>();
}

void warn_unknown(
  const json & obj, const std::set<std::string> & known, const std::string & where,
  std::vector<std::string> * warnings)
{
  if (!warnings) return;
  for (const auto & [key, value] : obj.items()) {
    if (!known.count(key)) warnings->push_back("unknown field " + where + key);
  }
}

const json & object_at(const json & doc, const char * key)
{
  const auto & obj = doc.at(key);
  if (!obj.is_object()) throw ParseError(std::string(key) + " must be an object");
  return obj;
}
}  // namespace

double StyleParams::ttc_min(StyleLabel style) const
{
  switch (style) {
    case StyleLabel::Aggressive:
      return ttc_min_aggressive;
    case StyleLabel::Normal:
      return ttc_min_normal;
    case StyleLabel::Conservative:
      return ttc_min_conservative;
  }
  return ttc_min_normal;
}

double StyleParams::comfort_scale(StyleLabel style) const
{
  switch (style) {
    case StyleLabel::Aggressive:
      return comfort_scale_aggressive;
    case StyleLabel::Normal:
      return comfort_scale_normal;
    case StyleLabel::Conservative:
      return comfort_scale_conservative;
  }
  return comfort_scale_normal;
}

ComfortLimits ComfortLimits::scaled(double factor) const
{
  return {
    max_lon_accel * factor, max_lon_decel * factor, max_lat_accel * factor, max_jerk * factor,
    max_yaw_rate * factor};
}

void EvalConfig::validate() const
{
  const auto & p = style_params;
  for (double v : {p.ttc_min_aggressive, p.ttc_min_normal, p.ttc_min_conservative,
                   p.comfort_scale_aggressive, p.comfort_scale_normal,
                   p.comfort_scale_conservative, p.alpha}) {
    if (!positive(v)) throw InvalidInput("style_params must be finite and positive");
  }
  if (!(p.ttc_min_conservative > p.ttc_min_normal && p.ttc_min_normal > p.ttc_min_aggressive)) {
    throw InvalidInput("ttc_min must increase from aggressive to conservative");
  }
  if (!(p.comfort_scale_aggressive > p.comfort_scale_normal &&
        p.comfort_scale_normal > p.comfort_scale_conservative)) {
    throw InvalidInput("comfort_scale must decrease from aggressive to conservative");
  }
  const auto & c = comfort_limits;
  for (double v : {c.max_lon_accel, c.max_lon_decel, c.max_lat_accel, c.max_jerk, c.max_yaw_rate}) {
    if (!positive(v)) throw InvalidInput("comfort_limits must be finite and positive");
  }
  if (!positive(weights.ttc) || !positive(weights.comfort) || !positive(weights.ep)) {
    throw InvalidInput("weights must be finite and positive");
  }
  if (!positive(horizon_s)) throw InvalidInput("horizon_s must be positive");
  if (!positive(ego_footprint.half_length) || !positive(ego_footprint.half_width)) {
    throw InvalidInput("ego_footprint extents must be positive");
  }
}

json eval_config_to_json(const EvalConfig & config)
{
  const auto & p = config.style_params;
  const auto & c = config.comfort_limits;
  return {
    {"style_params",
     {{"ttc_min", {{"A", p.ttc_min_aggressive}, {"N", p.ttc_min_normal}, {"C", p.ttc_min_conservative}}},
      {"comfort_scale",
       {{"A", p.comfort_scale_aggressive},
        {"N", p.comfort_scale_normal},
        {"C", p.comfort_scale_conservative}}},
      {"alpha", p.alpha}}},
    {"comfort_limits",
     {{"max_lon_accel", c.max_lon_accel},
      {"max_lon_decel", c.max_lon_decel},
      {"max_lat_accel", c.max_lat_accel},
      {"max_jerk", c.max_jerk},
      {"max_yaw_rate", c.max_yaw_rate}}},
    {"weights",
     {{"ttc", config.weights.ttc}, {"comfort", config.weights.comfort}, {"ep", config.weights.ep}}},
    {"horizon_s", config.horizon_s},
    {"ego_footprint",
     {{"half_length", config.ego_footprint.half_length},
      {"half_width", config.ego_footprint.half_width}}},
    {"dac_mode", config.dac_mode == DacMode::Center ? "center" : "footprint"},
  };
}

EvalConfig eval_config_from_json(const json & doc, std::vector<std::string> * warnings)
{
  if (!doc.is_object()) throw ParseError("evaluation config must be a JSON object");
  EvalConfig config;
  warn_unknown(
    doc,
    {"style_params", "comfort_limits", "weights", "horizon_s", "ego_footprint", "dac_mode"}, "",
    warnings);

  if (doc.contains("style_params")) {
    const auto & sp = object_at(doc, "style_params");
    warn_unknown(sp, {"ttc_min", "comfort_scale", "alpha"}, "style_params.", warnings);
    auto & p = config.style_params;
    if (sp.contains("ttc_min")) {
      const auto & t = object_at(sp, "ttc_min");
      read_number(t, "A", p.ttc_min_aggressive, "ttc_min");
      read_number(t, "N", p.ttc_min_normal, "ttc_min");
      read_number(t, "C", p.ttc_min_conservative, "ttc_min");
    }
    if (sp.contains("comfort_scale")) {
      const auto & s = object_at(sp, "comfort_scale");
      read_number(s, "A", p.comfort_scale_aggressive, "comfort_scale");
      read_number(s, "N", p.comfort_scale_normal, "comfort_scale");
      read_number(s, "C", p.comfort_scale_conservative, "comfort_scale");
    }
    read_number(sp, "alpha", p.alpha, "style_params");
  }
  if (doc.contains("comfort_limits")) {
    const auto & cl = object_at(doc, "comfort_limits");
    auto & c = config.comfort_limits;
    warn_unknown(
      cl, {"max_lon_accel", "max_lon_decel", "max_lat_accel", "max_jerk", "max_yaw_rate"},
      "comfort_limits.", warnings);
    read_number(cl, "max_lon_accel", c.max_lon_accel, "comfort_limits");
    read_number(cl, "max_lon_decel", c.max_lon_decel, "comfort_limits");
    read_number(cl, "max_lat_accel", c.max_lat_accel, "comfort_limits");
    read_number(cl, "max_jerk", c.max_jerk, "comfort_limits");
    read_number(cl, "max_yaw_rate", c.max_yaw_rate, "comfort_limits");
  }
  if (doc.contains("weights")) {
    const auto & w = object_at(doc, "weights");
    warn_unknown(w, {"ttc", "comfort", "ep"}, "weights.", warnings);
    read_number(w, "ttc", config.weights.ttc, "weights");
    read_number(w, "comfort", config.weights.comfort, "weights");
    read_number(w, "ep", config.weights.ep, "weights");
  }
  read_number(doc, "horizon_s", config.horizon_s, "config");
  if (doc.contains("ego_footprint")) {
    const auto & f = object_at(doc, "ego_footprint");
    read_number(f, "half_length", config.ego_footprint.half_length, "ego_footprint");
    read_number(f, "half_width", config.ego_footprint.half_width, "ego_footprint");
  }
  if (doc.contains("dac_mode")) {
    const auto mode = doc.at("dac_mode").get<std::string>();
    if (mode == "center") {
      config.dac_mode = DacMode::Center;
    } else if (mode == "footprint") {
      config.dac_mode = DacMode::Footprint;
    } else {
      throw ParseError("dac_mode must be \"center\" or \"footprint\"");
    }
  }
  config.validate();
  return config;
}

double ref_tolerance(double ep_target)
{
  if (!(ep_target >= 0.0)) throw InvalidInput("ep_target must be non-negative");
  if (ep_target < 10.0) return 3.0;
  if (ep_target < 24.0) return 5.0;
  if (ep_target < 40.0) return 6.0;
  return 7.0;
}

double ep_score_raw(double ep_agent, double ep_target, double alpha)
{
  if (!(ep_agent >= 0.0)) throw InvalidInput("ep_agent must be non-negative");
  if (!positive(alpha)) throw InvalidInput("alpha must be positive");
  const double ref = ref_tolerance(ep_target);
  const double d = ep_agent - ep_target;
  return 1.0 - alpha * d * d / (ref * ref);
}

double ep_score(double ep_agent, double ep_target, double alpha)
{
  return std::max(0.0, ep_score_raw(ep_agent, ep_target, alpha));
}

double progress_along(const Trajectory & traj, double horizon, std::vector<std::string> * warnings)
{
  if (!positive(horizon)) throw InvalidInput("horizon must be positive");
  if (traj.samples.empty()) return 0.0;
  const double t0 = traj.samples.front().t;
  // tiny slack keeps a sample at exactly t0 + horizon despite rounding
  const double t_end = t0 + horizon + 1e-6 * std::max(1.0, horizon);
  double total = 0.0;
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    const auto & a = traj.samples[i - 1];
    const auto & b = traj.samples[i];
    if (b.t > t_end) break;
    total += std::hypot(b.x - a.x, b.y - a.y);
  }
  if (warnings && traj.samples.back().t - t0 < horizon - 0.5 * traj.dt_nominal) {
    warnings->push_back(
      "trajectory " + traj.clip_id + " covers " + fmt(traj.samples.back().t - t0) +
      " s of the " + fmt(horizon) + " s horizon; progress truncated");
  }
  return total;
}

double ttc_score(double min_ttc, StyleLabel style, const StyleParams & params)
{
  const double floor = params.ttc_min(style);
  if (std::isnan(min_ttc)) throw InvalidInput("min_ttc is NaN");
  if (min_ttc >= floor) return 1.0;
  return std::max(0.0, min_ttc / floor);
}

std::vector<ComfortFrame> comfort_frames(const Trajectory & traj)
{
  const auto & s = traj.samples;
  std::vector<double> accel(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) accel[i] = s[i].accel_magnitude();
  const auto jerk = derivative(s, [&](std::size_t i, std::size_t j) { return accel[j] - accel[i]; });
  const auto yaw_rate = derivative(
    s, [&](std::size_t i, std::size_t j) { return geometry::wrap_angle(s[j].yaw - s[i].yaw); });

  std::vector<ComfortFrame> frames(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    frames[i] = {s[i].ax, s[i].ay, jerk[i], yaw_rate[i]};
  }
  return frames;
}

double comfort_score(
  const Trajectory & traj, StyleLabel style, const ComfortLimits & limits,
  const StyleParams & params)
{
  if (traj.samples.empty()) return 1.0;
  const ComfortLimits eff = limits.scaled(params.comfort_scale(style));
  std::size_t ok = 0;
  for (const auto & f : comfort_frames(traj)) {
    const bool lon = f.lon_accel >= 0.0 ? f.lon_accel <= eff.max_lon_accel
                                        : -f.lon_accel <= eff.max_lon_decel;
    if (lon && std::abs(f.lat_accel) <= eff.max_lat_accel && std::abs(f.jerk) <= eff.max_jerk &&
        std::abs(f.yaw_rate) <= eff.max_yaw_rate) {
      ++ok;
    }
  }
  return static_cast<double>(ok) / static_cast<double>(traj.samples.size());
}

double nc_score(
  const Trajectory & ego, const std::vector<AgentTrack> & agents, const EgoFootprint & footprint)
{
  const double tol = 0.5 * ego.dt_nominal;
  for (const auto & s : ego.samples) {
    const geometry::OrientedBox ego_box{
      {s.x, s.y}, s.yaw, footprint.half_length, footprint.half_width};
    for (const auto & agent : agents) {
      const auto state = agent.state_at(s.t, tol);
      if (!state) continue;
      const geometry::OrientedBox agent_box{
        {state->x, state->y}, state->yaw, agent.half_length, agent.half_width};
      if (geometry::boxes_overlap(ego_box, agent_box)) return 0.0;
    }
  }
  return 1.0;
}

double dac_score(
  const Trajectory & ego, const Polygon & corridor, DacMode mode, const EgoFootprint & footprint)
{
  if (corridor.size() < 3) throw InvalidInput("corridor needs at least 3 vertices");
  for (const auto & s : ego.samples) {
    if (mode == DacMode::Center) {
      if (!geometry::point_in_polygon({s.x, s.y}, corridor)) return 0.0;
      continue;
    }
    const geometry::OrientedBox box{{s.x, s.y}, s.yaw, footprint.half_length, footprint.half_width};
    for (const auto & corner : box.corners()) {
      if (!geometry::point_in_polygon(corner, corridor)) return 0.0;
    }
  }
  return 1.0;
}

double aggregate_sm_pdms(const SubScores & s, const Weights & w)
{
  if (!positive(w.ttc) || !positive(w.comfort) || !positive(w.ep)) {
    throw InvalidInput("weights must be positive");
  }
  const double mean =
    (w.ttc * s.ttc + w.comfort * s.comfort + w.ep * s.ep) / (w.ttc + w.comfort + w.ep);
  return s.nc * s.dac * mean;
}

SmPdmsReport evaluate_clip(
  const Trajectory & agent, const Trajectory & human, const std::vector<AgentTrack> & agents,
  const std::optional<Polygon> & corridor, StyleLabel style, const EvalConfig & config)
{
  if (agent.samples.size() < 2 || human.samples.size() < 2) {
    throw InvalidInput("trajectories need at least 2 samples");
  }
  SmPdmsReport r;
  r.clip_id = agent.clip_id;
  r.style = style;
  const double start_gap = std::abs(agent.start_time() - human.start_time());
  if (start_gap > 0.5 * agent.dt_nominal) {
    r.warnings.push_back("agent and reference start times differ by " + fmt(start_gap) + " s");
  }

  r.ep_agent = progress_along(agent, config.horizon_s, &r.warnings);
  r.ep_target = progress_along(human, config.horizon_s, &r.warnings);
  r.ref_used = ref_tolerance(r.ep_target);
  r.ep_raw = ep_score_raw(r.ep_agent, r.ep_target, config.style_params.alpha);
  r.ep = std::max(0.0, r.ep_raw);

  r.min_ttc = kinematics::compute_min_ttc(agent, agents);
  r.ttc = ttc_score(r.min_ttc, style, config.style_params);
  r.comfort = comfort_score(agent, style, config.comfort_limits, config.style_params);
  r.nc = nc_score(agent, agents, config.ego_footprint);
  if (corridor) {
    r.dac = dac_score(agent, *corridor, config.dac_mode, config.ego_footprint);
  } else {
    r.dac = 1.0;
    r.warnings.emplace_back("no drivable corridor; DAC not checked");
  }
  r.sm_pdms = aggregate_sm_pdms({r.nc, r.dac, r.ttc, r.comfort, r.ep}, config.weights);
  return r;
}

json report_to_json(const SmPdmsReport & r)
{
  return {
    {"clip_id", r.clip_id},
    {"style", to_string(r.style)},
    {"nc", r.nc},
    {"dac", r.dac},
    {"ttc", r.ttc},
    {"comfort", r.comfort},
    {"ep", r.ep},
    {"ep_raw", r.ep_raw},
    {"sm_pdms", r.sm_pdms},
    {"ep_agent", r.ep_agent},
    {"ep_target", r.ep_target},
    {"ref_used", r.ref_used},
    {"min_ttc", finite_or_null(r.min_ttc)},
    {"warnings", r.warnings},
  };
}

std::string csv_header() { return "clip_id,style,nc,dac,ttc,comfort,ep,sm_pdms"; }

std::string csv_row(const SmPdmsReport & r)
{
  return csv_field(r.clip_id) + "," + std::string(to_string(r.style)) + "," + fmt(r.nc) + "," + fmt(r.dac) +
         "," + fmt(r.ttc) + "," + fmt(r.comfort) + "," + fmt(r.ep) + "," + fmt(r.sm_pdms);
}

}  // namespace stylebench::metric
