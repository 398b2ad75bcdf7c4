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

#include "stylebench/clip_io.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace stylebench
{
namespace
{
using nlohmann::json;

double number(const json & obj, const char * key, const std::string & where)
{
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field '" + key + "'");
  if (!it->is_number()) throw ParseError(where + ": field '" + key + "' must be a number");
  return it->get<double>();
}

std::string text(const json & obj, const char * key, const std::string & where)
{
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field '" + key + "'");
  if (!it->is_string()) throw ParseError(where + ": field '" + key + "' must be a string");
  return it->get<std::string>();
}

bool flag(const json & obj, const char * key, const std::string & where)
{
  const auto it = obj.find(key);
  if (it == obj.end()) return false;
  if (!it->is_boolean()) throw ParseError(where + ": field '" + key + "' must be a boolean");
  return it->get<bool>();
}

void check_fields(
  const json & obj, const std::set<std::string> & known, const std::string & where,
  std::vector<std::string> & warnings)
{
  for (const auto & [key, value] : obj.items()) {
    if (!known.count(key)) warnings.push_back("ignoring unknown field '" + where + "." + key + "'");
  }
}

const json & array_field(const json & obj, const char * key, const std::string & where)
{
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field '" + key + "'");
  if (!it->is_array()) throw ParseError(where + ": field '" + key + "' must be an array");
  return *it;
}

SceneContext context_from_json(const json & doc, std::vector<std::string> & warnings)
{
  const std::string where = "context";
  if (!doc.is_object()) throw ParseError("context must be an object");
  check_fields(
    doc,
    {"scenario", "lead", "road_shape", "pedestrians", "has_merging", "merge_risk",
     "main_road_vehicles", "has_left_rear", "has_right_rear", "signal_protected"},
    where, warnings);

  SceneContext ctx;
  const auto scenario_name = text(doc, "scenario", where);
  const auto scenario = parse_scenario(scenario_name);
  if (!scenario) throw ParseError("unknown scenario '" + scenario_name + "'");
  ctx.scenario = *scenario;

  if (doc.contains("lead")) {
    const auto name = text(doc, "lead", where);
    const auto lead = parse_lead(name);
    if (!lead) throw ParseError("unknown lead presence '" + name + "'");
    ctx.lead = *lead;
  }
  if (doc.contains("road_shape")) {
    const auto name = text(doc, "road_shape", where);
    const auto shape = parse_road_shape(name);
    if (!shape) throw ParseError("unknown road shape '" + name + "'");
    ctx.road_shape = *shape;
  }
  ctx.pedestrians = flag(doc, "pedestrians", where);
  ctx.has_merging = flag(doc, "has_merging", where);
  ctx.merge_risk = flag(doc, "merge_risk", where);
  ctx.main_road_vehicles = flag(doc, "main_road_vehicles", where);
  ctx.has_left_rear = flag(doc, "has_left_rear", where);
  ctx.has_right_rear = flag(doc, "has_right_rear", where);
  ctx.signal_protected = flag(doc, "signal_protected", where);
  return ctx;
}

json context_to_json(const SceneContext & ctx)
{
  return {
    {"scenario", to_string(ctx.scenario)},
    {"lead", to_string(ctx.lead)},
    {"road_shape", to_string(ctx.road_shape)},
    {"pedestrians", ctx.pedestrians},
    {"has_merging", ctx.has_merging},
    {"merge_risk", ctx.merge_risk},
    {"main_road_vehicles", ctx.main_road_vehicles},
    {"has_left_rear", ctx.has_left_rear},
    {"has_right_rear", ctx.has_right_rear},
    {"signal_protected", ctx.signal_protected},
  };
}

AgentTrack agent_from_json(const json & doc, std::size_t index, std::vector<std::string> & warnings)
{
  const std::string where = "agents[" + std::to_string(index) + "]";
  if (!doc.is_object()) throw ParseError(where + " must be an object");
  check_fields(doc, {"agent_id", "kind", "half_length", "half_width", "states"}, where, warnings);

  AgentTrack track;
  track.agent_id = text(doc, "agent_id", where);
  const auto kind_name = text(doc, "kind", where);
  const auto kind = parse_agent_kind(kind_name);
  if (!kind) throw ParseError(where + ": unknown agent kind '" + kind_name + "'");
  track.kind = *kind;
  track.half_length = number(doc, "half_length", where);
  track.half_width = number(doc, "half_width", where);

  const auto & states = array_field(doc, "states", where);
  track.states.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto & s = states[i];
    const std::string sw = where + ".states[" + std::to_string(i) + "]";
    if (!s.is_object()) throw ParseError(sw + " must be an object");
    check_fields(s, {"t", "x", "y", "yaw", "speed"}, sw, warnings);
    track.states.push_back(
      {number(s, "t", sw), number(s, "x", sw), number(s, "y", sw), number(s, "yaw", sw),
       number(s, "speed", sw)});
  }
  return track;
}
}  // namespace

DecodedClip clip_from_json(const json & doc)
{
  DecodedClip out;
  auto & warnings = out.warnings;
  if (!doc.is_object()) throw ParseError("clip document must be a JSON object");
  check_fields(
    doc, {"clip_id", "dt_nominal", "samples", "agents", "context", "corridor", "velocity_frame"},
    "clip", warnings);

  Clip & clip = out.clip;
  clip.ego.clip_id = text(doc, "clip_id", "clip");
  clip.ego.dt_nominal = number(doc, "dt_nominal", "clip");

  bool world_frame = false;
  if (doc.contains("velocity_frame")) {
    const auto frame = text(doc, "velocity_frame", "clip");
    if (frame == "world") {
      world_frame = true;
    } else if (frame != "body") {
      throw ParseError("velocity_frame must be 'body' or 'world'");
    }
  }

  const auto & samples = array_field(doc, "samples", "clip");
  clip.ego.samples.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto & s = samples[i];
    const std::string where = "samples[" + std::to_string(i) + "]";
    if (!s.is_object()) throw ParseError(where + " must be an object");
    check_fields(s, {"t", "x", "y", "yaw", "vx", "vy", "ax", "ay"}, where, warnings);
    TrajectorySample sample{
      number(s, "t", where),  number(s, "x", where),  number(s, "y", where),
      number(s, "yaw", where), number(s, "vx", where), number(s, "vy", where),
      number(s, "ax", where), number(s, "ay", where)};
    if (world_frame) {
      const double c = std::cos(sample.yaw);
      const double sn = std::sin(sample.yaw);
      const double vx = c * sample.vx + sn * sample.vy;
      const double vy = -sn * sample.vx + c * sample.vy;
      const double ax = c * sample.ax + sn * sample.ay;
      const double ay = -sn * sample.ax + c * sample.ay;
      sample.vx = vx;
      sample.vy = vy;
      sample.ax = ax;
      sample.ay = ay;
    }
    clip.ego.samples.push_back(sample);
  }

  if (doc.contains("agents")) {
    const auto & agents = array_field(doc, "agents", "clip");
    for (std::size_t i = 0; i < agents.size(); ++i) {
      clip.agents.push_back(agent_from_json(agents[i], i, warnings));
    }
  }

  if (!doc.contains("context")) throw ParseError("clip: missing field 'context'");
  clip.context = context_from_json(doc.at("context"), warnings);

  if (doc.contains("corridor")) {
    const auto & corridor = array_field(doc, "corridor", "clip");
    Polygon polygon;
    for (const auto & vertex : corridor) {
      if (!vertex.is_array() || vertex.size() != 2 || !vertex[0].is_number() ||
          !vertex[1].is_number()) {
        throw ParseError("corridor vertices must be [x, y] pairs");
      }
      polygon.push_back({vertex[0].get<double>(), vertex[1].get<double>()});
    }
    clip.corridor = std::move(polygon);
  }
  return out;
}

DecodedClip parse_clip(const std::string & text)
{
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception & e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return clip_from_json(doc);
}

json clip_to_json(const Clip & clip)
{
  json samples = json::array();
  for (const auto & s : clip.ego.samples) {
    samples.push_back(
      {{"t", s.t}, {"x", s.x}, {"y", s.y}, {"yaw", s.yaw}, {"vx", s.vx}, {"vy", s.vy},
       {"ax", s.ax}, {"ay", s.ay}});
  }
  json agents = json::array();
  for (const auto & a : clip.agents) {
    json states = json::array();
    for (const auto & s : a.states) {
      states.push_back({{"t", s.t}, {"x", s.x}, {"y", s.y}, {"yaw", s.yaw}, {"speed", s.speed}});
    }
    agents.push_back(
      {{"agent_id", a.agent_id},
       {"kind", to_string(a.kind)},
       {"half_length", a.half_length},
       {"half_width", a.half_width},
       {"states", states}});
  }
  json doc = {
    {"clip_id", clip.ego.clip_id},
    {"dt_nominal", clip.ego.dt_nominal},
    {"samples", samples},
    {"agents", agents},
    {"context", context_to_json(clip.context)},
  };
  if (clip.corridor) {
    json corridor = json::array();
    for (const auto & p : *clip.corridor) corridor.push_back({p.x, p.y});
    doc["corridor"] = corridor;
  }
  return doc;
}

std::vector<CorpusLine> read_corpus(std::istream & in)
{
  std::vector<CorpusLine> lines;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    CorpusLine entry;
    entry.line_number = number;
    try {
      entry.entry = parse_clip(line);
    } catch (const ParseError & e) {
      entry.entry = std::string(e.what());
    }
    lines.push_back(std::move(entry));
  }
  return lines;
}

std::vector<CorpusLine> read_corpus_file(const std::string & path)
{
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open corpus " + path);
  return read_corpus(in);
}

}  // namespace stylebench
