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

#include "stylebench/rule_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace stylebench::rules
{
namespace
{
using kinematics::TrendClass;
using F = const KinematicFeatures &;

constexpr auto A = StyleLabel::Aggressive;
constexpr auto C = StyleLabel::Conservative;

class BookBuilder
{
public:
  BookBuilder(std::string prefix, std::string section, Precedence precedence)
  {
    book_.prefix = std::move(prefix);
    book_.section = std::move(section);
    book_.precedence = precedence;
  }

  BookBuilder & add(StyleLabel label, const std::string & name, std::function<bool(F)> holds)
  {
    const char * tag = label == A ? "A" : "C";
    book_.rules.push_back({book_.prefix + "." + tag + "." + name, label, std::move(holds)});
    return *this;
  }

  BookBuilder & note(std::string text)
  {
    book_.notes.push_back(std::move(text));
    return *this;
  }

  RuleBook done() { return std::move(book_); }

private:
  RuleBook book_;
};

bool has_lead(const SceneContext & ctx) { return ctx.lead != LeadPresence::None; }

RuleBook lane_following_book(const SceneContext & ctx, const ThresholdSet & g)
{
  const auto key = lane_following_section(ctx.lead, ctx.road_shape);
  const StyleThresholds t = g.section(key);
  BookBuilder b("lane_following", key, Precedence::AggressiveFirst);
  if (has_lead(ctx)) {
    const double max_unsafe = g.unsafe_ratio_max;
    b.add(A, "unsafe_ratio", [=](F f) { return f.unsafe_ratio > max_unsafe; });
  }
  b.add(A, "v_avg", [=](F f) { return f.v_avg > t.theta_v; })
    .add(A, "a_max", [=](F f) { return f.a_max > t.theta_a; })
    .add(A, "sigma_a", [=](F f) { return f.sigma_a > t.theta_sigma; });
  if (has_lead(ctx)) {
    const double min_safe = g.safe_ratio_min;
    b.add(C, "wide_gap_slow", [=](F f) { return f.safe_ratio > min_safe && f.v_avg < t.tau_v_c; });
  } else {
    b.add(C, "slow_smooth", [=](F f) { return f.v_avg < t.tau_v_c && f.sigma_a < t.tau_sigma_c; });
  }
  return b.done();
}

RuleBook intersection_book(const SceneContext & ctx, double delta_psi, const ThresholdSet & g)
{
  const auto maneuver = kinematics::detect_maneuver(delta_psi, g.yaw_turn_min);
  const auto key = intersection_section(maneuver);
  const bool unprotected = ctx.scenario == ScenarioType::UnprotectedIntersection;
  StyleThresholds t = g.section(key);
  if (unprotected) t = t.scaled_aggressive(g.unprotected_factor);
  const double v_limit = t.theta_v * (ctx.pedestrians ? g.pedestrian_factor : 1.0);

  BookBuilder b(
    std::string(unprotected ? "unprotected_intersection." : "protected_intersection.") +
      std::string(to_string(maneuver)),
    key, Precedence::AggressiveFirst);
  if (unprotected) b.note("aggressive thresholds scaled for unprotected junction");
  if (ctx.pedestrians) b.note("aggressive speed threshold scaled for pedestrians");
  if (has_lead(ctx)) {
    const double max_unsafe = g.unsafe_ratio_max;
    b.add(A, "unsafe_ratio", [=](F f) { return f.unsafe_ratio > max_unsafe; });
  }
  b.add(A, "v_avg", [=](F f) { return f.v_avg > v_limit; })
    .add(A, "a_max", [=](F f) { return f.a_max > t.theta_a; });
  if (has_lead(ctx)) {
    const double min_safe = g.safe_ratio_min;
    b.add(C, "safe_ratio", [=](F f) { return f.safe_ratio > min_safe; });
  }
  b.add(C, "slow_smooth", [=](F f) { return f.v_avg < t.tau_v_c && f.sigma_a < t.tau_sigma_c; });
  return b.done();
}

RuleBook lane_change_book(const SceneContext & ctx, double delta_psi, const ThresholdSet & g)
{
  const auto direction = kinematics::detect_maneuver(delta_psi, g.yaw_lane_change);
  if (direction == Maneuver::Straight) {
    auto book = lane_following_book(ctx, g);
    book.notes.push_back("lane change never materialised; classified as lane following");
    return book;
  }
  const bool left = direction == Maneuver::Left;
  const bool rear = left ? ctx.has_left_rear : ctx.has_right_rear;
  const StyleThresholds t = g.section("lane_change");
  auto abrupt = [=](F f) {
    return f.a_max > t.theta_a || f.sigma_a > t.theta_sigma || std::abs(f.delta_psi) > t.theta_psi;
  };

  BookBuilder b(
    std::string("lane_change.") + (left ? "left" : "right") + (rear ? ".rear" : ".no_rear"),
    "lane_change", Precedence::AggressiveFirst);
  if (rear) {
    b.add(A, "a_max", [=](F f) { return f.a_max > t.theta_a; })
      .add(A, "sigma_a", [=](F f) { return f.sigma_a > t.theta_sigma; })
      .add(A, "delta_psi", [=](F f) { return std::abs(f.delta_psi) > t.theta_psi; });
  } else {
    b.add(A, "fast_and_abrupt", [=](F f) { return f.v_avg > t.theta_v && abrupt(f); });
  }
  if (left) {
    b.add(C, "smooth_heading", [=](F f) {
      return std::abs(f.delta_psi) < t.psi_low && f.sigma_a < t.tau_sigma_c;
    });
  } else {
    b.add(C, "gentle_heading", [=](F f) {
      return std::abs(f.delta_psi) < t.psi_low && f.v_avg < t.tau_v_c;
    });
  }
  return b.done();
}

RuleBook crosswalk_book(const ThresholdSet & g)
{
  const StyleThresholds t = g.section("crosswalk");
  const double slow = g.crosswalk_v_conservative;
  BookBuilder b("crosswalk", "crosswalk", Precedence::ConservativeFirst);
  b.add(C, "slow", [=](F f) { return f.v_avg < slow; })
    .add(A, "v_avg", [=](F f) { return f.v_avg > t.theta_v; })
    .add(A, "a_max", [=](F f) { return f.a_max > t.theta_a; })
    .add(A, "sigma_a", [=](F f) { return f.sigma_a > t.theta_sigma; })
    .add(A, "trend_accelerating", [](F f) { return f.trend == TrendClass::Accelerating; });
  return b.done();
}

RuleBook side_to_main_book(const SceneContext & ctx, const ThresholdSet & g)
{
  if (ctx.scenario == ScenarioType::SideToMainEgoMain) {
    const StyleThresholds t = g.section("side_to_main_ego_main");
    BookBuilder b("side_to_main_ego_main", "side_to_main_ego_main", Precedence::AggressiveFirst);
    b.add(A, "fast_and_hard", [=](F f) { return f.v_avg > t.tau_v_a && f.a_max > t.tau_a_a; })
      .add(C, "slow_stable", [=](F f) { return f.v_avg < t.tau_v_c && f.sigma_a < t.tau_sigma_c; });
    return b.done();
  }
  const StyleThresholds t = g.section("side_to_main_ego_merging");
  BookBuilder b(
    ctx.has_merging ? "side_to_main_ego_merging.merging" : "side_to_main_ego_merging.clear",
    "side_to_main_ego_merging", Precedence::AggressiveFirst);
  b.add(A, "v_avg", [=](F f) { return f.v_avg > t.theta_v; })
    .add(A, "a_max", [=](F f) { return f.a_max > t.theta_a; });
  if (ctx.has_merging) {
    b.add(A, "trend_accelerating", [](F f) { return f.trend == TrendClass::Accelerating; });
  }
  b.add(C, "slow", [=](F f) { return f.v_avg < t.tau_v_c; });
  return b.done();
}

bool non_monotonic(TrendClass trend)
{
  return trend == TrendClass::AccelThenDecel || trend == TrendClass::DecelThenAccel;
}

RuleBook special_interior_book(const SceneContext & ctx, const ThresholdSet & g)
{
  const StyleThresholds t = g.section("special_interior_road");
  const std::string key = "special_interior_road";
  if (ctx.merge_risk) {
    BookBuilder b(key + ".merge_risk", key, Precedence::AggressiveFirst);
    b.add(A, "a_max", [=](F f) { return f.a_max > t.theta_a; })
      .add(A, "v_avg", [=](F f) { return f.v_avg > t.theta_v; })
      .add(A, "non_monotonic_rough",
           [=](F f) { return non_monotonic(f.trend) && f.sigma_a > t.theta_sigma; })
      .add(C, "slow_steady", [=](F f) {
        return f.v_avg < t.tau_v_c &&
               (f.trend == TrendClass::QuasiConstant || f.trend == TrendClass::Decelerating);
      });
    return b.done();
  }
  if (has_lead(ctx) || ctx.pedestrians) {
    BookBuilder b(key + ".interaction", key, Precedence::AggressiveFirst);
    if (has_lead(ctx)) {
      const double max_unsafe = g.unsafe_ratio_max;
      b.add(A, "unsafe_ratio", [=](F f) { return f.unsafe_ratio > max_unsafe; });
    }
    b.add(A, "v_avg", [=](F f) { return f.v_avg > t.theta_v; })
      .add(A, "a_max", [=](F f) { return f.a_max > t.theta_a; })
      .add(A, "sigma_a", [=](F f) { return f.sigma_a > t.theta_sigma; });
    if (has_lead(ctx)) {
      const double min_safe = g.safe_ratio_min;
      b.add(C, "safe_ratio", [=](F f) { return f.safe_ratio > min_safe; });
    }
    b.add(C, "slow", [=](F f) { return f.v_avg < t.tau_v_c; });
    return b.done();
  }
  BookBuilder b(key + ".isolated", key, Precedence::AggressiveFirst);
  b.add(A, "v_avg", [=](F f) { return f.v_avg > t.theta_v; })
    .add(A, "a_max", [=](F f) { return f.a_max > t.theta_a; })
    .add(A, "sigma_a", [=](F f) { return f.sigma_a > t.theta_sigma; })
    .add(C, "slow_smooth", [=](F f) { return f.v_avg < t.tau_v_c && f.sigma_a < t.tau_sigma_c; });
  return b.done();
}

RuleBook countryside_book(const SceneContext & ctx, const ThresholdSet & g)
{
  const bool curve = ctx.road_shape == RoadShape::Curve;
  StyleThresholds t = g.section("countryside_road");
  if (curve) t = t.scaled_aggressive(g.curve_factor);
  BookBuilder b(
    curve ? "countryside_road.curve" : "countryside_road.straight", "countryside_road",
    Precedence::AggressiveFirst);
  b.add(A, "v_avg", [=](F f) { return f.v_avg > t.theta_v; })
    .add(A, "a_max", [=](F f) { return f.a_max > t.theta_a; })
    .add(A, "sigma_a", [=](F f) { return f.sigma_a > t.theta_sigma; })
    .add(C, "slow_smooth", [=](F f) { return f.v_avg < t.tau_v_c && f.sigma_a < t.tau_sigma_c; });
  return b.done();
}

RuleBook roundabout_book(const SceneContext & ctx, const ThresholdSet & g)
{
  if (ctx.scenario == ScenarioType::RoundaboutInterior) {
    const StyleThresholds t = g.section("roundabout_interior");
    BookBuilder b("roundabout_interior", "roundabout_interior", Precedence::AggressiveFirst);
    b.add(A, "lateral_accel", [=](F f) { return f.ay_max > t.theta_a_lat; })
      .add(A, "sigma_a", [=](F f) { return f.sigma_a > t.theta_sigma; });
    return b.done();
  }
  const StyleThresholds t = g.section("roundabout_entrance");
  if (ctx.merge_risk) {
    const double moderate_a = t.theta_a * g.merge_risk_factor;
    BookBuilder b("roundabout_entrance.merge_risk", "roundabout_entrance", Precedence::AggressiveFirst);
    b.add(A, "assertive_accel", [=](F f) { return f.a_max > t.theta_a; })
      .add(A, "fast_entry_trend", [=](F f) {
        return (f.trend == TrendClass::Accelerating || f.trend == TrendClass::DecelThenAccel) &&
               f.a_max > moderate_a;
      })
      .add(C, "slow_steady", [=](F f) { return f.v_avg < t.tau_v_c && f.sigma_a < t.tau_sigma_c; })
      .add(C, "decelerating", [](F f) { return f.trend == TrendClass::Decelerating; });
    return b.done();
  }
  BookBuilder b("roundabout_entrance.clear", "roundabout_entrance", Precedence::AggressiveFirst);
  b.add(A, "v_avg", [=](F f) { return f.v_avg > t.theta_v; })
    .add(A, "a_max", [=](F f) { return f.a_max > t.theta_a; })
    .add(C, "slow_smooth", [=](F f) { return f.v_avg < t.tau_v_c && f.sigma_a < t.tau_sigma_c; });
  return b.done();
}

RuleBook carpark_book()
{
  RuleBook book;
  book.prefix = "carpark";
  book.constant_rule = "carpark.N.convention";
  book.notes.push_back("constant Normal convention; no heuristic defined for carparks");
  return book;
}

void require(const SceneContext & ctx, std::initializer_list<ScenarioType> allowed, const char * who)
{
  if (std::find(allowed.begin(), allowed.end(), ctx.scenario) == allowed.end()) {
    throw InvalidInput(
      std::string(who) + " cannot classify scenario '" + std::string(to_string(ctx.scenario)) + "'");
  }
}

std::vector<std::string> fired_for(const RuleBook & book, StyleLabel stage, F feats)
{
  std::vector<std::string> ids;
  for (const auto & rule : book.rules) {
    if (rule.label == stage && rule.holds(feats)) ids.push_back(rule.id);
  }
  return ids;
}

std::array<StyleLabel, 2> stages(Precedence precedence)
{
  if (precedence == Precedence::ConservativeFirst) return {C, A};
  return {A, C};
}

nlohmann::json finite_or_null(double value)
{
  if (std::isfinite(value)) return value;
  return nullptr;
}
}  // namespace

std::string_view to_string(Precedence precedence)
{
  return precedence == Precedence::ConservativeFirst ? "conservative_first" : "aggressive_first";
}

RuleBook build_rulebook(const SceneContext & ctx, double delta_psi, const ThresholdSet & thresholds)
{
  switch (ctx.scenario) {
    case ScenarioType::LaneFollowing:
      return lane_following_book(ctx, thresholds);
    case ScenarioType::ProtectedIntersection:
    case ScenarioType::UnprotectedIntersection:
      return intersection_book(ctx, delta_psi, thresholds);
    case ScenarioType::LaneChange:
      return lane_change_book(ctx, delta_psi, thresholds);
    case ScenarioType::Crosswalk:
      return crosswalk_book(thresholds);
    case ScenarioType::SideToMainEgoMerging:
    case ScenarioType::SideToMainEgoMain:
      return side_to_main_book(ctx, thresholds);
    case ScenarioType::SpecialInteriorRoad:
      return special_interior_book(ctx, thresholds);
    case ScenarioType::RoundaboutEntrance:
    case ScenarioType::RoundaboutInterior:
      return roundabout_book(ctx, thresholds);
    case ScenarioType::CountrysideRoad:
      return countryside_book(ctx, thresholds);
    case ScenarioType::Carpark:
      return carpark_book();
  }
  throw InvalidInput("unsupported scenario type");
}

RuleDecision evaluate(const RuleBook & book, const SceneContext & ctx, const KinematicFeatures & feats)
{
  RuleDecision decision;
  decision.scenario = ctx.scenario;
  decision.features_used = feats;
  decision.precedence = book.precedence;
  decision.section = book.section;
  decision.notes = book.notes;

  if (book.constant_rule) {
    decision.label = StyleLabel::Normal;
    decision.fired_rules = {*book.constant_rule};
    decision.convention = true;
    return decision;
  }
  for (const auto stage : stages(book.precedence)) {
    auto ids = fired_for(book, stage, feats);
    if (!ids.empty()) {
      decision.label = stage;
      decision.fired_rules = std::move(ids);
      return decision;
    }
  }
  decision.label = StyleLabel::Normal;
  decision.fired_rules = {book.default_rule()};
  return decision;
}

RuleDecision classify(
  const SceneContext & ctx, const KinematicFeatures & feats, const ThresholdSet & thresholds)
{
  if (std::find(kAllScenarios.begin(), kAllScenarios.end(), ctx.scenario) == kAllScenarios.end()) {
    throw InvalidInput("unsupported scenario type");
  }
  return evaluate(build_rulebook(ctx, feats.delta_psi, thresholds), ctx, feats);
}

RuleDecision classify_lane_following(
  const SceneContext & ctx, const KinematicFeatures & feats, const ThresholdSet & thresholds)
{
  require(ctx, {ScenarioType::LaneFollowing}, "classify_lane_following");
  return classify(ctx, feats, thresholds);
}

RuleDecision classify_intersection(
  const SceneContext & ctx, const KinematicFeatures & feats, const ThresholdSet & thresholds)
{
  require(
    ctx, {ScenarioType::ProtectedIntersection, ScenarioType::UnprotectedIntersection},
    "classify_intersection");
  return classify(ctx, feats, thresholds);
}

RuleDecision classify_lane_change(
  const SceneContext & ctx, const KinematicFeatures & feats, const ThresholdSet & thresholds)
{
  require(ctx, {ScenarioType::LaneChange}, "classify_lane_change");
  return classify(ctx, feats, thresholds);
}

RuleDecision classify_crosswalk(
  const SceneContext & ctx, const KinematicFeatures & feats, const ThresholdSet & thresholds)
{
  require(ctx, {ScenarioType::Crosswalk}, "classify_crosswalk");
  return classify(ctx, feats, thresholds);
}

RuleDecision classify_side_to_main(
  const SceneContext & ctx, const KinematicFeatures & feats, const ThresholdSet & thresholds)
{
  require(
    ctx, {ScenarioType::SideToMainEgoMerging, ScenarioType::SideToMainEgoMain},
    "classify_side_to_main");
  return classify(ctx, feats, thresholds);
}

RuleDecision classify_special_interior(
  const SceneContext & ctx, const KinematicFeatures & feats, const ThresholdSet & thresholds)
{
  require(ctx, {ScenarioType::SpecialInteriorRoad}, "classify_special_interior");
  return classify(ctx, feats, thresholds);
}

RuleDecision classify_countryside(
  const SceneContext & ctx, const KinematicFeatures & feats, const ThresholdSet & thresholds)
{
  require(ctx, {ScenarioType::CountrysideRoad}, "classify_countryside");
  return classify(ctx, feats, thresholds);
}

RuleDecision classify_roundabout(
  const SceneContext & ctx, const KinematicFeatures & feats, const ThresholdSet & thresholds)
{
  require(
    ctx, {ScenarioType::RoundaboutEntrance, ScenarioType::RoundaboutInterior}, "classify_roundabout");
  return classify(ctx, feats, thresholds);
}

RuleDecision classify_carpark(
  const SceneContext & ctx, const KinematicFeatures & feats, const ThresholdSet & thresholds)
{
  require(ctx, {ScenarioType::Carpark}, "classify_carpark");
  return classify(ctx, feats, thresholds);
}

bool replay(const RuleDecision & decision, const SceneContext & ctx, const ThresholdSet & thresholds)
{
  if (decision.fired_rules.empty()) return false;
  const auto & feats = decision.features_used;
  const RuleBook book = build_rulebook(ctx, feats.delta_psi, thresholds);

  if (book.constant_rule) {
    return decision.label == StyleLabel::Normal && decision.fired_rules.size() == 1 &&
           decision.fired_rules.front() == *book.constant_rule;
  }
  const auto order = stages(book.precedence);
  if (decision.fired_rules.size() == 1 && decision.fired_rules.front() == book.default_rule()) {
    return decision.label == StyleLabel::Normal && fired_for(book, order[0], feats).empty() &&
           fired_for(book, order[1], feats).empty();
  }

  // every recorded rule must exist, carry the recorded label, and still hold
  for (const auto & id : decision.fired_rules) {
    const auto it = std::find_if(
      book.rules.begin(), book.rules.end(), [&](const Rule & r) { return r.id == id; });
    if (it == book.rules.end() || it->label != decision.label || !it->holds(feats)) return false;
  }
  // and no higher-precedence stage may fire
  if (decision.label == order[1] && !fired_for(book, order[0], feats).empty()) return false;
  return decision.label == order[0] || decision.label == order[1];
}

nlohmann::json features_to_json(const KinematicFeatures & f)
{
  return {
    {"v_avg", f.v_avg},
    {"v_std", f.v_std},
    {"a_max", f.a_max},
    {"sigma_a", f.sigma_a},
    {"vy_max", f.vy_max},
    {"ay_max", f.ay_max},
    {"delta_psi", f.delta_psi},
    {"trend", kinematics::to_string(f.trend)},
    {"unsafe_ratio", f.unsafe_ratio},
    {"safe_ratio", f.safe_ratio},
    {"min_ttc", finite_or_null(f.min_ttc)},
  };
}

KinematicFeatures features_from_json(const nlohmann::json & doc)
{
  KinematicFeatures f;
  f.v_avg = doc.at("v_avg").get<double>();
  f.v_std = doc.at("v_std").get<double>();
  f.a_max = doc.at("a_max").get<double>();
  f.sigma_a = doc.at("sigma_a").get<double>();
  f.vy_max = doc.at("vy_max").get<double>();
  f.ay_max = doc.value("ay_max", 0.0);
  f.delta_psi = doc.at("delta_psi").get<double>();
  const auto trend = kinematics::parse_trend(doc.at("trend").get<std::string>());
  if (!trend) throw ParseError("unknown trend class");
  f.trend = *trend;
  f.unsafe_ratio = doc.at("unsafe_ratio").get<double>();
  f.safe_ratio = doc.at("safe_ratio").get<double>();
  const auto & ttc = doc.at("min_ttc");
  f.min_ttc = ttc.is_null() ? std::numeric_limits<double>::infinity() : ttc.get<double>();
  return f;
}

nlohmann::json decision_to_json(const RuleDecision & d)
{
  return {
    {"label", to_string(d.label)},
    {"scenario", to_string(d.scenario)},
    {"fired_rules", d.fired_rules},
    {"features_used", features_to_json(d.features_used)},
    {"precedence", to_string(d.precedence)},
    {"section", d.section},
    {"convention", d.convention},
    {"notes", d.notes},
  };
}

}  // namespace stylebench::rules
