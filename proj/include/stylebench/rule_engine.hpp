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

#ifndef STYLEBENCH__RULE_ENGINE_HPP_
#define STYLEBENCH__RULE_ENGINE_HPP_

#include "stylebench/kinematics.hpp"
#include "stylebench/thresholds.hpp"
#include "stylebench/types.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace stylebench::rules
{

using kinematics::KinematicFeatures;

enum class Precedence { AggressiveFirst, ConservativeFirst };
std::string_view to_string(Precedence precedence);

struct RuleDecision
{
  StyleLabel label{StyleLabel::Normal};
  ScenarioType scenario{ScenarioType::LaneFollowing};
  /// Ids of the predicates that decided the label, or the default rule.
  std::vector<std::string> fired_rules;
  KinematicFeatures features_used;
  Precedence precedence{Precedence::AggressiveFirst};
  /// Threshold section the rules were drawn from (empty for carpark).
  std::string section;
  /// Set when the label is a fixed convention rather than a heuristic.
  bool convention{false};
  std::vector<std::string> notes;
};

/// A labelled predicate over the feature vector.
struct Rule
{
  std::string id;
  StyleLabel label{StyleLabel::Normal};
  std::function<bool(const KinematicFeatures &)> holds;
};

/// The ordered rule list one scenario classifier evaluates. Within the stage
/// that wins, every rule that holds is reported.
struct RuleBook
{
  std::string prefix;
  std::string section;
  Precedence precedence{Precedence::AggressiveFirst};
  std::vector<Rule> rules;
  std::optional<std::string> constant_rule;  // label Normal, no predicates
  std::vector<std::string> notes;

  std::string default_rule() const { return prefix + ".N.default"; }
};

/// Builds the rule book for a context. `delta_psi` selects maneuvers and
/// lane-change rerouting. Throws InvalidInput for an unsupported scenario.
RuleBook build_rulebook(const SceneContext & ctx, double delta_psi, const ThresholdSet & thresholds);

RuleDecision evaluate(const RuleBook & book, const SceneContext & ctx, const KinematicFeatures & feats);

/// Dispatches on ctx.scenario. Deterministic and total over the supported
/// scenarios; InvalidInput otherwise.
RuleDecision classify(
  const SceneContext & ctx, const KinematicFeatures & feats, const ThresholdSet & thresholds);

RuleDecision classify_lane_following(
  const SceneContext & ctx, const KinematicFeatures & feats, const ThresholdSet & thresholds);
RuleDecision classify_intersection(
  const SceneContext & ctx, const KinematicFeatures & feats, const ThresholdSet & thresholds);
/// Clips whose |delta_psi| never exceeds yaw_lane_change are classified with
/// the lane-following rules.
RuleDecision classify_lane_change(
  const SceneContext & ctx, const KinematicFeatures & feats, const ThresholdSet & thresholds);
RuleDecision classify_crosswalk(
  const SceneContext & ctx, const KinematicFeatures & feats, const ThresholdSet & thresholds);
RuleDecision classify_side_to_main(
  const SceneContext & ctx, const KinematicFeatures & feats, const ThresholdSet & thresholds);
RuleDecision classify_special_interior(
  const SceneContext & ctx, const KinematicFeatures & feats, const ThresholdSet & thresholds);
RuleDecision classify_countryside(
  const SceneContext & ctx, const KinematicFeatures & feats, const ThresholdSet & thresholds);
RuleDecision classify_roundabout(
  const SceneContext & ctx, const KinematicFeatures & feats, const ThresholdSet & thresholds);
RuleDecision classify_carpark(
  const SceneContext & ctx, const KinematicFeatures & feats, const ThresholdSet & thresholds);

/// Re-evaluates the recorded rules against features_used and reports
/// whether they reproduce the recorded label.
bool replay(const RuleDecision & decision, const SceneContext & ctx, const ThresholdSet & thresholds);

nlohmann::json features_to_json(const KinematicFeatures & feats);
KinematicFeatures features_from_json(const nlohmann::json & doc);
nlohmann::json decision_to_json(const RuleDecision & decision);

}  // namespace stylebench::rules

#endif  // STYLEBENCH__RULE_ENGINE_HPP_
