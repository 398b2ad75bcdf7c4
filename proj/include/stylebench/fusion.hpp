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

#ifndef STYLEBENCH__FUSION_HPP_
#define STYLEBENCH__FUSION_HPP_

#include "stylebench/types.hpp"

#include <json.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stylebench::fusion
{

/// Risk-aware combination: Aggressive if either source says so, Conservative
/// only when both agree, Normal otherwise.
StyleLabel fuse(StyleLabel rule_label, StyleLabel external_label);

enum class Provenance { RuleOnly, Fused, HumanVerified };
std::string_view to_string(Provenance provenance);
std::optional<Provenance> parse_provenance(std::string_view text);

/// Edge-case components of the review policy; each can be switched off.
struct ReviewPolicy
{
  bool disagreements{true};
  bool fused_aggressive_over_rule_normal{true};
  bool conservative_finals{true};

  bool operator==(const ReviewPolicy &) const = default;
};

nlohmann::json policy_to_json(const ReviewPolicy & policy);
ReviewPolicy policy_from_json(const nlohmann::json & doc);

struct LabelRecord
{
  std::string clip_id;
  StyleLabel rule_label{StyleLabel::Normal};
  std::optional<StyleLabel> external_label;
  std::optional<StyleLabel> fused_label;
  std::optional<StyleLabel> human_label;
  StyleLabel final_label{StyleLabel::Normal};
  bool needs_review{false};
  bool edge_case{false};
  Provenance provenance{Provenance::RuleOnly};
  // audit fields, present on verdict entries only
  std::optional<std::string> reviewer;
  std::optional<std::string> at;
  std::optional<StyleLabel> prior_final_label;

  bool operator==(const LabelRecord &) const = default;
};

/// Builds the record for a freshly classified clip. Without an external
/// label the record is RuleOnly and final = rule.
LabelRecord make_record(
  const std::string & clip_id, StyleLabel rule_label, std::optional<StyleLabel> external_label,
  const ReviewPolicy & policy = {});

/// 0 for A vs C, 1 for A vs N, 2 for C vs N, 3 when the labels agree.
int disagreement_severity(StyleLabel a, StyleLabel b);

struct QueueEntry
{
  std::string clip_id;
  int severity{3};
  std::vector<std::string> reasons;

  bool operator==(const QueueEntry &) const = default;
};

/// Why a record should be reviewed under `policy`; nullopt when it should not.
std::optional<QueueEntry> review_entry(const LabelRecord & record, const ReviewPolicy & policy);

/// Records needing review, ordered by severity then clip_id. Records already
/// verified by a human are skipped.
std::vector<QueueEntry> build_review_queue(
  std::span<const LabelRecord> records, const ReviewPolicy & policy = {});

/// Human override. The returned record carries the audit fields (reviewer,
/// time, prior final label).
LabelRecord apply_human_verdict(
  const LabelRecord & record, StyleLabel verdict, const std::string & reviewer,
  const std::string & at);

nlohmann::json record_to_json(const LabelRecord & record);
LabelRecord record_from_json(const nlohmann::json & doc);

nlohmann::json queue_to_json(
  std::span<const QueueEntry> queue, const ReviewPolicy & policy,
  std::span<const LabelRecord> records);
std::vector<QueueEntry> queue_from_json(const nlohmann::json & doc);

}  // namespace stylebench::fusion

#endif  // STYLEBENCH__FUSION_HPP_
