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

#include "stylebench/fusion.hpp"

#include <algorithm>
#include <map>

namespace stylebench::fusion
{
namespace
{
using nlohmann::json;

json optional_label(const std::optional<StyleLabel> & label)
{
  if (label) return std::string(to_string(*label));
  return nullptr;
}

std::optional<StyleLabel> label_field(const json & doc, const char * key)
{
  const auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw ParseError(std::string(key) + " must be a string or null");
  const auto label = parse_style_label(it->get<std::string>());
  if (!label) throw ParseError(std::string(key) + ": invalid style label");
  return label;
}

std::optional<std::string> string_field(const json & doc, const char * key)
{
  const auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw ParseError(std::string(key) + " must be a string or null");
  return it->get<std::string>();
}
}  // namespace

StyleLabel fuse(StyleLabel rule_label, StyleLabel external_label)
{
  if (rule_label == StyleLabel::Aggressive || external_label == StyleLabel::Aggressive) {
    return StyleLabel::Aggressive;
  }
  if (rule_label == StyleLabel::Conservative && external_label == StyleLabel::Conservative) {
    return StyleLabel::Conservative;
  }
  return StyleLabel::Normal;
}

std::string_view to_string(Provenance provenance)
{
  switch (provenance) {
    case Provenance::RuleOnly:
      return "RuleOnly";
    case Provenance::Fused:
      return "Fused";
    case Provenance::HumanVerified:
      return "HumanVerified";
  }
  return "RuleOnly";
}

std::optional<Provenance> parse_provenance(std::string_view text)
{
  if (text == "RuleOnly") return Provenance::RuleOnly;
  if (text == "Fused") return Provenance::Fused;
  if (text == "HumanVerified") return Provenance::HumanVerified;
  return std::nullopt;
}

json policy_to_json(const ReviewPolicy & policy)
{
  return {
    {"disagreements", policy.disagreements},
    {"fused_aggressive_over_rule_normal", policy.fused_aggressive_over_rule_normal},
    {"conservative_finals", policy.conservative_finals},
  };
}

ReviewPolicy policy_from_json(const json & doc)
{
  if (!doc.is_object()) throw ParseError("review policy must be a JSON object");
  ReviewPolicy policy;
  policy.disagreements = doc.value("disagreements", policy.disagreements);
  policy.fused_aggressive_over_rule_normal =
    doc.value("fused_aggressive_over_rule_normal", policy.fused_aggressive_over_rule_normal);
  policy.conservative_finals = doc.value("conservative_finals", policy.conservative_finals);
  return policy;
}

int disagreement_severity(StyleLabel a, StyleLabel b)
{
  if (a == b) return 3;
  const bool has_a = a == StyleLabel::Aggressive || b == StyleLabel::Aggressive;
  const bool has_c = a == StyleLabel::Conservative || b == StyleLabel::Conservative;
  if (has_a && has_c) return 0;
  if (has_a) return 1;
  return 2;
}

std::optional<QueueEntry> review_entry(const LabelRecord & record, const ReviewPolicy & policy)
{
  QueueEntry entry{record.clip_id, 3, {}};
  if (record.external_label && policy.disagreements && *record.external_label != record.rule_label) {
    entry.severity = disagreement_severity(record.rule_label, *record.external_label);
    entry.reasons.emplace_back("disagreement");
  }
  if (policy.fused_aggressive_over_rule_normal && record.fused_label &&
      *record.fused_label == StyleLabel::Aggressive && record.rule_label == StyleLabel::Normal) {
    entry.reasons.emplace_back("fused_aggressive_over_rule_normal");
  }
  if (policy.conservative_finals && record.final_label == StyleLabel::Conservative) {
    entry.reasons.emplace_back("conservative_final");
  }
  if (entry.reasons.empty()) return std::nullopt;
  return entry;
}

LabelRecord make_record(
  const std::string & clip_id, StyleLabel rule_label, std::optional<StyleLabel> external_label,
  const ReviewPolicy & policy)
{
  LabelRecord record;
  record.clip_id = clip_id;
  record.rule_label = rule_label;
  record.external_label = external_label;
  if (external_label) {
    record.fused_label = fuse(rule_label, *external_label);
    record.final_label = *record.fused_label;
    record.provenance = Provenance::Fused;
  } else {
    record.final_label = rule_label;
    record.provenance = Provenance::RuleOnly;
  }
  if (const auto entry = review_entry(record, policy)) {
    record.needs_review = true;
    const bool disagreement =
      std::find(entry->reasons.begin(), entry->reasons.end(), "disagreement") != entry->reasons.end();
    record.edge_case = !disagreement;
  }
  return record;
}

std::vector<QueueEntry> build_review_queue(
  std::span<const LabelRecord> records, const ReviewPolicy & policy)
{
  std::map<std::string, QueueEntry> unique;
  for (const auto & record : records) {
    if (record.provenance == Provenance::HumanVerified) continue;
    if (auto entry = review_entry(record, policy)) unique.insert_or_assign(record.clip_id, *entry);
  }
  std::vector<QueueEntry> queue;
  queue.reserve(unique.size());
  for (auto & [id, entry] : unique) queue.push_back(std::move(entry));
  std::stable_sort(queue.begin(), queue.end(), [](const QueueEntry & a, const QueueEntry & b) {
    if (a.severity != b.severity) return a.severity < b.severity;
    return a.clip_id < b.clip_id;
  });
  return queue;
}

LabelRecord apply_human_verdict(
  const LabelRecord & record, StyleLabel verdict, const std::string & reviewer,
  const std::string & at)
{
  if (std::find(kAllStyles.begin(), kAllStyles.end(), verdict) == kAllStyles.end()) {
    throw InvalidInput("verdict must be one of A, N, C");
  }
  LabelRecord out = record;
  out.prior_final_label = record.final_label;
  out.human_label = verdict;
  out.final_label = verdict;
  out.provenance = Provenance::HumanVerified;
  out.needs_review = false;
  out.reviewer = reviewer;
  out.at = at;
  return out;
}

json record_to_json(const LabelRecord & r)
{
  return {
    {"clip_id", r.clip_id},
    {"rule_label", to_string(r.rule_label)},
    {"external_label", optional_label(r.external_label)},
    {"fused_label", optional_label(r.fused_label)},
    {"human_label", optional_label(r.human_label)},
    {"final_label", to_string(r.final_label)},
    {"needs_review", r.needs_review},
    {"edge_case", r.edge_case},
    {"provenance", to_string(r.provenance)},
    {"reviewer", r.reviewer ? json(*r.reviewer) : json(nullptr)},
    {"at", r.at ? json(*r.at) : json(nullptr)},
    {"prior_final_label", optional_label(r.prior_final_label)},
  };
}

LabelRecord record_from_json(const json & doc)
{
  if (!doc.is_object()) throw ParseError("label record must be a JSON object");
  LabelRecord r;
  const auto id = string_field(doc, "clip_id");
  if (!id) throw ParseError("label record without clip_id");
  r.clip_id = *id;
  const auto rule = label_field(doc, "rule_label");
  if (!rule) throw ParseError("label record without rule_label");
  r.rule_label = *rule;
  r.external_label = label_field(doc, "external_label");
  r.fused_label = label_field(doc, "fused_label");
  r.human_label = label_field(doc, "human_label");
  const auto final_label = label_field(doc, "final_label");
  if (!final_label) throw ParseError("label record without final_label");
  r.final_label = *final_label;
  r.needs_review = doc.value("needs_review", false);
  r.edge_case = doc.value("edge_case", false);
  const auto provenance = parse_provenance(doc.value("provenance", std::string("RuleOnly")));
  if (!provenance) throw ParseError("label record with unknown provenance");
  r.provenance = *provenance;
  r.reviewer = string_field(doc, "reviewer");
  r.at = string_field(doc, "at");
  r.prior_final_label = label_field(doc, "prior_final_label");
  return r;
}

json queue_to_json(
  std::span<const QueueEntry> queue, const ReviewPolicy & policy,
  std::span<const LabelRecord> records)
{
  std::map<std::string, const LabelRecord *> by_id;
  for (const auto & r : records) by_id[r.clip_id] = &r;

  json items = json::array();
  for (const auto & entry : queue) {
    json item = {
      {"clip_id", entry.clip_id}, {"severity", entry.severity}, {"reasons", entry.reasons}};
    if (const auto it = by_id.find(entry.clip_id); it != by_id.end()) {
      item["rule_label"] = to_string(it->second->rule_label);
      item["external_label"] = optional_label(it->second->external_label);
      item["fused_label"] = optional_label(it->second->fused_label);
    }
    items.push_back(std::move(item));
  }
  return {{"policy", policy_to_json(policy)}, {"items", items}};
}

std::vector<QueueEntry> queue_from_json(const json & doc)
{
  if (!doc.is_object() || !doc.contains("items") || !doc.at("items").is_array()) {
    throw ParseError("review queue must be an object with an 'items' array");
  }
  std::vector<QueueEntry> queue;
  for (const auto & item : doc.at("items")) {
    QueueEntry entry;
    entry.clip_id = item.at("clip_id").get<std::string>();
    entry.severity = item.value("severity", 3);
    if (item.contains("reasons")) entry.reasons = item.at("reasons").get<std::vector<std::string>>();
    queue.push_back(std::move(entry));
  }
  return queue;
}

}  // namespace stylebench::fusion
