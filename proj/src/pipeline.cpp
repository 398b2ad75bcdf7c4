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

#include "stylebench/pipeline.hpp"

#include "stylebench/kinematics.hpp"
#include "stylebench/label_log.hpp"
#include "stylebench/validation.hpp"
#include "stylebench/worker_pool.hpp"

#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#ifndef STYLEBENCH_VERSION
#define STYLEBENCH_VERSION "0.0.0"
#endif

namespace stylebench::pipeline
{
namespace
{
using nlohmann::json;
namespace fs = std::filesystem;

const std::set<std::string> kConfigSections{"review_policy", "calibration", "evaluation"};

std::vector<CorpusLine> read_corpus_text(const std::string & text)
{
  std::istringstream in(text);
  return read_corpus(in);
}

std::string ndjson(const std::vector<json> & docs)
{
  std::string out;
  for (const auto & d : docs) out += d.dump() + "\n";
  return out;
}

void ensure_directory(const std::string & dir)
{
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

std::string join(const std::vector<std::string> & parts, const std::string & sep)
{
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::vector<std::string> violation_reasons(const ValidationReport & report)
{
  std::vector<std::string> reasons;
  for (const auto & v : report.violations) {
    reasons.push_back(v.detail.empty() ? v.kind : v.kind + ": " + v.detail);
  }
  return reasons;
}

std::string run_id_for(const std::string & hash, const std::string & corpus_bytes, const std::string & started)
{
  return sha256_hex(hash + "\n" + sha256_hex(corpus_bytes) + "\n" + started).substr(0, 16);
}
}  // namespace

const char * tool_version() { return STYLEBENCH_VERSION; }

std::string read_file(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading " + path);
  return buf.str();
}

void write_file(const std::string & path, const std::string & contents)
{
  const fs::path target(path);
  if (target.has_parent_path()) ensure_directory(target.parent_path().string());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw IoError("error while writing " + tmp);
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot move " + tmp + " to " + path + ": " + ec.message());
}

std::string sha256_hex(const std::string & bytes)
{
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0x0f];
  }
  return out;
}

std::string utc_timestamp()
{
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Loaded<ThresholdSet> load_threshold_input(const std::string & path)
{
  if (path.empty()) {
    const auto defaults = ThresholdSet::defaults();
    return {defaults, "", thresholds_to_json(defaults).dump()};
  }
  std::string bytes = read_file(path);
  return {parse_thresholds(bytes, path), path, std::move(bytes)};
}

json config_section(const json & doc, const std::string & key)
{
  if (!doc.is_object()) throw ParseError("config must be a JSON object");
  const bool combined = std::any_of(
    kConfigSections.begin(), kConfigSections.end(), [&](const auto & k) { return doc.contains(k); });
  if (!combined) return doc;
  const auto it = doc.find(key);
  return it == doc.end() ? json::object() : *it;
}

Loaded<json> load_config_input(const std::string & path)
{
  if (path.empty()) return {json::object(), "", "{}"};
  std::string bytes = read_file(path);
  try {
    auto doc = json::parse(bytes);
    if (!doc.is_object()) throw ParseError("config " + path + " must be a JSON object");
    return {std::move(doc), path, std::move(bytes)};
  } catch (const json::parse_error & e) {
    throw ParseError("config " + path + ": " + e.what());
  }
}

fusion::ReviewPolicy review_policy_from_config(const json & config)
{
  return fusion::policy_from_json(config_section(config, "review_policy"));
}

calibration::PercentileConfig percentiles_from_config(const json & config)
{
  return calibration::percentile_config_from_json(config_section(config, "calibration"));
}

metric::EvalConfig eval_config_from_config(const json & config)
{
  std::vector<std::string> warnings;
  auto result = metric::eval_config_from_json(config_section(config, "evaluation"), &warnings);
  for (const auto & w : warnings) spdlog::warn("evaluation config: {}", w);
  return result;
}

json manifest_to_json(const RunManifest & m)
{
  return {
    {"run_id", m.run_id},
    {"command", m.command},
    {"inputs", m.inputs},
    {"thresholds_path", m.thresholds_path},
    {"config_hash", m.config_hash},
    {"tool_version", m.tool_version},
    {"started_at", m.started_at},
    {"finished_at", m.finished_at},
    {"counts", {{"total", m.total}, {"valid", m.valid}, {"rejected", m.rejected}}},
  };
}

std::string config_hash(const std::vector<std::pair<std::string, std::string>> & named_bytes)
{
  std::string framed;
  for (const auto & [name, bytes] : named_bytes) {
    framed += name + ":" + std::to_string(bytes.size()) + ":" + bytes + "\n";
  }
  return sha256_hex(framed);
}

std::map<std::string, StyleLabel> read_external_labels(const std::string & path)
{
  std::istringstream in(read_file(path));
  std::map<std::string, StyleLabel> labels;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path + ":" + std::to_string(number);
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::parse_error & e) {
      throw ParseError(where + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("clip_id") || !doc.contains("label") ||
        !doc.at("clip_id").is_string() || !doc.at("label").is_string()) {
      throw ParseError(where + ": expected {\"clip_id\": string, \"label\": string}");
    }
    const auto label = parse_style_label(doc.at("label").get<std::string>());
    if (!label) throw ParseError(where + ": label must be A, N or C");
    labels[doc.at("clip_id").get<std::string>()] = *label;
  }
  return labels;
}

json rejection_to_json(const Rejection & r)
{
  return {
    {"line", r.line_number},
    {"clip_id", r.clip_id.empty() ? json(nullptr) : json(r.clip_id)},
    {"reasons", r.reasons}};
}

AnnotateOutput annotate_corpus(
  const std::vector<CorpusLine> & lines, const ThresholdSet & thresholds,
  const std::map<std::string, StyleLabel> & external, const fusion::ReviewPolicy & policy,
  std::size_t jobs)
{
  struct Slot
  {
    std::optional<AnnotatedClip> clip;
    std::optional<Rejection> rejection;
  };
  std::vector<Slot> slots(lines.size());
  std::vector<std::size_t> work;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto & line = lines[i];
    if (!line.ok()) {
      slots[i].rejection = Rejection{line.line_number, "", {std::get<std::string>(line.entry)}};
      continue;
    }
    const auto & id = std::get<DecodedClip>(line.entry).clip.id();
    if (!id.empty() && !seen.insert(id).second) {
      slots[i].rejection = Rejection{line.line_number, id, {"duplicate clip_id"}};
      continue;
    }
    work.push_back(i);
  }

  parallel_for(work.size(), jobs, [&](std::size_t k) {
    const std::size_t i = work[k];
    const auto & clip = std::get<DecodedClip>(lines[i].entry).clip;
    const auto report = validate_clip(clip);
    if (!report.ok()) {
      slots[i].rejection = Rejection{lines[i].line_number, clip.id(), violation_reasons(report)};
      return;
    }
    try {
      const auto feats = kinematics::extract_features(clip, thresholds);
      AnnotatedClip out;
      out.decision = rules::classify(clip.context, feats, thresholds);
      std::optional<StyleLabel> ext;
      if (const auto it = external.find(clip.id()); it != external.end()) ext = it->second;
      out.record = fusion::make_record(clip.id(), out.decision.label, ext, policy);
      slots[i].clip = std::move(out);
    } catch (const std::exception & e) {
      slots[i].rejection = Rejection{lines[i].line_number, clip.id(), {e.what()}};
    }
  });

  AnnotateOutput output;
  for (auto & slot : slots) {
    if (slot.clip) output.clips.push_back(std::move(*slot.clip));
    if (slot.rejection) output.rejections.push_back(std::move(*slot.rejection));
  }
  std::sort(output.clips.begin(), output.clips.end(), [](const auto & a, const auto & b) {
    return a.record.clip_id < b.record.clip_id;
  });
  return output;
}

RunManifest run_annotate(const AnnotateOptions & options)
{
  RunManifest manifest;
  manifest.command = "annotate";
  manifest.started_at = utc_timestamp();
  manifest.tool_version = tool_version();

  const auto thresholds = load_threshold_input(options.thresholds_path);
  const auto config = load_config_input(options.config_path);
  const auto policy = review_policy_from_config(config.value);
  std::map<std::string, StyleLabel> external;
  std::string external_bytes;
  if (!options.external_labels_path.empty()) {
    external_bytes = read_file(options.external_labels_path);
    external = read_external_labels(options.external_labels_path);
  }
  const std::string corpus_bytes = read_file(options.corpus_path);
  const auto lines = read_corpus_text(corpus_bytes);

  const auto output = annotate_corpus(lines, thresholds.value, external, policy, options.jobs);

  ensure_directory(options.out_dir);
  const fs::path dir(options.out_dir);
  std::string labels;
  std::vector<json> decisions;
  std::vector<json> rejected;
  for (const auto & c : output.clips) {
    labels += fusion::record_line(c.record);
    json d = rules::decision_to_json(c.decision);
    d["clip_id"] = c.record.clip_id;
    decisions.push_back(std::move(d));
  }
  for (const auto & r : output.rejections) {
    spdlog::warn("rejected line {} ({}): {}", r.line_number, r.clip_id, join(r.reasons, "; "));
    rejected.push_back(rejection_to_json(r));
  }
  write_file((dir / "labels.ndjson").string(), labels);
  write_file((dir / "decisions.ndjson").string(), ndjson(decisions));
  write_file((dir / "rejected.ndjson").string(), ndjson(rejected));

  manifest.inputs["corpus"] = options.corpus_path;
  if (!options.external_labels_path.empty()) manifest.inputs["external_labels"] = options.external_labels_path;
  if (!config.path.empty()) manifest.inputs["config"] = config.path;
  manifest.thresholds_path = thresholds.path;
  manifest.config_hash = config_hash(
    {{"thresholds", thresholds.bytes}, {"config", config.bytes}, {"external_labels", external_bytes}});
  manifest.total = lines.size();
  manifest.valid = output.clips.size();
  manifest.rejected = output.rejections.size();
  manifest.run_id = run_id_for(manifest.config_hash, corpus_bytes, manifest.started_at);
  manifest.finished_at = utc_timestamp();
  write_file((dir / "manifest.json").string(), manifest_to_json(manifest).dump(2) + "\n");
  spdlog::info(
    "annotated {} clips ({} rejected) into {}", manifest.valid, manifest.rejected, options.out_dir);
  return manifest;
}

calibration::CalibrationResult run_calibrate(const CalibrateOptions & options)
{
  const auto base = load_threshold_input(options.thresholds_path);
  const auto config = load_config_input(options.config_path);
  const auto percentiles = percentiles_from_config(config.value);
  const auto lines = read_corpus_text(read_file(options.corpus_path));

  std::vector<std::optional<calibration::LabeledFeatures>> slots(lines.size());
  parallel_for(lines.size(), options.jobs, [&](std::size_t i) {
    if (!lines[i].ok()) return;
    const auto & clip = std::get<DecodedClip>(lines[i].entry).clip;
    if (!validate_clip(clip).ok()) return;
    try {
      slots[i] = calibration::LabeledFeatures{
        clip.context, kinematics::extract_features(clip, base.value)};
    } catch (const std::exception & e) {
      spdlog::warn("calibrate: skipping {}: {}", clip.id(), e.what());
    }
  });
  std::vector<calibration::LabeledFeatures> corpus;
  for (auto & s : slots) {
    if (s) corpus.push_back(std::move(*s));
  }

  auto result = calibration::calibrate_thresholds(corpus, percentiles, base.value);
  for (const auto & w : result.warnings) spdlog::warn("calibrate: {}", w);

  json report = calibration::calibration_report_to_json(result, percentiles);
  report["corpus"] = {
    {"total", lines.size()}, {"used", corpus.size()}, {"rejected", lines.size() - corpus.size()}};
  write_file(options.out_path, thresholds_to_json(result.thresholds).dump(2) + "\n");
  write_file(options.out_path + ".report.json", report.dump(2) + "\n");
  return result;
}

StyleSource parse_style_source(const std::string & text)
{
  static const std::string kFixed = "fixed:";
  static const std::string kFromLabels = "from-labels:";
  StyleSource source;
  if (text.rfind(kFixed, 0) == 0) {
    const auto label = parse_style_label(text.substr(kFixed.size()));
    if (!label) throw InvalidInput("style source fixed:<label> needs A, N or C");
    source.fixed = label;
    return source;
  }
  if (text.rfind(kFromLabels, 0) == 0 && text.size() > kFromLabels.size()) {
    source.labels_path = text.substr(kFromLabels.size());
    return source;
  }
  throw InvalidInput("style source must be fixed:<A|N|C> or from-labels:<path>");
}

EvaluateOutput evaluate_rollouts(
  const std::vector<CorpusLine> & rollouts, const std::vector<CorpusLine> & references,
  const StyleSource & style, const std::map<std::string, StyleLabel> & style_labels,
  const metric::EvalConfig & config, std::size_t jobs)
{
  std::map<std::string, const Clip *> reference_by_id;
  for (const auto & line : references) {
    if (!line.ok()) continue;
    const auto & clip = std::get<DecodedClip>(line.entry).clip;
    reference_by_id.emplace(clip.id(), &clip);
  }

  std::vector<EvaluationEntry> entries(rollouts.size());
  std::set<std::string> seen;
  std::vector<std::size_t> work;
  for (std::size_t i = 0; i < rollouts.size(); ++i) {
    const auto & line = rollouts[i];
    if (!line.ok()) {
      entries[i].error =
        "line " + std::to_string(line.line_number) + ": " + std::get<std::string>(line.entry);
      continue;
    }
    entries[i].clip_id = std::get<DecodedClip>(line.entry).clip.id();
    if (!seen.insert(entries[i].clip_id).second) {
      entries[i].error = "duplicate rollout clip_id";
      continue;
    }
    work.push_back(i);
  }

  parallel_for(work.size(), jobs, [&](std::size_t k) {
    auto & entry = entries[work[k]];
    const auto & rollout = std::get<DecodedClip>(rollouts[work[k]].entry).clip;
    const auto ref = reference_by_id.find(entry.clip_id);
    if (ref == reference_by_id.end()) {
      entry.error = "no reference clip";
      return;
    }
    std::optional<StyleLabel> label = style.fixed;
    if (!label) {
      const auto it = style_labels.find(entry.clip_id);
      if (it == style_labels.end()) {
        entry.error = "no style label";
        return;
      }
      label = it->second;
    }
    const auto validation = validate_clip(rollout.ego, {}, rollout.context);
    if (!validation.ok()) {
      entry.error = "invalid rollout: " + join(violation_reasons(validation), "; ");
      return;
    }
    try {
      const Clip & reference = *ref->second;
      entry.report = metric::evaluate_clip(
        rollout.ego, reference.ego, reference.agents, reference.corridor, *label, config);
    } catch (const std::exception & e) {
      entry.error = e.what();
    }
  });

  std::stable_sort(entries.begin(), entries.end(), [](const auto & a, const auto & b) {
    return a.clip_id < b.clip_id;
  });
  EvaluateOutput out;
  out.aggregate = aggregate_reports(entries);
  out.entries = std::move(entries);
  return out;
}

json aggregate_reports(const std::vector<EvaluationEntry> & entries)
{
  struct Sums
  {
    std::size_t count{0};
    double nc{0}, dac{0}, ttc{0}, comfort{0}, ep{0}, sm_pdms{0};
    void add(const metric::SmPdmsReport & r)
    {
      ++count;
      nc += r.nc;
      dac += r.dac;
      ttc += r.ttc;
      comfort += r.comfort;
      ep += r.ep;
      sm_pdms += r.sm_pdms;
    }
    json means() const
    {
      if (count == 0) return nullptr;
      const double n = static_cast<double>(count);
      return {
        {"nc", nc / n},           {"dac", dac / n}, {"ttc", ttc / n},
        {"comfort", comfort / n}, {"ep", ep / n},   {"sm_pdms", sm_pdms / n}};
    }
  };

  Sums all;
  std::map<StyleLabel, Sums> by_style;
  std::size_t errors = 0;
  for (const auto & e : entries) {
    if (!e.report) {
      ++errors;
      continue;
    }
    all.add(*e.report);
    by_style[e.report->style].add(*e.report);
  }
  json per_style = json::object();
  for (const auto style : kAllStyles) {
    const auto it = by_style.find(style);
    if (it == by_style.end()) continue;
    per_style[std::string(to_string(style))] = {{"count", it->second.count}, {"mean", it->second.means()}};
  }
  return {
    {"clips", entries.size()},
    {"scored", all.count},
    {"errors", errors},
    {"mean", all.means()},
    {"per_style", per_style}};
}

EvaluateOutput run_evaluate(const EvaluateOptions & options)
{
  const auto source = parse_style_source(options.style);
  const auto config = load_config_input(options.config_path);
  const auto eval_config = eval_config_from_config(config.value);
  const auto rollouts = read_corpus_text(read_file(options.rollouts_path));
  if (rollouts.empty()) throw InvalidInput("rollout file " + options.rollouts_path + " holds no clips");
  const auto references = read_corpus_text(read_file(options.reference_path));

  std::map<std::string, StyleLabel> labels;
  if (!source.fixed) {
    if (!fs::exists(source.labels_path)) throw IoError("cannot read " + source.labels_path);
    const auto log = fusion::read_label_log(source.labels_path);
    for (const auto & w : log.warnings) spdlog::warn("{}", w);
    for (const auto & [id, record] : fusion::snapshot_of(log.entries)) labels[id] = record.final_label;
  }

  auto out = evaluate_rollouts(rollouts, references, source, labels, eval_config, options.jobs);

  ensure_directory(options.out_dir);
  const fs::path dir(options.out_dir);
  std::vector<json> reports;
  std::string csv = metric::csv_header() + "\n";
  for (const auto & e : out.entries) {
    if (e.report) {
      reports.push_back(metric::report_to_json(*e.report));
      csv += metric::csv_row(*e.report) + "\n";
      for (const auto & w : e.report->warnings) spdlog::debug("{}: {}", e.clip_id, w);
    } else {
      spdlog::warn("evaluate {}: {}", e.clip_id, e.error);
      reports.push_back({{"clip_id", e.clip_id}, {"error", e.error}});
    }
  }
  write_file((dir / "reports.ndjson").string(), ndjson(reports));
  write_file((dir / "summary.csv").string(), csv);
  write_file((dir / "aggregate.json").string(), out.aggregate.dump(2) + "\n");
  return out;
}

std::vector<fusion::QueueEntry> run_review_export(const ReviewExportOptions & options)
{
  if (!fs::exists(options.labels_path)) throw IoError("cannot read " + options.labels_path);
  const auto config = load_config_input(options.config_path);
  const auto policy = review_policy_from_config(config.value);
  const auto log = fusion::read_label_log(options.labels_path);
  for (const auto & w : log.warnings) spdlog::warn("{}", w);

  std::vector<fusion::LabelRecord> records;
  for (auto & [id, record] : fusion::snapshot_of(log.entries)) records.push_back(record);
  auto queue = fusion::build_review_queue(records, policy);
  write_file(options.out_path, fusion::queue_to_json(queue, policy, records).dump(2) + "\n");

  if (!options.snapshot_path.empty()) {
    json snapshot = json::array();
    for (const auto & r : records) snapshot.push_back(fusion::record_to_json(r));
    write_file(options.snapshot_path, snapshot.dump(2) + "\n");
  }
  spdlog::info("review queue: {} of {} clips", queue.size(), records.size());
  return queue;
}

}  // namespace stylebench::pipeline
