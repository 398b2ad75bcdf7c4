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

#ifndef STYLEBENCH__PIPELINE_HPP_
#define STYLEBENCH__PIPELINE_HPP_

#include "stylebench/calibration.hpp"
#include "stylebench/clip_io.hpp"
#include "stylebench/fusion.hpp"
#include "stylebench/rule_engine.hpp"
#include "stylebench/sm_pdms.hpp"
#include "stylebench/thresholds.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace stylebench::pipeline
{

/// A file could not be read or written. Maps to exit status 2.
class IoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

const char * tool_version();

std::string read_file(const std::string & path);
/// Writes through a temporary sibling and renames it into place.
void write_file(const std::string & path, const std::string & contents);

std::string sha256_hex(const std::string & bytes);
std::string utc_timestamp();

/// A config input together with the exact bytes it was decoded from.
template <typename T>
struct Loaded
{
  T value;
  std::string path;   // empty for built-in defaults
  std::string bytes;  // file contents, or the serialized defaults
};

Loaded<ThresholdSet> load_threshold_input(const std::string & path);

/// The combined config file may hold the sections "review_policy",
/// "calibration" and "evaluation". A document with none of those keys is
/// taken to be the requested section itself.
nlohmann::json config_section(const nlohmann::json & doc, const std::string & key);
Loaded<nlohmann::json> load_config_input(const std::string & path);

fusion::ReviewPolicy review_policy_from_config(const nlohmann::json & config);
calibration::PercentileConfig percentiles_from_config(const nlohmann::json & config);
metric::EvalConfig eval_config_from_config(const nlohmann::json & config);

struct RunManifest
{
  std::string run_id;
  std::string command;
  std::map<std::string, std::string> inputs;
  std::string thresholds_path;
  std::string config_hash;
  std::string tool_version;
  std::string started_at;
  std::string finished_at;
  std::size_t total{0};
  std::size_t valid{0};
  std::size_t rejected{0};
};

nlohmann::json manifest_to_json(const RunManifest & manifest);

/// SHA-256 over every config input, each framed by its name and length so
/// that concatenation ambiguities cannot collide.
std::string config_hash(const std::vector<std::pair<std::string, std::string>> & named_bytes);

/// External labels as NDJSON lines {"clip_id": ..., "label": "A"|"N"|"C"}.
/// Later lines override earlier ones.
std::map<std::string, StyleLabel> read_external_labels(const std::string & path);

struct Rejection
{
  std::size_t line_number{0};
  std::string clip_id;  // empty when the document could not be decoded
  std::vector<std::string> reasons;
};

nlohmann::json rejection_to_json(const Rejection & rejection);

struct AnnotatedClip
{
  fusion::LabelRecord record;
  rules::RuleDecision decision;
};

struct AnnotateOutput
{
  std::vector<AnnotatedClip> clips;  // sorted by clip_id
  std::vector<Rejection> rejections;  // in corpus order
};

/// Validates, featurizes, classifies and fuses every decoded corpus line.
/// The first occurrence of a clip_id wins; later duplicates are rejected.
AnnotateOutput annotate_corpus(
  const std::vector<CorpusLine> & lines, const ThresholdSet & thresholds,
  const std::map<std::string, StyleLabel> & external, const fusion::ReviewPolicy & policy,
  std::size_t jobs);

struct AnnotateOptions
{
  std::string corpus_path;
  std::string thresholds_path;
  std::string external_labels_path;
  std::string config_path;
  std::string out_dir;
  std::size_t jobs{1};
};

/// Writes labels.ndjson, decisions.ndjson, rejected.ndjson and manifest.json
/// into out_dir. Only the manifest carries timestamps.
RunManifest run_annotate(const AnnotateOptions & options);

struct CalibrateOptions
{
  std::string corpus_path;
  std::string thresholds_path;  // base values for sections left uncalibrated
  std::string config_path;
  std::string out_path;
  std::size_t jobs{1};
};

/// Writes the thresholds file to out_path and the per-section report to
/// out_path + ".report.json".
calibration::CalibrationResult run_calibrate(const CalibrateOptions & options);

/// Either a fixed label for every clip or per-clip final labels from a label
/// log.
struct StyleSource
{
  std::optional<StyleLabel> fixed;
  std::string labels_path;
};

/// Parses "fixed:<A|N|C>" or "from-labels:<path>". Throws InvalidInput.
StyleSource parse_style_source(const std::string & text);

struct EvaluationEntry
{
  std::string clip_id;
  std::optional<metric::SmPdmsReport> report;
  std::string error;
};

struct EvaluateOutput
{
  std::vector<EvaluationEntry> entries;  // sorted by clip_id
  nlohmann::json aggregate;
};

/// Scores every decodable rollout against the reference clip with the same
/// clip_id. Scene agents and the corridor come from the reference clip.
EvaluateOutput evaluate_rollouts(
  const std::vector<CorpusLine> & rollouts, const std::vector<CorpusLine> & references,
  const StyleSource & style, const std::map<std::string, StyleLabel> & style_labels,
  const metric::EvalConfig & config, std::size_t jobs);

nlohmann::json aggregate_reports(const std::vector<EvaluationEntry> & entries);

struct EvaluateOptions
{
  std::string rollouts_path;
  std::string reference_path;
  std::string style;
  std::string config_path;
  std::string out_dir;
  std::size_t jobs{1};
};

/// Writes reports.ndjson, summary.csv and aggregate.json into out_dir.
/// Throws InvalidInput when the rollout file holds no clips.
EvaluateOutput run_evaluate(const EvaluateOptions & options);

struct ReviewExportOptions
{
  std::string labels_path;
  std::string config_path;
  std::string out_path;
  std::string snapshot_path;
};

/// Builds the review queue from the latest record per clip.
std::vector<fusion::QueueEntry> run_review_export(const ReviewExportOptions & options);

}  // namespace stylebench::pipeline

#endif  // STYLEBENCH__PIPELINE_HPP_
