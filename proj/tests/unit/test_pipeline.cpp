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

#include "stylebench/label_log.hpp"
#include "stylebench/pipeline.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace stylebench::pipeline
{
namespace
{
namespace fs = std::filesystem;
using nlohmann::json;

class PipelineTest : public ::testing::Test
{
protected:
  void SetUp() override
  {
    const auto * info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / "stylebench_pipeline_test" / info->name();
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  std::string path(const std::string & name) const { return (dir_ / name).string(); }

  std::string write_corpus(const std::string & name, const std::vector<Clip> & clips, const std::string & extra = "")
  {
    std::ofstream out(path(name));
    for (const auto & c : clips) out << clip_to_json(c).dump() << "\n";
    out << extra;
    return path(name);
  }

  fs::path dir_;
};

std::string slurp(const std::string & path)
{
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<json> ndjson_lines(const std::string & path)
{
  std::vector<json> out;
  std::istringstream in(slurp(path));
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(json::parse(line));
  }
  return out;
}

std::vector<Clip> corpus_clips(std::size_t n, std::uint64_t seed, const std::string & prefix)
{
  std::vector<Clip> clips;
  for (auto & labeled : synthetic::generate_corpus(n, seed, prefix)) {
    labeled.clip.corridor = synthetic::corridor_around(labeled.clip.ego, 3.0);
    clips.push_back(std::move(labeled.clip));
  }
  return clips;
}

// Gentle clips that stay inside every comfort limit.
std::vector<Clip> smooth_clips(std::size_t n, std::uint64_t seed, const std::string & prefix)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Clip> clips;
  for (std::size_t i = 0; i < n; ++i) {
    synthetic::MotionSpec spec;
    spec.clip_id = prefix + "-" + std::to_string(100 + i);
    spec.v_center = 3.0 + 12.0 * u(rng);
    spec.delta_psi = 0.6 * (u(rng) - 0.5);
    spec.osc_amp = 0.3 * u(rng);
    spec.yaw0 = 6.0 * u(rng);
    auto clip = synthetic::build_clip(spec);
    clip.corridor = synthetic::corridor_around(clip.ego, 3.0);
    clips.push_back(std::move(clip));
  }
  return clips;
}

TEST_F(PipelineTest, AnnotateTenClipsWithoutExternalLabels)
{
  AnnotateOptions options;
  options.corpus_path = write_corpus("corpus.ndjson", corpus_clips(10, 1, "ten"));
  options.out_dir = path("out");
  const auto manifest = run_annotate(options);
  EXPECT_EQ(manifest.total, 10u);
  EXPECT_EQ(manifest.valid, 10u);
  EXPECT_EQ(manifest.rejected, 0u);

  const auto labels = ndjson_lines(path("out/labels.ndjson"));
  ASSERT_EQ(labels.size(), 10u);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    EXPECT_EQ(labels[i]["provenance"], "RuleOnly");
    EXPECT_TRUE(labels[i]["fused_label"].is_null());
    EXPECT_EQ(labels[i]["final_label"], labels[i]["rule_label"]);
    if (i > 0) {
      EXPECT_LT(labels[i - 1]["clip_id"].get<std::string>(), labels[i]["clip_id"].get<std::string>());
    }
  }
  const auto manifest_doc = json::parse(slurp(path("out/manifest.json")));
  const auto & counts = manifest_doc["counts"];
  EXPECT_EQ(counts["total"].get<int>(), counts["valid"].get<int>() + counts["rejected"].get<int>());
  EXPECT_EQ(manifest_doc["config_hash"].get<std::string>().size(), 64u);
}

TEST_F(PipelineTest, MalformedClipIsRejectedNotFatal)
{
  auto clips = corpus_clips(9, 2, "mal");
  AnnotateOptions options;
  options.corpus_path = write_corpus("corpus.ndjson", clips, "{\"clip_id\": \"broken\", \"samples\": 3}\n");
  options.out_dir = path("out");
  const auto manifest = run_annotate(options);
  EXPECT_EQ(manifest.total, 10u);
  EXPECT_EQ(manifest.valid, 9u);
  EXPECT_EQ(manifest.rejected, 1u);
  EXPECT_EQ(ndjson_lines(path("out/labels.ndjson")).size(), 9u);
  const auto rejected = ndjson_lines(path("out/rejected.ndjson"));
  ASSERT_EQ(rejected.size(), 1u);
  EXPECT_EQ(rejected[0]["line"], 10);
}

TEST_F(PipelineTest, InvalidAndDuplicateClipsAreRejectedWithReasons)
{
  auto clips = corpus_clips(4, 3, "dup");
  clips.push_back(clips[1]);
  auto bad = clips[2];
  bad.ego.clip_id = "short";
  bad.ego.samples.resize(1);
  clips.push_back(bad);
  const auto lines = [&] {
    std::ostringstream out;
    for (const auto & c : clips) out << clip_to_json(c).dump() << "\n";
    std::istringstream in(out.str());
    return read_corpus(in);
  }();
  const auto output = annotate_corpus(lines, ThresholdSet::defaults(), {}, fusion::ReviewPolicy{}, 2);
  EXPECT_EQ(output.clips.size(), 4u);
  ASSERT_EQ(output.rejections.size(), 2u);
  EXPECT_EQ(output.rejections[0].line_number, 5u);
  EXPECT_EQ(output.rejections[1].clip_id, "short");
  EXPECT_FALSE(output.rejections[1].reasons.empty());
}

TEST_F(PipelineTest, RepeatedRunsAreByteIdentical)
{
  const auto corpus = write_corpus("corpus.ndjson", corpus_clips(120, 4, "det"));
  {
    std::ofstream ext(path("external.ndjson"));
    ext << R"({"clip_id":"det-00003","label":"A"})" << "\n" << R"({"clip_id":"det-00007","label":"C"})" << "\n";
  }
  std::vector<std::string> outputs;
  for (const std::size_t jobs : {1u, 1u, 4u}) {
    AnnotateOptions options;
    options.corpus_path = corpus;
    options.external_labels_path = path("external.ndjson");
    options.out_dir = path("out" + std::to_string(outputs.size()));
    options.jobs = jobs;
    run_annotate(options);
    outputs.push_back(slurp(options.out_dir + "/labels.ndjson") + slurp(options.out_dir + "/decisions.ndjson"));
  }
  EXPECT_EQ(outputs[0], outputs[1]);
  EXPECT_EQ(outputs[0], outputs[2]);
  EXPECT_NE(outputs[0].find("\"Fused\""), std::string::npos);
}

TEST_F(PipelineTest, ConfigHashIsDeterministicAndFramed)
{
  EXPECT_EQ(config_hash({{"a", "xy"}}), config_hash({{"a", "xy"}}));
  EXPECT_NE(config_hash({{"a", "x"}, {"b", "y"}}), config_hash({{"a", "xy"}, {"b", ""}}));
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_F(PipelineTest, ConfigSectionsAndBareDocuments)
{
  const auto combined = json::parse(R"({"review_policy": {"conservative_finals": false}, "evaluation": {}})");
  EXPECT_FALSE(review_policy_from_config(combined).conservative_finals);
  const auto bare = json::parse(R"({"upper": 90.0})");
  EXPECT_DOUBLE_EQ(percentiles_from_config(bare).upper, 90.0);
  EXPECT_TRUE(config_section(combined, "calibration").empty());
}

TEST_F(PipelineTest, CalibrateMatchesPercentileOracle)
{
  std::vector<Clip> clips;
  for (int i = 0; i < 101; ++i) {
    synthetic::MotionSpec spec;
    spec.clip_id = "cal-" + std::to_string(1000 + i);
    spec.v_center = 2.0 + 0.1 * i;
    spec.osc_amp = 0.05 * (i % 7);
    clips.push_back(synthetic::build_clip(spec));
  }
  CalibrateOptions options;
  options.corpus_path = write_corpus("corpus.ndjson", clips);
  options.out_path = path("thresholds.json");
  const auto result = run_calibrate(options);

  std::vector<double> v;
  std::vector<double> a;
  for (const auto & c : clips) {
    const auto f = kinematics::extract_features(c, ThresholdSet::defaults());
    v.push_back(f.v_avg);
    a.push_back(f.a_max);
  }
  std::sort(v.begin(), v.end());
  std::sort(a.begin(), a.end());
  const auto & t = result.thresholds.section("lane_following.none.straight");
  // rank 0.85 * 100 falls exactly on the 86th smallest sample
  EXPECT_DOUBLE_EQ(t.theta_v, v[85]);
  EXPECT_DOUBLE_EQ(t.theta_a, a[85]);
  EXPECT_DOUBLE_EQ(t.tau_v_c, v[15]);
  EXPECT_NEAR(t.theta_v, 2.0 + 8.5, 0.1);

  const auto written = parse_thresholds(slurp(options.out_path), "written");
  EXPECT_EQ(written, result.thresholds);
  const auto report = json::parse(slurp(options.out_path + ".report.json"));
  EXPECT_EQ(report["corpus"]["used"], 101);

  const std::string first = slurp(options.out_path);
  run_calibrate(options);
  EXPECT_EQ(slurp(options.out_path), first);
}

TEST_F(PipelineTest, UndersizedBucketKeepsDefaultsAndWarns)
{
  std::vector<Clip> clips;
  for (int i = 0; i < 5; ++i) {
    synthetic::MotionSpec spec;
    spec.clip_id = "few-" + std::to_string(i);
    spec.v_center = 3.0 + i;
    clips.push_back(synthetic::build_clip(spec));
  }
  CalibrateOptions options;
  options.corpus_path = write_corpus("corpus.ndjson", clips);
  options.out_path = path("thresholds.json");
  const auto result = run_calibrate(options);
  EXPECT_EQ(result.thresholds, ThresholdSet::defaults());
  ASSERT_FALSE(result.warnings.empty());
  const auto report = json::parse(slurp(options.out_path + ".report.json"));
  EXPECT_FALSE(report["warnings"].empty());
}

TEST_F(PipelineTest, EvaluateIdenticalRolloutsScoreOne)
{
  const auto clips = smooth_clips(40, 5, "eval");
  const auto reference = write_corpus("reference.ndjson", clips);
  std::vector<Clip> rollouts;
  for (const auto & c : clips) {
    Clip r;
    r.ego = c.ego;
    r.context = c.context;
    rollouts.push_back(r);
  }
  EvaluateOptions options;
  options.rollouts_path = write_corpus("rollouts.ndjson", rollouts);
  options.reference_path = reference;
  options.style = "fixed:N";
  options.out_dir = path("out");
  const auto out = run_evaluate(options);
  EXPECT_EQ(out.aggregate["scored"], 40);
  EXPECT_DOUBLE_EQ(out.aggregate["mean"]["sm_pdms"].get<double>(), 1.0);
  const auto csv = slurp(path("out/summary.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 41);
  EXPECT_EQ(ndjson_lines(path("out/reports.ndjson")).size(), 40u);
}

TEST_F(PipelineTest, ConservativeMeanNeverExceedsAggressiveMean)
{
  auto clips = corpus_clips(80, 6, "cmp");
  std::vector<CorpusLine> references;
  std::vector<CorpusLine> rollouts;
  for (std::size_t i = 0; i < clips.size(); ++i) {
    if (i % 2 == 0) synthetic::add_stationary_obstacle(clips[i], 12.0 + static_cast<double>(i % 9) * 3.0);
    Clip rollout;
    rollout.ego = synthetic::scaled_rollout(clips[i].ego, 1.0 + 0.01 * static_cast<double>(i % 10), 0.0);
    rollout.context = clips[i].context;
    references.push_back({i + 1, DecodedClip{clips[i], {}}});
    rollouts.push_back({i + 1, DecodedClip{rollout, {}}});
  }
  const auto run = [&](StyleLabel style) {
    StyleSource source;
    source.fixed = style;
    return evaluate_rollouts(rollouts, references, source, {}, metric::EvalConfig{}, 2);
  };
  const double aggressive = run(StyleLabel::Aggressive).aggregate["mean"]["sm_pdms"].get<double>();
  const double conservative = run(StyleLabel::Conservative).aggregate["mean"]["sm_pdms"].get<double>();
  EXPECT_LE(conservative, aggressive);
  EXPECT_LT(conservative, aggressive);
}

TEST_F(PipelineTest, EvaluateRecordsPerClipErrorsAndShortHorizons)
{
  const auto clips = corpus_clips(3, 7, "err");
  std::vector<CorpusLine> references{{1, DecodedClip{clips[0], {}}}, {2, DecodedClip{clips[1], {}}}};
  Clip short_rollout;
  short_rollout.ego = clips[1].ego;
  short_rollout.ego.samples.resize(21);
  std::vector<CorpusLine> rollouts{
    {1, DecodedClip{clips[0], {}}}, {2, DecodedClip{short_rollout, {}}}, {3, DecodedClip{clips[2], {}}},
    {4, std::string("bad json")}};
  StyleSource labels;
  labels.labels_path = "unused";
  const std::map<std::string, StyleLabel> style_labels{{clips[0].id(), StyleLabel::Aggressive}, {clips[1].id(), StyleLabel::Normal}};
  const auto out = evaluate_rollouts(rollouts, references, labels, style_labels, metric::EvalConfig{}, 1);
  EXPECT_EQ(out.aggregate["scored"], 2);
  EXPECT_EQ(out.aggregate["errors"], 2);
  for (const auto & e : out.entries) {
    if (e.clip_id == clips[2].id()) {
      EXPECT_EQ(e.error, "no reference clip");
    }
    if (e.clip_id == clips[1].id()) {
      ASSERT_TRUE(e.report);
      EXPECT_FALSE(e.report->warnings.empty());
    }
  }
}

TEST_F(PipelineTest, EmptyRolloutFileIsAnError)
{
  write_corpus("reference.ndjson", corpus_clips(2, 8, "empty"));
  EvaluateOptions options;
  options.rollouts_path = write_corpus("rollouts.ndjson", {});
  options.reference_path = path("reference.ndjson");
  options.style = "fixed:A";
  options.out_dir = path("out");
  EXPECT_THROW(run_evaluate(options), InvalidInput);
}

TEST_F(PipelineTest, StyleSourceParsing)
{
  EXPECT_EQ(parse_style_source("fixed:C").fixed, StyleLabel::Conservative);
  EXPECT_EQ(parse_style_source("from-labels:/tmp/x").labels_path, "/tmp/x");
  EXPECT_THROW(parse_style_source("fixed:Q"), InvalidInput);
  EXPECT_THROW(parse_style_source("labels"), InvalidInput);
}

TEST_F(PipelineTest, ReviewExportMirrorsQueueBuilder)
{
  {
    std::ofstream log(path("labels.ndjson"));
    log << fusion::record_line(fusion::make_record("b", StyleLabel::Normal, StyleLabel::Normal));
    log << fusion::record_line(fusion::make_record("a", StyleLabel::Aggressive, StyleLabel::Conservative));
    log << fusion::record_line(fusion::make_record("c", StyleLabel::Conservative, StyleLabel::Conservative));
    log << fusion::record_line(fusion::make_record("d", StyleLabel::Normal, StyleLabel::Aggressive));
  }
  ReviewExportOptions options;
  options.labels_path = path("labels.ndjson");
  options.out_path = path("queue.json");
  options.snapshot_path = path("snapshot.json");
  const auto queue = run_review_export(options);
  ASSERT_EQ(queue.size(), 3u);
  EXPECT_EQ(queue[0].clip_id, "a");
  EXPECT_EQ(queue[0].severity, 0);
  EXPECT_EQ(queue[1].clip_id, "d");
  EXPECT_EQ(queue[2].clip_id, "c");
  EXPECT_EQ(fusion::queue_from_json(json::parse(slurp(options.out_path))), queue);
  EXPECT_EQ(json::parse(slurp(options.snapshot_path)).size(), 4u);

  options.labels_path = path("missing.ndjson");
  EXPECT_THROW(run_review_export(options), IoError);
}

TEST_F(PipelineTest, ShippedConfigFilesMatchBuiltInDefaults)
{
  const std::string root = STYLEBENCH_SOURCE_DIR;
  const auto thresholds = load_threshold_input(root + "/config/thresholds.default.json");
  EXPECT_EQ(thresholds.value, ThresholdSet::defaults());
  const auto config = load_config_input(root + "/config/stylebench.default.json");
  EXPECT_EQ(review_policy_from_config(config.value), fusion::ReviewPolicy{});
  const auto percentiles = percentiles_from_config(config.value);
  EXPECT_DOUBLE_EQ(percentiles.upper, 85.0);
  EXPECT_DOUBLE_EQ(percentiles.lower, 15.0);
  std::vector<std::string> warnings;
  metric::eval_config_from_json(config_section(config.value, "evaluation"), &warnings);
  EXPECT_TRUE(warnings.empty());
  EXPECT_EQ(
    metric::eval_config_to_json(eval_config_from_config(config.value)),
    metric::eval_config_to_json(metric::EvalConfig{}));
}

int run_cli(const std::string & args)
{
  const std::string command = std::string(STYLEBENCH_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(PipelineTest, CliExitCodes)
{
  const auto corpus = write_corpus("corpus.ndjson", corpus_clips(6, 9, "cli"));
  EXPECT_EQ(run_cli("annotate " + corpus + " --out " + path("out") + " --jobs 2"), 0);
  EXPECT_TRUE(fs::exists(path("out/labels.ndjson")));
  EXPECT_EQ(run_cli("annotate " + path("nope.ndjson") + " --out " + path("out2")), 2);
  EXPECT_EQ(run_cli("annotate " + corpus), 1);
  EXPECT_EQ(run_cli("frobnicate"), 1);
  {
    std::ofstream bad(path("bad_thresholds.json"));
    bad << "{\"global\": {\"safe_headway_s\": 0.1}}";
  }
  EXPECT_EQ(run_cli("annotate " + corpus + " --out " + path("out3") + " --thresholds " + path("bad_thresholds.json")), 1);
  EXPECT_EQ(run_cli("review-export --labels " + path("out/labels.ndjson") + " --out " + path("queue.json")), 0);
  EXPECT_EQ(run_cli("calibrate " + corpus + " --out " + path("cal.json")), 0);
  write_corpus("empty.ndjson", {});
  EXPECT_NE(
    run_cli("evaluate --rollouts " + path("empty.ndjson") + " --reference " + corpus + " --style fixed:N --out " + path("ev")), 0);
  const auto smooth = write_corpus("smooth.ndjson", smooth_clips(6, 10, "smooth"));
  EXPECT_EQ(run_cli("annotate " + smooth + " --out " + path("smooth_out")), 0);
  EXPECT_EQ(
    run_cli("evaluate --rollouts " + smooth + " --reference " + smooth + " --style from-labels:" + path("smooth_out/labels.ndjson") +
            " --out " + path("ev2")),
    0);
  EXPECT_DOUBLE_EQ(json::parse(slurp(path("ev2/aggregate.json")))["mean"]["sm_pdms"].get<double>(), 1.0);
  EXPECT_EQ(run_cli("--version"), 0);
}

}  // namespace
}  // namespace stylebench::pipeline
