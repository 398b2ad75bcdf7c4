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
#include "stylebench/review_service.hpp"
#include "stylebench/worker_pool.hpp"

#include "CLI11.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>

namespace
{
namespace pl = stylebench::pipeline;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;

stylebench::review::ReviewServer * g_server = nullptr;

extern "C" void handle_stop_signal(int)
{
  if (g_server) g_server->stop();
}

void require_file(const std::string & path, const char * what)
{
  if (!path.empty() && !std::filesystem::exists(path)) {
    throw pl::IoError(std::string(what) + " not found: " + path);
  }
}

struct Common
{
  std::string thresholds;
  std::string config;
  std::size_t jobs{0};
  std::string log_level{"info"};

  std::size_t effective_jobs() const { return jobs == 0 ? stylebench::default_jobs() : jobs; }
  std::string effective_config() const
  {
    if (!config.empty()) return config;
    if (const char * env = std::getenv("STYLEBENCH_CONFIG"); env && *env) return env;
    return {};
  }
};

void add_common(CLI::App & cmd, Common & common)
{
  cmd.add_option("--thresholds", common.thresholds, "Thresholds JSON file (defaults built in)");
  cmd.add_option(
    "--config", common.config, "Config JSON file (default: $STYLEBENCH_CONFIG if set)");
  cmd.add_option("--jobs,-j", common.jobs, "Worker threads (0 = available parallelism)");
  cmd.add_option("--log-level", common.log_level, "trace, debug, info, warn, error, off")
    ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "critical", "off"}));
}
}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Rule-based driving-style annotation and style-modulated trajectory scoring"};
  app.set_version_flag("--version", std::string(pl::tool_version()));
  app.require_subcommand(1);

  Common common;

  pl::AnnotateOptions annotate;
  auto * cmd_annotate = app.add_subcommand("annotate", "Label a clip corpus with the rule engine");
  add_common(*cmd_annotate, common);
  cmd_annotate->add_option("corpus,--corpus", annotate.corpus_path, "NDJSON clip corpus")->required();
  cmd_annotate->add_option("--external-labels", annotate.external_labels_path, "NDJSON {clip_id, label}");
  cmd_annotate->add_option("--out", annotate.out_dir, "Output directory")->required();

  pl::CalibrateOptions calibrate;
  auto * cmd_calibrate = app.add_subcommand("calibrate", "Derive thresholds from corpus percentiles");
  add_common(*cmd_calibrate, common);
  cmd_calibrate->add_option("corpus,--corpus", calibrate.corpus_path, "NDJSON clip corpus")->required();
  cmd_calibrate->add_option("--out", calibrate.out_path, "Thresholds JSON to write")->required();

  pl::EvaluateOptions evaluate;
  auto * cmd_evaluate = app.add_subcommand("evaluate", "Score rollouts against reference clips");
  add_common(*cmd_evaluate, common);
  cmd_evaluate->add_option("--rollouts", evaluate.rollouts_path, "NDJSON agent rollouts")->required();
  cmd_evaluate->add_option("--reference", evaluate.reference_path, "NDJSON reference clips")->required();
  cmd_evaluate->add_option("--style", evaluate.style, "fixed:<A|N|C> or from-labels:<path>")->required();
  cmd_evaluate->add_option("--out", evaluate.out_dir, "Output directory")->required();

  pl::ReviewExportOptions review_export;
  auto * cmd_export = app.add_subcommand("review-export", "Build the human review queue");
  add_common(*cmd_export, common);
  cmd_export->add_option("--labels", review_export.labels_path, "Label log (NDJSON)")->required();
  cmd_export->add_option("--out", review_export.out_path, "Queue JSON to write")->required();
  cmd_export->add_option("--snapshot", review_export.snapshot_path, "Also write the label snapshot");

  stylebench::review::ServiceOptions serve;
  int port = 8787;
  std::string host = "127.0.0.1";
  std::string static_dir = "web";
  auto * cmd_serve = app.add_subcommand("serve", "Run the review service");
  add_common(*cmd_serve, common);
  cmd_serve->add_option("--port", port, "Listen port")->capture_default_str();
  cmd_serve->add_option("--host", host, "Listen address")->capture_default_str();
  cmd_serve->add_option("--queue", serve.queue_path, "Queue JSON from review-export")->required();
  cmd_serve->add_option("--labels", serve.labels_path, "Label log (NDJSON)")->required();
  cmd_serve->add_option("--corpus", serve.corpus_path, "Clip corpus for features and geometry");
  cmd_serve->add_option("--static", static_dir, "Directory served under /")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  spdlog::set_default_logger(spdlog::stderr_color_mt("stylebench"));
  spdlog::set_level(spdlog::level::from_str(common.log_level));

  try {
    if (*cmd_annotate) {
      annotate.thresholds_path = common.thresholds;
      annotate.config_path = common.effective_config();
      annotate.jobs = common.effective_jobs();
      const auto manifest = pl::run_annotate(annotate);
      std::cout << manifest.valid << " labelled, " << manifest.rejected << " rejected\n";
    } else if (*cmd_calibrate) {
      calibrate.thresholds_path = common.thresholds;
      calibrate.config_path = common.effective_config();
      calibrate.jobs = common.effective_jobs();
      const auto result = pl::run_calibrate(calibrate);
      std::size_t calibrated = 0;
      for (const auto & s : result.sections) calibrated += s.calibrated ? 1 : 0;
      std::cout << calibrated << " of " << result.sections.size() << " sections calibrated\n";
    } else if (*cmd_evaluate) {
      evaluate.config_path = common.effective_config();
      evaluate.jobs = common.effective_jobs();
      const auto out = pl::run_evaluate(evaluate);
      std::cout << out.aggregate.at("scored").get<std::size_t>() << " scored, "
                << out.aggregate.at("errors").get<std::size_t>() << " errors\n";
    } else if (*cmd_export) {
      review_export.config_path = common.effective_config();
      const auto queue = pl::run_review_export(review_export);
      std::cout << queue.size() << " clips queued for review\n";
    } else if (*cmd_serve) {
      require_file(serve.queue_path, "queue");
      require_file(serve.corpus_path, "corpus");
      require_file(common.thresholds, "thresholds");
      serve.thresholds_path = common.thresholds;
      stylebench::review::ReviewService service(serve);
      stylebench::review::ReviewServer server(service, static_dir);
      const int bound = server.bind(host, port);
      if (bound < 0) {
        spdlog::error("cannot bind {}:{}", host, port);
        return kExitIo;
      }
      g_server = &server;
      std::signal(SIGINT, handle_stop_signal);
      std::signal(SIGTERM, handle_stop_signal);
      spdlog::info("review service listening on http://{}:{}", host, bound);
      server.listen();
      g_server = nullptr;
    }
  } catch (const pl::IoError & e) {
    spdlog::error("{}", e.what());
    return kExitIo;
  } catch (const std::exception & e) {
    spdlog::error("{}", e.what());
    return kExitUsage;
  }
  return kExitOk;
}
