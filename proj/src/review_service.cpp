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

#include "stylebench/review_service.hpp"

#include "stylebench/clip_io.hpp"
#include "stylebench/kinematics.hpp"

#include "httplib.h"

#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>

namespace stylebench::review
{
namespace
{
using nlohmann::json;

std::string utc_now()
{
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json optional_label(const std::optional<StyleLabel> & label)
{
  if (label) return std::string(to_string(*label));
  return nullptr;
}

json points_json(const std::vector<Point2> & points)
{
  json out = json::array();
  for (const auto & p : points) out.push_back({p.x, p.y});
  return out;
}

Response error(int status, const std::string & message)
{
  return {status, {{"error", message}}};
}

std::vector<Point2> ego_points(const Clip & clip)
{
  std::vector<Point2> pts;
  pts.reserve(clip.ego.samples.size());
  for (const auto & s : clip.ego.samples) pts.push_back({s.x, s.y});
  return pts;
}
}  // namespace

std::vector<Point2> downsample(const std::vector<Point2> & points, std::size_t max_points)
{
  const std::size_t n = points.size();
  if (n <= max_points || max_points < 2) return points;
  std::vector<Point2> out;
  out.reserve(max_points);
  for (std::size_t i = 0; i < max_points; ++i) {
    const double pos =
      static_cast<double>(i) * static_cast<double>(n - 1) / static_cast<double>(max_points - 1);
    out.push_back(points[static_cast<std::size_t>(std::llround(pos))]);
  }
  return out;
}

ReviewService::ReviewService(const ServiceOptions & options)
: clock_(options.clock ? options.clock : std::function<std::string()>(utc_now))
{
  std::ifstream in(options.queue_path);
  if (!in) throw ParseError("cannot open review queue " + options.queue_path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error & e) {
    throw ParseError("review queue " + options.queue_path + ": " + e.what());
  }
  log_ = std::make_unique<fusion::LabelLog>(options.labels_path);
  warnings_ = log_->load_warnings();

  for (auto & entry : fusion::queue_from_json(doc)) {
    if (queue_index_.count(entry.clip_id)) continue;
    if (!log_->find(entry.clip_id)) {
      warnings_.push_back("queued clip " + entry.clip_id + " has no label record; ignored");
      continue;
    }
    queue_index_[entry.clip_id] = queue_.size();
    queue_.push_back(std::move(entry));
  }

  if (!options.corpus_path.empty()) {
    const auto thresholds = options.thresholds_path.empty()
                              ? ThresholdSet::defaults()
                              : load_thresholds(options.thresholds_path);
    for (auto & line : read_corpus_file(options.corpus_path)) {
      if (!line.ok()) continue;
      auto & clip = std::get<DecodedClip>(line.entry).clip;
      if (!queue_index_.count(clip.id()) || clips_.count(clip.id())) continue;
      ClipInfo info;
      try {
        const auto feats = kinematics::extract_features(clip, thresholds);
        info.decision = rules::classify(clip.context, feats, thresholds);
      } catch (const std::exception & e) {
        warnings_.push_back("clip " + clip.id() + ": features unavailable (" + e.what() + ")");
      }
      info.clip = std::move(clip);
      clips_.emplace(info.clip.id(), std::move(info));
    }
  }
  for (const auto & w : warnings_) spdlog::warn("review: {}", w);
}

bool ReviewService::pending(const fusion::LabelRecord & record) const
{
  return record.provenance != fusion::Provenance::HumanVerified;
}

json ReviewService::item_json(const fusion::QueueEntry & entry, const fusion::LabelRecord & record) const
{
  json item = {
    {"clip_id", entry.clip_id},
    {"severity", entry.severity},
    {"reasons", entry.reasons},
    {"rule_label", to_string(record.rule_label)},
    {"external_label", optional_label(record.external_label)},
    {"fused_label", optional_label(record.fused_label)},
    {"final_label", to_string(record.final_label)},
    {"provenance", to_string(record.provenance)},
    {"features", nullptr},
    {"fired_rules", json::array()},
    {"polyline", json::array()},
    {"agents", json::array()},
  };
  const auto it = clips_.find(entry.clip_id);
  if (it == clips_.end()) return item;
  const auto & info = it->second;
  if (!info.decision.fired_rules.empty()) {
    item["features"] = rules::features_to_json(info.decision.features_used);
    item["fired_rules"] = info.decision.fired_rules;
  }
  item["polyline"] = points_json(downsample(ego_points(info.clip), kMaxPolylinePoints));
  for (const auto & agent : info.clip.agents) {
    std::vector<Point2> pts;
    for (const auto & s : agent.states) pts.push_back({s.x, s.y});
    item["agents"].push_back(
      {{"agent_id", agent.agent_id},
       {"kind", to_string(agent.kind)},
       {"positions", points_json(downsample(pts, kMaxPolylinePoints))}});
  }
  return item;
}

Response ReviewService::get_queue(std::size_t offset, std::size_t limit) const
{
  const auto snapshot = log_->snapshot();
  std::vector<std::pair<const fusion::QueueEntry *, const fusion::LabelRecord *>> open;
  for (const auto & entry : queue_) {
    const auto & record = snapshot.at(entry.clip_id);
    if (pending(record)) open.emplace_back(&entry, &record);
  }
  json items = json::array();
  for (std::size_t i = offset; i < open.size() && i - offset < limit; ++i) {
    items.push_back(item_json(*open[i].first, *open[i].second));
  }
  return {200, {{"offset", offset}, {"limit", limit}, {"total", open.size()}, {"items", items}}};
}

Response ReviewService::get_clip(const std::string & clip_id) const
{
  const auto q = queue_index_.find(clip_id);
  if (q == queue_index_.end()) return error(404, "unknown clip " + clip_id);
  const auto record = log_->find(clip_id);
  json body = item_json(queue_[q->second], *record);
  body["record"] = fusion::record_to_json(*record);
  body["pending"] = pending(*record);
  const auto it = clips_.find(clip_id);
  body["clip"] = it == clips_.end() ? json(nullptr) : clip_to_json(it->second.clip);
  return {200, body};
}

Response ReviewService::post_verdict(const std::string & clip_id, const std::string & body)
{
  if (!queue_index_.count(clip_id)) return error(404, "clip " + clip_id + " is not in the review queue");
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error &) {
    return error(400, "request body must be JSON");
  }
  if (!doc.is_object()) return error(400, "request body must be a JSON object");
  const auto label_it = doc.find("label");
  std::optional<StyleLabel> label;
  if (label_it != doc.end() && label_it->is_string()) label = parse_style_label(label_it->get<std::string>());
  if (!label) return error(422, "label must be one of A, N, C");
  std::string reviewer = "anonymous";
  if (const auto r = doc.find("reviewer"); r != doc.end() && r->is_string() && !r->get<std::string>().empty()) {
    reviewer = r->get<std::string>();
  }
  try {
    const auto updated = log_->apply_verdict(clip_id, *label, reviewer, clock_());
    return {200, fusion::record_to_json(updated)};
  } catch (const Conflict & e) {
    return error(409, e.what());
  } catch (const NotFound & e) {
    return error(404, e.what());
  }
}

Response ReviewService::get_stats() const
{
  const auto snapshot = log_->snapshot();
  std::size_t pending_count = 0;
  for (const auto & entry : queue_) {
    if (pending(snapshot.at(entry.clip_id))) ++pending_count;
  }
  std::size_t verdicted = 0;
  std::size_t agree = 0;
  std::map<std::string, std::size_t> histogram{{"A", 0}, {"N", 0}, {"C", 0}};
  for (const auto & [id, record] : snapshot) {
    if (record.provenance != fusion::Provenance::HumanVerified || !record.human_label) continue;
    ++verdicted;
    ++histogram[std::string(to_string(*record.human_label))];
    if (*record.human_label == record.rule_label) ++agree;
  }
  const double rate = verdicted ? static_cast<double>(agree) / static_cast<double>(verdicted) : 0.0;
  return {
    200,
    {{"pending", pending_count},
     {"verdicted", verdicted},
     {"histogram", histogram},
     {"agreement_rate", rate}}};
}

struct ReviewServer::Impl
{
  httplib::Server server;
};

namespace
{
void reply(httplib::Response & res, const Response & r)
{
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json");
}

bool parse_count(const httplib::Request & req, const char * key, std::size_t & out)
{
  if (!req.has_param(key)) return true;
  const auto text = req.get_param_value(key);
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) return false;
  try {
    out = std::stoull(text);
  } catch (const std::exception &) {
    return false;
  }
  return true;
}
}  // namespace

ReviewServer::ReviewServer(ReviewService & service, const std::string & static_dir)
: impl_(std::make_unique<Impl>())
{
  auto & s = impl_->server;
  s.Get("/api/queue", [&service](const httplib::Request & req, httplib::Response & res) {
    std::size_t offset = 0;
    std::size_t limit = kDefaultPageLimit;
    if (!parse_count(req, "offset", offset) || !parse_count(req, "limit", limit)) {
      reply(res, error(400, "offset and limit must be non-negative integers"));
      return;
    }
    reply(res, service.get_queue(offset, limit));
  });
  s.Get(R"(/api/clips/([^/]+))", [&service](const httplib::Request & req, httplib::Response & res) {
    reply(res, service.get_clip(req.matches[1]));
  });
  s.Post(
    R"(/api/clips/([^/]+)/verdict)", [&service](const httplib::Request & req, httplib::Response & res) {
      reply(res, service.post_verdict(req.matches[1], req.body));
    });
  s.Get("/api/stats", [&service](const httplib::Request &, httplib::Response & res) {
    reply(res, service.get_stats());
  });
  if (!static_dir.empty()) {
    if (std::filesystem::is_directory(static_dir)) {
      s.set_mount_point("/", static_dir);
    } else {
      spdlog::warn("static directory {} not found; UI disabled", static_dir);
    }
  }
  s.set_exception_handler([](const httplib::Request &, httplib::Response & res, std::exception_ptr ep) {
    std::string what = "internal error";
    try {
      if (ep) std::rethrow_exception(ep);
    } catch (const std::exception & e) {
      what = e.what();
    } catch (...) {
    }
    spdlog::error("request failed: {}", what);
    reply(res, error(500, what));
  });
}

ReviewServer::~ReviewServer() = default;

int ReviewServer::bind(const std::string & host, int port)
{
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool ReviewServer::listen() { return impl_->server.listen_after_bind(); }

void ReviewServer::stop() { impl_->server.stop(); }

}  // namespace stylebench::review
