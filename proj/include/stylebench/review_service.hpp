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

#ifndef STYLEBENCH__REVIEW_SERVICE_HPP_
#define STYLEBENCH__REVIEW_SERVICE_HPP_

#include "stylebench/fusion.hpp"
#include "stylebench/label_log.hpp"
#include "stylebench/rule_engine.hpp"
#include "stylebench/thresholds.hpp"

#include <json.hpp>

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace stylebench::review
{

/// Default page size of GET /api/queue.
constexpr std::size_t kDefaultPageLimit = 50;
/// Upper bound on polyline points in queue payloads.
constexpr std::size_t kMaxPolylinePoints = 100;

struct Response
{
  int status{200};
  nlohmann::json body;
};

/// Uniform-stride subsample that always keeps the first and last point.
std::vector<Point2> downsample(const std::vector<Point2> & points, std::size_t max_points);

struct ServiceOptions
{
  std::string queue_path;
  std::string labels_path;
  std::string corpus_path;       // optional, enables features and geometry
  std::string thresholds_path;   // optional, used to recompute features
  std::function<std::string()> clock;  // verdict timestamps; UTC now when empty
};

/// Request handling without transport. The queue and the clip cache are
/// immutable after construction; verdicts go through the label log, which
/// serializes writers and guarantees at most one verdict per clip.
class ReviewService
{
public:
  explicit ReviewService(const ServiceOptions & options);

  Response get_queue(std::size_t offset, std::size_t limit) const;
  Response get_clip(const std::string & clip_id) const;
  Response post_verdict(const std::string & clip_id, const std::string & body);
  Response get_stats() const;

  const std::vector<std::string> & load_warnings() const { return warnings_; }

private:
  struct ClipInfo
  {
    Clip clip;
    rules::RuleDecision decision;
  };

  nlohmann::json item_json(const fusion::QueueEntry & entry, const fusion::LabelRecord & record) const;
  bool pending(const fusion::LabelRecord & record) const;

  std::vector<fusion::QueueEntry> queue_;
  std::map<std::string, std::size_t> queue_index_;
  std::map<std::string, ClipInfo> clips_;
  std::unique_ptr<fusion::LabelLog> log_;
  std::function<std::string()> clock_;
  std::vector<std::string> warnings_;
};

/// HTTP front-end: /api routes plus static files under /.
class ReviewServer
{
public:
  ReviewServer(ReviewService & service, const std::string & static_dir);
  ~ReviewServer();

  ReviewServer(const ReviewServer &) = delete;
  ReviewServer & operator=(const ReviewServer &) = delete;

  /// Binds to `port` (0 picks a free one) and returns the bound port, or -1.
  int bind(const std::string & host, int port);
  /// Serves until stop() is called. Call after bind().
  bool listen();
  void stop();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace stylebench::review

#endif  // STYLEBENCH__REVIEW_SERVICE_HPP_
