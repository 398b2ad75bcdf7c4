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

#ifndef STYLEBENCH__LABEL_LOG_HPP_
#define STYLEBENCH__LABEL_LOG_HPP_

#include "stylebench/fusion.hpp"

#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

namespace stylebench::fusion
{

/// One serialized record per line, terminated by '\n'.
std::string record_line(const LabelRecord & record);

struct LogContents
{
  std::vector<LabelRecord> entries;  // file order
  std::vector<std::string> warnings;
};

/// Parses a label log. Unparseable lines (typically a torn final line after
/// a crash) are skipped and reported in `warnings`. A missing file yields an
/// empty log.
LogContents read_label_log(const std::string & path);

/// Last entry per clip_id wins.
std::map<std::string, LabelRecord> snapshot_of(std::span<const LabelRecord> entries);

/// Append-only newline-delimited label log with an in-memory snapshot.
/// Readers share a lock; appends are serialized and flushed line by line.
class LabelLog
{
public:
  explicit LabelLog(std::string path);

  LabelLog(const LabelLog &) = delete;
  LabelLog & operator=(const LabelLog &) = delete;

  const std::string & path() const { return path_; }
  const std::vector<std::string> & load_warnings() const { return load_warnings_; }

  void append(const LabelRecord & record);

  std::optional<LabelRecord> find(const std::string & clip_id) const;
  std::map<std::string, LabelRecord> snapshot() const;
  std::size_t entry_count() const;

  /// Looks up the latest record, applies the verdict, and appends the
  /// verified record as one atomic step. Throws NotFound for an unknown clip
  /// and Conflict when the clip is already human verified.
  LabelRecord apply_verdict(
    const std::string & clip_id, StyleLabel verdict, const std::string & reviewer,
    const std::string & at);

  /// Writes the snapshot as a JSON array ordered by clip_id.
  void write_snapshot(const std::string & snapshot_path) const;

private:
  void append_locked(const LabelRecord & record);

  std::string path_;
  std::vector<std::string> load_warnings_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, LabelRecord> latest_;
  std::size_t entries_{0};
  std::ofstream out_;
};

}  // namespace stylebench::fusion

#endif  // STYLEBENCH__LABEL_LOG_HPP_
