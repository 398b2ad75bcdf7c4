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

#include "stylebench/label_log.hpp"

#include <filesystem>

namespace stylebench::fusion
{

std::string record_line(const LabelRecord & record)
{
  return record_to_json(record).dump() + "\n";
}

LogContents read_label_log(const std::string & path)
{
  LogContents contents;
  std::ifstream in(path);
  if (!in) {
    if (std::filesystem::exists(path)) throw ParseError("cannot open label log " + path);
    return contents;
  }
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      contents.entries.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception & e) {
      contents.warnings.push_back(
        path + ":" + std::to_string(number) + ": skipped unreadable entry (" + e.what() + ")");
    }
  }
  return contents;
}

std::map<std::string, LabelRecord> snapshot_of(std::span<const LabelRecord> entries)
{
  std::map<std::string, LabelRecord> latest;
  for (const auto & e : entries) latest.insert_or_assign(e.clip_id, e);
  return latest;
}

LabelLog::LabelLog(std::string path) : path_(std::move(path))
{
  auto contents = read_label_log(path_);
  load_warnings_ = std::move(contents.warnings);
  entries_ = contents.entries.size();
  latest_ = snapshot_of(contents.entries);

  // A torn final line has no newline; terminate it so the next append starts
  // on a fresh line and stays parseable.
  bool needs_newline = false;
  if (std::filesystem::exists(path_) && std::filesystem::file_size(path_) > 0) {
    std::ifstream tail(path_, std::ios::binary);
    tail.seekg(-1, std::ios::end);
    char last = '\n';
    tail.get(last);
    needs_newline = last != '\n';
  }
  out_.open(path_, std::ios::app | std::ios::binary);
  if (!out_) throw ParseError("cannot open label log " + path_ + " for appending");
  if (needs_newline) out_ << '\n' << std::flush;
}

void LabelLog::append_locked(const LabelRecord & record)
{
  const std::string line = record_line(record);
  out_.write(line.data(), static_cast<std::streamsize>(line.size()));
  out_.flush();
  if (!out_) throw ParseError("write to label log " + path_ + " failed");
  latest_.insert_or_assign(record.clip_id, record);
  ++entries_;
}

void LabelLog::append(const LabelRecord & record)
{
  std::unique_lock lock(mutex_);
  append_locked(record);
}

std::optional<LabelRecord> LabelLog::find(const std::string & clip_id) const
{
  std::shared_lock lock(mutex_);
  const auto it = latest_.find(clip_id);
  if (it == latest_.end()) return std::nullopt;
  return it->second;
}

std::map<std::string, LabelRecord> LabelLog::snapshot() const
{
  std::shared_lock lock(mutex_);
  return latest_;
}

std::size_t LabelLog::entry_count() const
{
  std::shared_lock lock(mutex_);
  return entries_;
}

LabelRecord LabelLog::apply_verdict(
  const std::string & clip_id, StyleLabel verdict, const std::string & reviewer,
  const std::string & at)
{
  std::unique_lock lock(mutex_);
  const auto it = latest_.find(clip_id);
  if (it == latest_.end()) throw NotFound("unknown clip " + clip_id);
  if (it->second.provenance == Provenance::HumanVerified) {
    throw Conflict("clip " + clip_id + " already has a human verdict");
  }
  const LabelRecord updated = apply_human_verdict(it->second, verdict, reviewer, at);
  append_locked(updated);
  return updated;
}

void LabelLog::write_snapshot(const std::string & snapshot_path) const
{
  nlohmann::json doc = nlohmann::json::array();
  {
    std::shared_lock lock(mutex_);
    for (const auto & [id, record] : latest_) doc.push_back(record_to_json(record));
  }
  std::ofstream out(snapshot_path, std::ios::trunc);
  if (!out) throw ParseError("cannot write snapshot " + snapshot_path);
  out << doc.dump(2) << '\n';
}

}  // namespace stylebench::fusion
