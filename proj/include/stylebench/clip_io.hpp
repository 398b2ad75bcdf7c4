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

#ifndef STYLEBENCH__CLIP_IO_HPP_
#define STYLEBENCH__CLIP_IO_HPP_

#include "stylebench/types.hpp"

#include <json.hpp>

#include <istream>
#include <string>
#include <variant>
#include <vector>

namespace stylebench
{

struct DecodedClip
{
  Clip clip;
  std::vector<std::string> warnings;
};

/// Decodes one clip document. Samples given with "velocity_frame": "world"
/// are rotated into the body frame. Unknown fields become warnings; missing
/// or mistyped required fields throw ParseError.
DecodedClip clip_from_json(const nlohmann::json & doc);
DecodedClip parse_clip(const std::string & text);

/// Encodes a clip in body-frame form.
nlohmann::json clip_to_json(const Clip & clip);

/// One line of a newline-delimited corpus.
struct CorpusLine
{
  std::size_t line_number{0};  // 1-based
  std::variant<DecodedClip, std::string> entry;  // clip or decode error

  bool ok() const { return std::holds_alternative<DecodedClip>(entry); }
};

/// Reads every non-blank line. Decode failures are returned, not thrown.
std::vector<CorpusLine> read_corpus(std::istream & in);

/// Throws ParseError when the file cannot be opened.
std::vector<CorpusLine> read_corpus_file(const std::string & path);

}  // namespace stylebench

#endif  // STYLEBENCH__CLIP_IO_HPP_
