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

#include "stylebench/clip_io.hpp"
#include "stylebench/validation.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

namespace stylebench
{
namespace
{
using nlohmann::json;

Clip straight_clip(std::size_t samples = 40)
{
  synthetic::MotionSpec spec;
  spec.clip_id = "straight";
  spec.duration = 0.1 * static_cast<double>(samples - 1);
  spec.v_center = 10.0;
  spec.headway = 2.0;
  return synthetic::build_clip(spec);
}

TEST(ValidateClipTest, WellFormedClipHasNoViolations)
{
  const Clip clip = straight_clip();
  ASSERT_EQ(clip.ego.samples.size(), 40u);
  const auto report = validate_clip(clip);
  EXPECT_TRUE(report.ok()) << report.violations.front().kind;
}

TEST(ValidateClipTest, DuplicatedTimestampIsNonMonotone)
{
  Clip clip = straight_clip();
  clip.ego.samples[10].t = clip.ego.samples[9].t;
  EXPECT_TRUE(validate_clip(clip).has("non-monotone timestamps"));
}

TEST(ValidateClipTest, AgentSampleOffsetBeyondHalfStepIsUnaligned)
{
  Clip clip = straight_clip();
  auto & states = clip.agents.front().states;
  // inside the clip every instant is within dt/2 of a sample, so step past the end
  states.push_back(states.back());
  states.back().t = clip.ego.end_time() + 0.6 * clip.ego.dt_nominal;
  const auto report = validate_clip(clip);
  EXPECT_TRUE(report.has("unaligned agent sample"));
  EXPECT_FALSE(report.has("non-monotone agent timestamps"));
}

TEST(ValidateClipTest, AgentSampleWithinHalfStepIsAligned)
{
  Clip clip = straight_clip();
  for (auto & s : clip.agents.front().states) s.t += 0.4 * clip.ego.dt_nominal;
  EXPECT_FALSE(validate_clip(clip).has("unaligned agent sample"));
}

TEST(ValidateClipTest, ReportsShortClipsAndYawRange)
{
  Clip clip = straight_clip();
  clip.ego.samples[3].yaw = 4.0;
  EXPECT_TRUE(validate_clip(clip).has("yaw out of range"));
  clip.ego.samples.resize(1);
  EXPECT_TRUE(validate_clip(clip).has("too few samples"));
}

TEST(ValidateClipTest, IsIdempotentAndPure)
{
  Clip clip = straight_clip();
  clip.ego.samples[10].t = clip.ego.samples[9].t;
  const Clip before = clip;
  const auto first = validate_clip(clip);
  const auto second = validate_clip(clip);
  EXPECT_EQ(first.violations, second.violations);
  EXPECT_EQ(clip, before);
}

TEST(ClipIoTest, RoundTripIsFieldEqual)
{
  auto corpus = synthetic::generate_corpus(60, 11, "rt");
  for (auto & labeled : corpus) {
    labeled.clip.corridor = synthetic::corridor_around(labeled.clip.ego, 3.0);
    const auto text = clip_to_json(labeled.clip).dump();
    const auto decoded = parse_clip(text);
    EXPECT_TRUE(decoded.warnings.empty());
    EXPECT_EQ(decoded.clip, labeled.clip) << labeled.clip.id();
  }
}

TEST(ClipIoTest, WorldFrameVelocitiesAreRotatedIntoBodyFrame)
{
  Clip clip = straight_clip(5);
  json doc = clip_to_json(clip);
  doc["velocity_frame"] = "world";
  for (auto & s : doc["samples"]) {
    s["yaw"] = M_PI / 2.0;
    s["vx"] = 0.0;
    s["vy"] = 3.0;
    s["ax"] = -1.0;
    s["ay"] = 0.0;
  }
  const auto decoded = clip_from_json(doc);
  for (const auto & s : decoded.clip.ego.samples) {
    EXPECT_NEAR(s.vx, 3.0, 1e-12);
    EXPECT_NEAR(s.vy, 0.0, 1e-12);
    EXPECT_NEAR(s.ax, 0.0, 1e-12);
    EXPECT_NEAR(s.ay, 1.0, 1e-12);
  }
}

TEST(ClipIoTest, UnknownFieldsWarnAndMissingFieldsThrow)
{
  json doc = clip_to_json(straight_clip(5));
  doc["camera"] = "front";
  doc["samples"][0]["lidar"] = 1;
  const auto decoded = clip_from_json(doc);
  EXPECT_EQ(decoded.warnings.size(), 2u);

  json missing = clip_to_json(straight_clip(5));
  missing.erase("context");
  EXPECT_THROW(clip_from_json(missing), ParseError);

  json mistyped = clip_to_json(straight_clip(5));
  mistyped["samples"][0]["vx"] = "fast";
  EXPECT_THROW(clip_from_json(mistyped), ParseError);
}

TEST(ClipIoTest, CorpusReaderReportsBadLinesWithoutThrowing)
{
  std::stringstream in;
  in << clip_to_json(straight_clip(5)).dump() << "\n\n{not json\n" << R"({"clip_id": 3})" << "\n";
  const auto lines = read_corpus(in);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_TRUE(lines[0].ok());
  EXPECT_EQ(lines[0].line_number, 1u);
  EXPECT_FALSE(lines[1].ok());
  EXPECT_EQ(lines[1].line_number, 3u);
  EXPECT_FALSE(lines[2].ok());
  EXPECT_THROW(read_corpus_file("/nonexistent/corpus.ndjson"), ParseError);
}

}  // namespace
}  // namespace stylebench
