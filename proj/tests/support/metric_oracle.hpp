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

#ifndef STYLEBENCH__TESTS__METRIC_ORACLE_HPP_
#define STYLEBENCH__TESTS__METRIC_ORACLE_HPP_

#include "stylebench/types.hpp"

#include <optional>
#include <vector>

namespace stylebench::oracle
{

/// Parameters of the brute-force scorer, mirroring the shipped defaults.
struct OracleConfig
{
  double ttc_floor[3]{0.8, 1.0, 1.2};       // A, N, C
  double comfort_factor[3]{1.2, 1.0, 0.8};  // A, N, C
  double alpha{1.2};
  double lon_accel{2.40};
  double lon_decel{4.05};
  double lat_accel{4.89};
  double jerk{8.37};
  double yaw_rate{0.95};
  double w_ttc{5.0};
  double w_comfort{2.0};
  double w_ep{5.0};
  double horizon{4.0};
  double ego_half_length{2.5};
  double ego_half_width{1.0};
};

struct OracleScores
{
  double nc{1.0};
  double dac{1.0};
  double ttc{1.0};
  double comfort{1.0};
  double ep{1.0};
  double sm_pdms{1.0};
  double min_ttc{0.0};
  double ep_agent{0.0};
  double ep_target{0.0};
};

/// Straight-line per-frame re-implementation of the style-modulated score.
/// Shares no code with the library beyond the data types.
OracleScores score(
  const Trajectory & agent, const Trajectory & human, const std::vector<AgentTrack> & agents,
  const std::optional<Polygon> & corridor, StyleLabel style, const OracleConfig & config = {});

}  // namespace stylebench::oracle

#endif  // STYLEBENCH__TESTS__METRIC_ORACLE_HPP_
