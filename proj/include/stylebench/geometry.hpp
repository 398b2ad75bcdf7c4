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

#ifndef STYLEBENCH__GEOMETRY_HPP_
#define STYLEBENCH__GEOMETRY_HPP_

#include "stylebench/types.hpp"

#include <array>

namespace stylebench::geometry
{

constexpr double kPi = 3.14159265358979323846;

/// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

struct OrientedBox
{
  Point2 center;
  double yaw{0.0};
  double half_length{0.0};
  double half_width{0.0};

  std::array<Point2, 4> corners() const;
};

/// Separating-axis test on the four box edge normals. Boxes that only touch
/// (zero separation) are reported as overlapping.
bool boxes_overlap(const OrientedBox & a, const OrientedBox & b);

/// Even-odd test with the boundary counted as inside. Throws InvalidInput for
/// polygons with fewer than 3 vertices.
bool point_in_polygon(const Point2 & p, const Polygon & polygon);

/// Position of `p` relative to a pose, expressed in the pose's frame
/// (x forward, y left).
Point2 to_local_frame(const Point2 & p, const Point2 & origin, double yaw);

}  // namespace stylebench::geometry

#endif  // STYLEBENCH__GEOMETRY_HPP_
