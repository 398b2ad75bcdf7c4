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

#include "stylebench/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stylebench::geometry
{

double wrap_angle(double angle)
{
  double wrapped = std::remainder(angle, 2.0 * kPi);
  // remainder() yields [-pi, pi]; -pi belongs to the other end of the range
  if (wrapped <= -kPi) wrapped += 2.0 * kPi;
  return wrapped;
}

std::array<Point2, 4> OrientedBox::corners() const
{
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  const double lx = half_length * c;
  const double ly = half_length * s;
  const double wx = -half_width * s;
  const double wy = half_width * c;
  return {{
    {center.x + lx + wx, center.y + ly + wy},
    {center.x - lx + wx, center.y - ly + wy},
    {center.x - lx - wx, center.y - ly - wy},
    {center.x + lx - wx, center.y + ly - wy},
  }};
}

namespace
{
// Projection interval of box onto axis (ax, ay), computed from the box
// parameterisation rather than its corners.
std::pair<double, double> project(const OrientedBox & box, double ax, double ay)
{
  const double c = std::cos(box.yaw);
  const double s = std::sin(box.yaw);
  const double centre = box.center.x * ax + box.center.y * ay;
  const double radius = box.half_length * std::abs(c * ax + s * ay) +
                        box.half_width * std::abs(-s * ax + c * ay);
  return {centre - radius, centre + radius};
}
}  // namespace

bool boxes_overlap(const OrientedBox & a, const OrientedBox & b)
{
  const std::array<std::pair<double, double>, 4> axes{{
    {std::cos(a.yaw), std::sin(a.yaw)},
    {-std::sin(a.yaw), std::cos(a.yaw)},
    {std::cos(b.yaw), std::sin(b.yaw)},
    {-std::sin(b.yaw), std::cos(b.yaw)},
  }};
  for (const auto & [ax, ay] : axes) {
    const auto [a_min, a_max] = project(a, ax, ay);
    const auto [b_min, b_max] = project(b, ax, ay);
    if (a_max < b_min || b_max < a_min) return false;
  }
  return true;
}

namespace
{
bool on_segment(const Point2 & p, const Point2 & a, const Point2 & b)
{
  const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
  const double scale = std::max({std::abs(b.x - a.x), std::abs(b.y - a.y), 1.0});
  if (std::abs(cross) > 1e-12 * scale * scale) return false;
  return p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) && p.y >= std::min(a.y, b.y) &&
         p.y <= std::max(a.y, b.y);
}
}  // namespace

bool point_in_polygon(const Point2 & p, const Polygon & polygon)
{
  if (polygon.size() < 3) {
    throw InvalidInput("polygon needs at least 3 vertices");
  }
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 & a = polygon[i];
    const Point2 & b = polygon[j];
    if (on_segment(p, a, b)) return true;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

Point2 to_local_frame(const Point2 & p, const Point2 & origin, double yaw)
{
  const double dx = p.x - origin.x;
  const double dy = p.y - origin.y;
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  return {c * dx + s * dy, -s * dx + c * dy};
}

}  // namespace stylebench::geometry
