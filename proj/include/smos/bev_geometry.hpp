// Copyright 2026 The smos Authors
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

#ifndef SMOS_BEV_GEOMETRY_HPP_
#define SMOS_BEV_GEOMETRY_HPP_

#include <array>
#include <optional>

#include "smos/types.hpp"

namespace smos
{

/// Oriented rectangle on the ground plane.
struct BevBox
{
  Vec2 center;
  double yaw = 0.0;     // radians, KITTI rotation_y convention
  double length = 0.0;  // extent along the yaw axis
  double width = 0.0;
};

/// Radius of the smallest circle around the box center containing the box.
inline double circumradius(const BevBox & box)
{
  return 0.5 * std::hypot(box.length, box.width);
}

/// The four corners, counter-clockwise, from rotating (+-length/2, +-width/2)
/// by yaw and translating by center.
std::array<Vec2, 4> corners(const BevBox & box);

/// Separating-axis test over the four edge normals. Rectangles are closed
/// sets: touching boundaries count as overlap.
bool overlap(const BevBox & a, const BevBox & b);

/// Footprint of `state` after t seconds of constant-velocity motion. Yaw and
/// dimensions are held fixed. Throws std::invalid_argument if the velocity is
/// unset or t < 0.
BevBox extrapolate(const BevState & state, double t);

BevBox footprint(const BevState & state);

struct TtcConfig
{
  double horizon = 10.0;  // seconds, TTC search cap
  double dt = 0.1;        // seconds, search grid resolution

  bool valid() const { return dt > 0.0 && dt <= horizon; }
};

/// Time-to-collision between two road users observed at the same frame: the
/// smallest t in {0, dt, 2*dt, ..., horizon} at which the extrapolated BEV
/// boxes overlap, or nullopt when the pair is not on a collision course
/// within the horizon. Both states need velocities; throws
/// std::invalid_argument on a frame mismatch or missing velocity.
std::optional<double> ttc(const BevState & a, const BevState & b, const TtcConfig & cfg = {});

}  // namespace smos

#endif  // SMOS_BEV_GEOMETRY_HPP_
