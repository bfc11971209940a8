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

#include "smos/bev_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace smos
{

std::array<Vec2, 4> corners(const BevBox & box)
{
  const double hl = 0.5 * box.length;
  const double hw = 0.5 * box.width;
  // Counter-clockwise in the local frame; rotate_kitti preserves orientation.
  const std::array<Vec2, 4> local = {Vec2{hl, hw}, Vec2{-hl, hw}, Vec2{-hl, -hw}, Vec2{hl, -hw}};
  std::array<Vec2, 4> out;
  for (std::size_t i = 0; i < 4; ++i) {
    out[i] = box.center + rotate_kitti(local[i], box.yaw);
  }
  return out;
}

namespace
{

struct Interval
{
  double lo;
  double hi;
};

Interval project(const std::array<Vec2, 4> & pts, Vec2 axis)
{
  double lo = dot(pts[0], axis);
  double hi = lo;
  for (std::size_t i = 1; i < 4; ++i) {
    const double t = dot(pts[i], axis);
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  return {lo, hi};
}

// Edge normals of an oriented rectangle: its two local axes.
std::array<Vec2, 2> box_axes(const BevBox & box)
{
  return {rotate_kitti({1.0, 0.0}, box.yaw), rotate_kitti({0.0, 1.0}, box.yaw)};
}

}  // namespace

bool overlap(const BevBox & a, const BevBox & b)
{
  const auto ca = corners(a);
  const auto cb = corners(b);
  const auto axes_a = box_axes(a);
  const auto axes_b = box_axes(b);
  const std::array<Vec2, 4> axes = {axes_a[0], axes_a[1], axes_b[0], axes_b[1]};
  for (const Vec2 & axis : axes) {
    const Interval ia = project(ca, axis);
    const Interval ib = project(cb, axis);
    // Strict inequality: touching projections are not a separation.
    if (ia.hi < ib.lo || ib.hi < ia.lo) {
      return false;
    }
  }
  return true;
}

BevBox footprint(const BevState & state)
{
  return BevBox{state.position, state.yaw, state.length, state.width};
}

BevBox extrapolate(const BevState & state, double t)
{
  if (!state.velocity.has_value()) {
    throw std::invalid_argument("extrapolate: state has no velocity");
  }
  if (t < 0.0) {
    throw std::invalid_argument("extrapolate: negative time");
  }
  BevBox box = footprint(state);
  box.center = box.center + *state.velocity * t;
  return box;
}

std::optional<double> ttc(const BevState & a, const BevState & b, const TtcConfig & cfg)
{
  if (a.frame != b.frame) {
    throw std::invalid_argument("ttc: states are from different frames");
  }
  if (!a.velocity.has_value() || !b.velocity.has_value()) {
    throw std::invalid_argument("ttc: both states need velocities");
  }
  if (!cfg.valid()) {
    throw std::invalid_argument("ttc: invalid config (need 0 < dt <= horizon)");
  }

  const Vec2 dp = b.position - a.position;
  const Vec2 dv = *b.velocity - *a.velocity;
  const double reach = circumradius(footprint(a)) + circumradius(footprint(b));

  // Boxes can only overlap while the center distance is within `reach`, so
  // restrict the grid search to the window where |dp + dv*t| <= reach.
  const int last_step = static_cast<int>(std::floor(cfg.horizon / cfg.dt + 1e-9));
  int k_begin = 0;
  int k_end = last_step;

  const double a2 = squared_norm(dv);
  if (a2 < 1e-24) {
    // Zero relative velocity (below 1e-12 m/s): the configuration never
    // changes, so only t = 0 can overlap.
    if (overlap(footprint(a), footprint(b))) {
      return 0.0;
    }
    return std::nullopt;
  }

  const double b1 = dot(dp, dv);
  const double c0 = squared_norm(dp) - reach * reach;
  const double disc = b1 * b1 - a2 * c0;
  if (disc < 0.0) {
    return std::nullopt;  // centers never come within reach
  }
  const double sq = std::sqrt(disc);
  constexpr double kPad = 1e-7;  // absorbs rounding at the window edges
  const double t_enter = (-b1 - sq) / a2 - kPad;
  const double t_exit = (-b1 + sq) / a2 + kPad;
  if (t_exit < 0.0 || t_enter > cfg.horizon) {
    return std::nullopt;
  }
  if (t_enter > 0.0) {
    k_begin = static_cast<int>(std::ceil(t_enter / cfg.dt));
  }
  k_end = std::min(k_end, static_cast<int>(std::floor(t_exit / cfg.dt)));

  for (int k = k_begin; k <= k_end; ++k) {
    const double t = k * cfg.dt;
    if (overlap(extrapolate(a, t), extrapolate(b, t))) {
      return t;
    }
  }
  return std::nullopt;
}

}  // namespace smos
