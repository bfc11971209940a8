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

#include "smos/trajectory_post.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace smos
{

TrackIdAllocator TrackIdAllocator::after(std::span<const Trajectory> trajectories)
{
  TrackId max_id = -1;
  for (const Trajectory & traj : trajectories) {
    max_id = std::max(max_id, traj.track_id);
  }
  return TrackIdAllocator(max_id + 1);
}

std::vector<Trajectory> build_trajectories(
  std::span<const ObservationRecord> records, const std::optional<Trajectory> & ego)
{
  std::map<TrackId, Trajectory> by_id;
  for (const ObservationRecord & rec : records) {
    Trajectory & traj = by_id[rec.track_id];
    if (traj.states.empty()) {
      traj.track_id = rec.track_id;
      traj.cls = rec.cls;
    } else if (traj.cls != rec.cls) {
      throw std::runtime_error(
        "track " + std::to_string(rec.track_id) + " changes class at frame " +
        std::to_string(rec.frame));
    }
    traj.states.push_back(to_bev(rec));
  }

  std::vector<Trajectory> out;
  out.reserve(by_id.size() + 1);
  for (auto & [id, traj] : by_id) {
    std::sort(
      traj.states.begin(), traj.states.end(),
      [](const BevState & a, const BevState & b) { return a.frame < b.frame; });
    for (std::size_t i = 1; i < traj.states.size(); ++i) {
      if (traj.states[i].frame == traj.states[i - 1].frame) {
        throw std::runtime_error(
          "duplicate observation for track " + std::to_string(id) + " at frame " +
          std::to_string(traj.states[i].frame));
      }
    }
    out.push_back(std::move(traj));
  }
  if (ego.has_value()) {
    out.push_back(*ego);
  }
  return out;
}

std::vector<Trajectory> split_on_gaps(
  const Trajectory & traj, const PostProcessConfig & cfg, TrackIdAllocator & ids)
{
  std::vector<std::size_t> cut_after;  // index of the last state before each cut
  for (std::size_t i = 1; i < traj.states.size(); ++i) {
    const int gap = traj.states[i].frame - traj.states[i - 1].frame - 1;
    if (gap > cfg.thr_split) {
      cut_after.push_back(i - 1);
    }
  }
  if (cut_after.empty()) {
    return {traj};
  }

  std::vector<Trajectory> segments;
  std::size_t begin = 0;
  auto emit = [&](std::size_t end) {  // [begin, end)
    if (end - begin >= static_cast<std::size_t>(cfg.thr_cons)) {
      Trajectory seg;
      seg.track_id = ids.allocate();
      seg.cls = traj.cls;
      seg.states.assign(traj.states.begin() + begin, traj.states.begin() + end);
      segments.push_back(std::move(seg));
    }
    begin = end;
  };
  for (std::size_t cut : cut_after) {
    emit(cut + 1);
  }
  emit(traj.states.size());
  return segments;
}

namespace
{

double lerp(double a, double b, double t) { return a + (b - a) * t; }

}  // namespace

Trajectory interpolate_gaps(const Trajectory & traj)
{
  if (traj.states.empty()) {
    throw std::invalid_argument("interpolate_gaps: empty trajectory");
  }
  Trajectory out;
  out.track_id = traj.track_id;
  out.cls = traj.cls;
  out.stationary = traj.stationary;
  out.states.reserve(traj.last_frame() - traj.first_frame() + 1);

  out.states.push_back(traj.states.front());
  for (std::size_t i = 1; i < traj.states.size(); ++i) {
    const BevState & prev = traj.states[i - 1];
    const BevState & next = traj.states[i];
    const int span = next.frame - prev.frame;
    const double yaw_delta = normalize_angle(next.yaw - prev.yaw);  // shorter arc
    for (int f = prev.frame + 1; f < next.frame; ++f) {
      const double t = static_cast<double>(f - prev.frame) / span;
      BevState mid;
      mid.frame = f;
      mid.position = {lerp(prev.position.x, next.position.x, t),
                      lerp(prev.position.z, next.position.z, t)};
      mid.yaw = normalize_angle(prev.yaw + yaw_delta * t);
      mid.length = lerp(prev.length, next.length, t);
      mid.width = lerp(prev.width, next.width, t);
      out.states.push_back(mid);
    }
    out.states.push_back(next);
  }
  return out;
}

Trajectory stationary_smooth(const Trajectory & traj, const PostProcessConfig & cfg)
{
  if (traj.states.empty()) {
    throw std::invalid_argument("stationary_smooth: empty trajectory");
  }
  const Vec2 first = traj.states.front().position;
  const Vec2 last = traj.states.back().position;
  Trajectory out = traj;
  if (std::abs(last.x - first.x) >= cfg.thr_sta || std::abs(last.z - first.z) >= cfg.thr_sta) {
    out.stationary = false;
    return out;
  }

  // Incremental mean: exact fixed point for already-constant positions,
  // which keeps the smoothing idempotent.
  Vec2 mean;
  double n = 0.0;
  for (const BevState & s : traj.states) {
    n += 1.0;
    mean.x += (s.position.x - mean.x) / n;
    mean.z += (s.position.z - mean.z) / n;
  }
  for (BevState & s : out.states) {
    s.position = mean;
    s.velocity = Vec2{0.0, 0.0};
  }
  out.stationary = true;
  return out;
}

Trajectory estimate_velocities(const Trajectory & traj, const PostProcessConfig & cfg)
{
  if (!traj.contiguous()) {
    throw std::invalid_argument("estimate_velocities: trajectory has frame gaps");
  }
  Trajectory out = traj;
  const int n = static_cast<int>(traj.states.size());
  if (n == 1) {
    out.states[0].velocity = Vec2{0.0, 0.0};
    return out;
  }
  const auto pos = [&](int i) { return traj.states[i].position; };
  for (int i = 0; i < n; ++i) {
    const int wc = std::min({cfg.velocity_window, i, n - 1 - i});
    Vec2 delta;
    double seconds = 0.0;
    if (wc >= 1) {
      delta = pos(i + wc) - pos(i - wc);
      seconds = 2.0 * wc / cfg.fps;
    } else if (i == 0) {
      const int w = std::min(cfg.velocity_window, n - 1);
      delta = pos(w) - pos(0);
      seconds = w / cfg.fps;
    } else {  // i == n - 1
      const int w = std::min(cfg.velocity_window, n - 1);
      delta = pos(n - 1) - pos(n - 1 - w);
      seconds = w / cfg.fps;
    }
    out.states[i].velocity = delta * (1.0 / seconds);
  }
  return out;
}

std::vector<Trajectory> postprocess(
  std::vector<Trajectory> trajectories, const PostVariant & variant, const PostProcessConfig & cfg)
{
  if (!cfg.valid()) {
    throw std::invalid_argument("postprocess: invalid configuration");
  }
  if (variant.idsplit) {
    TrackIdAllocator ids = TrackIdAllocator::after(trajectories);
    std::vector<Trajectory> split;
    split.reserve(trajectories.size());
    for (const Trajectory & traj : trajectories) {
      for (Trajectory & seg : split_on_gaps(traj, cfg, ids)) {
        split.push_back(std::move(seg));
      }
    }
    trajectories = std::move(split);
  }
  for (Trajectory & traj : trajectories) {
    traj = interpolate_gaps(traj);
    if (variant.ss) {
      traj = stationary_smooth(traj, cfg);
    }
    traj = estimate_velocities(traj, cfg);
  }
  return trajectories;
}

}  // namespace smos
