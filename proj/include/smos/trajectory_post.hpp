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

#ifndef SMOS_TRAJECTORY_POST_HPP_
#define SMOS_TRAJECTORY_POST_HPP_

#include <optional>
#include <span>
#include <vector>

#include "smos/kitti_io.hpp"
#include "smos/trajectory.hpp"

namespace smos
{

struct PostProcessConfig
{
  int thr_split = 10;          // frames: split at temporal gaps larger than this
  int thr_cons = 3;            // frames: split segments shorter than this are dropped
  double thr_sta = 2.0;        // meters: stationary endpoint-displacement threshold
  double fps = 10.0;           // frames per second of the recording
  int velocity_window = 1;     // frames: half-window of the velocity difference

  bool valid() const
  {
    return thr_split > 0 && thr_cons > 0 && thr_sta > 0.0 && fps > 0.0 && velocity_window > 0;
  }
};

/// Hands out track ids that cannot collide with existing ones; used when
/// splitting re-labels trajectory segments.
class TrackIdAllocator
{
public:
  explicit TrackIdAllocator(TrackId first = 0) : next_(first) {}

  static TrackIdAllocator after(std::span<const Trajectory> trajectories);

  TrackId allocate() { return next_++; }

private:
  TrackId next_;
};

/// Groups BEV-projected records into per-track trajectories, states sorted by
/// frame. Ignored-class records must be filtered out beforehand. Throws on a
/// duplicate (frame, track_id) pair or a class change within a track; the
/// message names the collision. The ego trajectory, when given, is appended.
std::vector<Trajectory> build_trajectories(
  std::span<const ObservationRecord> records, const std::optional<Trajectory> & ego = std::nullopt);

/// IDsplit: cuts the trajectory at every temporal gap larger than thr_split
/// (a gap is the count of missing frames between consecutive observations)
/// and drops resulting segments with fewer than thr_cons observed frames.
/// Split segments receive fresh ids from the allocator; a trajectory with no
/// such gap passes through unchanged, id included.
std::vector<Trajectory> split_on_gaps(
  const Trajectory & traj, const PostProcessConfig & cfg, TrackIdAllocator & ids);

/// Fills every missing frame by componentwise linear interpolation of
/// position and dimensions between the flanking observations; yaw follows
/// the shorter circular arc. Observed states are copied bit-identically, so
/// the operation is idempotent.
Trajectory interpolate_gaps(const Trajectory & traj);

/// SS: when the endpoint displacement is below thr_sta on both ground-plane
/// axes, every position becomes the mean position, every velocity (0, 0),
/// and the trajectory is flagged stationary. Otherwise the trajectory is
/// returned unchanged with stationary = false.
Trajectory stationary_smooth(const Trajectory & traj, const PostProcessConfig & cfg);

/// Constant-velocity estimates by central differences over
/// cfg.velocity_window frames; the ends fall back to one-sided differences.
/// A single-state trajectory gets velocity (0, 0). Requires a contiguous
/// trajectory.
Trajectory estimate_velocities(const Trajectory & traj, const PostProcessConfig & cfg);

struct PostVariant
{
  bool idsplit = false;
  bool ss = false;
};

/// Full post-processing pipeline in the fixed order
/// IDsplit -> interpolation -> SS -> velocity estimation. Interpolation and
/// velocity estimation always run; IDsplit and SS follow the variant.
std::vector<Trajectory> postprocess(
  std::vector<Trajectory> trajectories, const PostVariant & variant, const PostProcessConfig & cfg);

}  // namespace smos

#endif  // SMOS_TRAJECTORY_POST_HPP_
