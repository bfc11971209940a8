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

#ifndef SMOS_KITTI_IO_HPP_
#define SMOS_KITTI_IO_HPP_

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smos/error.hpp"
#include "smos/trajectory.hpp"
#include "smos/types.hpp"

namespace smos
{

/// One line of a KITTI tracking label file. Field order in the file:
///   frame track_id type truncated occluded alpha
///   bbox_left bbox_top bbox_right bbox_bottom
///   height width length x y z rotation_y [score]
/// Location is the bottom center of the 3D box in camera coordinates
/// (x right, y down, z forward).
struct ObservationRecord
{
  int frame = 0;
  TrackId track_id = 0;
  RoadUserClass cls = RoadUserClass::Ignored;
  std::string raw_class;  // original label text, kept for serialization
  double truncated = 0.0;
  int occluded = 0;
  double alpha = 0.0;
  std::array<double, 4> bbox2d{};  // left, top, right, bottom (pixels)
  double height = 0.0;             // meters
  double width = 0.0;
  double length = 0.0;
  std::array<double, 3> location{};  // camera x, y, z (meters)
  double rotation_y = 0.0;           // radians
  std::optional<double> score;       // trailing confidence, tracker outputs only

  friend bool operator==(const ObservationRecord &, const ObservationRecord &) = default;
};

/// Rigid planar pose mapping camera-frame ground-plane points to a static
/// world frame: p_world = R(heading) * p_camera + (x, z).
struct EgoPose
{
  int frame = 0;
  double x = 0.0;
  double z = 0.0;
  double heading = 0.0;  // radians, normalized to (-pi, pi]
};

/// Parses a KITTI tracking label file (17 fields per line, or 18 with a
/// trailing score). Unknown class labels map to RoadUserClass::Ignored and
/// are kept in the output. Empty input yields an empty list; a malformed
/// line raises ParseError with its 1-based line number.
std::vector<ObservationRecord> parse_tracking_labels(std::string_view text);

/// Inverse of parse_tracking_labels; numbers are written in the shortest
/// form that round-trips exactly, so parse(serialize(parse(x))) == parse(x).
std::string serialize_tracking_labels(std::span<const ObservationRecord> records);

/// Ego-pose file: either whitespace-separated lines "frame x z heading" or a
/// JSON array of {"frame":..,"x":..,"z":..,"heading":..} objects. At most one
/// pose per frame; headings are normalized on load.
std::vector<EgoPose> parse_ego_poses(std::string_view text);

std::map<int, EgoPose> pose_map(std::span<const EgoPose> poses);

/// Ground-plane projection of a 3D camera-frame record. Requires an analyzed
/// class and positive width/length; throws std::invalid_argument otherwise.
BevState to_bev(const ObservationRecord & record);

/// Applies a camera-to-world pose to a BEV state (position rotated and
/// translated, yaw incremented and renormalized). The pose heading rotates
/// with the same convention as box yaw (rotate_kitti), which keeps box
/// footprints rigid under the transform. Throws on a frame mismatch.
BevState apply_ego_pose(const BevState & state, const EgoPose & pose);

struct EgoConfig
{
  double length = 4.5;  // meters
  double width = 1.8;
  Vec2 offset;  // box center in camera-frame ground coordinates
};

/// Synthesizes the ego-vehicle trajectory for the given frames. Without
/// poses the ego occupies a fixed box at the configured camera-frame offset,
/// facing +z; with poses the states follow the poses in the world frame.
/// The trajectory carries kEgoTrackId. Throws on an empty frame list or a
/// frame with no pose when poses are supplied.
Trajectory make_ego_trajectory(
  std::span<const int> frames, const std::map<int, EgoPose> * poses = nullptr,
  const EgoConfig & ego = {});

}  // namespace smos

#endif  // SMOS_KITTI_IO_HPP_
