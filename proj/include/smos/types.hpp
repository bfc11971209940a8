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

#ifndef SMOS_TYPES_HPP_
#define SMOS_TYPES_HPP_

#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>

namespace smos
{

inline constexpr double kPi = 3.14159265358979323846;

// Ground-plane vector in camera coordinates: x right, z forward.
struct Vec2
{
  double x = 0.0;
  double z = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.z + b.z}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.z - b.z}; }
  friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.z * s}; }
  friend Vec2 operator*(double s, Vec2 a) { return a * s; }
  friend bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.z == b.z; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.z * b.z; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.z); }
inline double squared_norm(Vec2 a) { return a.x * a.x + a.z * a.z; }

/// Normalizes an angle to (-pi, pi]. -pi maps to +pi.
inline double normalize_angle(double a)
{
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) {
    a += 2.0 * kPi;
  } else if (a > kPi) {
    a -= 2.0 * kPi;
  }
  return a;
}

/// Rotates a ground-plane vector by `yaw` using the KITTI devkit convention
/// (rotation about the camera y axis). This is the single place the sign
/// convention lives; box corners and ego poses both go through it.
inline Vec2 rotate_kitti(Vec2 v, double yaw)
{
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  return {v.x * c + v.z * s, -v.x * s + v.z * c};
}

enum class RoadUserClass { Car, Pedestrian, Cyclist, Ignored };

constexpr std::string_view to_string(RoadUserClass c)
{
  switch (c) {
    case RoadUserClass::Car:
      return "Car";
    case RoadUserClass::Pedestrian:
      return "Pedestrian";
    case RoadUserClass::Cyclist:
      return "Cyclist";
    default:
      return "Ignored";
  }
}

/// "Van", "Truck", "Person_sitting", "Tram", "Misc", "DontCare" and any other
/// label map to Ignored; only cars, pedestrians and cyclists are analyzed.
inline RoadUserClass road_user_class_from_label(std::string_view label)
{
  if (label == "Car") return RoadUserClass::Car;
  if (label == "Pedestrian") return RoadUserClass::Pedestrian;
  if (label == "Cyclist") return RoadUserClass::Cyclist;
  return RoadUserClass::Ignored;
}

inline bool is_analyzed(RoadUserClass c) { return c != RoadUserClass::Ignored; }

/// One road user at one frame, projected on the ground plane (BEV).
struct BevState
{
  int frame = 0;
  Vec2 position;        // meters, (x, z) ground plane
  double yaw = 0.0;     // radians in (-pi, pi], KITTI rotation_y convention
  double length = 0.0;  // meters, along the yaw axis
  double width = 0.0;   // meters
  std::optional<Vec2> velocity;  // meters/second; set by estimate_velocities
};

/// Track id reserved for the synthetic ego-vehicle trajectory. KITTI label
/// files only carry non-negative ids for analyzed classes, so -1 cannot
/// collide with a file id.
inline constexpr std::int64_t kEgoTrackId = -1;

using TrackId = std::int64_t;

}  // namespace smos

#endif  // SMOS_TYPES_HPP_
