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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "smos/kitti_io.hpp"

using namespace smos;

namespace
{

ObservationRecord random_record(std::mt19937 & rng)
{
  std::uniform_real_distribution<double> pos(-40.0, 40.0);
  std::uniform_real_distribution<double> dim(0.3, 5.0);
  std::uniform_real_distribution<double> angle(-3.1, 3.1);
  std::uniform_int_distribution<int> frame(0, 400);
  std::uniform_int_distribution<int> id(0, 50);
  std::uniform_int_distribution<int> cls(0, 4);

  ObservationRecord rec;
  rec.frame = frame(rng);
  rec.track_id = id(rng);
  switch (cls(rng)) {
    case 0:
      rec.raw_class = "Car";
      break;
    case 1:
      rec.raw_class = "Pedestrian";
      break;
    case 2:
      rec.raw_class = "Cyclist";
      break;
    case 3:
      rec.raw_class = "Van";
      break;
    default:
      rec.raw_class = "DontCare";
      break;
  }
  rec.cls = road_user_class_from_label(rec.raw_class);
  rec.truncated = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  rec.occluded = std::uniform_int_distribution<int>(-1, 3)(rng);
  rec.alpha = angle(rng);
  const double left = std::uniform_real_distribution<double>(0.0, 600.0)(rng);
  const double top = std::uniform_real_distribution<double>(0.0, 300.0)(rng);
  rec.bbox2d = {left, top, left + dim(rng) * 40.0, top + dim(rng) * 30.0};
  rec.height = dim(rng);
  rec.width = dim(rng);
  rec.length = dim(rng);
  rec.location = {pos(rng), std::uniform_real_distribution<double>(0.5, 2.5)(rng), pos(rng) + 50.0};
  rec.rotation_y = angle(rng);
  if (std::uniform_int_distribution<int>(0, 1)(rng) == 1) {
    rec.score = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  }
  return rec;
}

}  // namespace

TEST_CASE("parse_tracking_labels reads a ground-truth style line")
{
  const auto records = parse_tracking_labels(
    "0 1 Car 0 0 -1.57 100 150 300 250 1.5 1.8 4.0 2.0 1.0 15.0 -1.57\n");
  REQUIRE(records.size() == 1);
  const ObservationRecord & rec = records[0];
  CHECK(rec.frame == 0);
  CHECK(rec.track_id == 1);
  CHECK(rec.cls == RoadUserClass::Car);
  CHECK(rec.height == 1.5);
  CHECK(rec.width == 1.8);
  CHECK(rec.length == 4.0);
  CHECK(rec.location[0] == 2.0);
  CHECK(rec.location[1] == 1.0);
  CHECK(rec.location[2] == 15.0);
  CHECK(rec.rotation_y == -1.57);
  CHECK_FALSE(rec.score.has_value());
}

TEST_CASE("parse_tracking_labels keeps a trailing score")
{
  const auto records = parse_tracking_labels(
    "3 7 Pedestrian 0 0 0.5 10 20 30 60 1.7 0.6 0.8 1.0 1.6 8.0 0.2 0.9371\n");
  REQUIRE(records.size() == 1);
  CHECK(records[0].score == doctest::Approx(0.9371));
}

TEST_CASE("unknown class labels map to Ignored but stay in the output")
{
  const auto records = parse_tracking_labels(
    "0 -1 DontCare 0 0 -10 10 20 30 40 -1 -1 -1 -1000 -1000 -1000 -10\n"
    "1 4 Van 0 0 0.1 10 20 30 40 2.0 1.9 5.5 3.0 1.4 22.0 0.3\n");
  REQUIRE(records.size() == 2);
  CHECK(records[0].cls == RoadUserClass::Ignored);
  CHECK(records[0].raw_class == "DontCare");
  CHECK(records[1].cls == RoadUserClass::Ignored);
  CHECK(records[1].raw_class == "Van");
}

TEST_CASE("malformed lines raise ParseError with the line number")
{
  SUBCASE("wrong field count")
  {
    const char * text =
      "0 1 Car 0 0 -1.57 100 150 300 250 1.5 1.8 4.0 2.0 1.0 15.0 -1.57\n"
      "1 1 Car 0 0 -1.57 100 150 300 250 1.5 1.8 4.0 2.0 1.0 15.0\n";
    CHECK_THROWS_WITH_AS(parse_tracking_labels(text), doctest::Contains("line 2"), ParseError);
  }
  SUBCASE("non-numeric field")
  {
    CHECK_THROWS_AS(
      parse_tracking_labels("0 1 Car 0 0 abc 100 150 300 250 1.5 1.8 4.0 2.0 1.0 15.0 -1.57\n"),
      ParseError);
  }
  SUBCASE("negative id on an analyzed class")
  {
    CHECK_THROWS_AS(
      parse_tracking_labels("0 -3 Car 0 0 0 100 150 300 250 1.5 1.8 4.0 2.0 1.0 15.0 0\n"),
      ParseError);
  }
}

TEST_CASE("empty input parses to an empty list")
{
  CHECK(parse_tracking_labels("").empty());
  CHECK(parse_tracking_labels("\n\n  \n").empty());
}

TEST_CASE("parse / serialize / parse is a fixed point")
{
  std::mt19937 rng(20260808);
  std::vector<ObservationRecord> records;
  for (int i = 0; i < 300; ++i) {
    records.push_back(random_record(rng));
  }
  const std::string text = serialize_tracking_labels(records);
  const auto parsed = parse_tracking_labels(text);
  REQUIRE(parsed.size() == records.size());
  CHECK(parsed == records);
  // And once more through the serializer to pin the fixed point.
  CHECK(serialize_tracking_labels(parsed) == text);
}

TEST_CASE("to_bev projects the ground plane axes")
{
  ObservationRecord rec;
  rec.cls = RoadUserClass::Car;
  rec.height = 1.5;
  rec.width = 1.8;
  rec.length = 4.0;
  rec.location = {2.0, 1.0, 15.0};
  rec.rotation_y = 0.0;

  const BevState state = to_bev(rec);
  CHECK(state.position.x == 2.0);
  CHECK(state.position.z == 15.0);
  CHECK(state.yaw == 0.0);
  CHECK(state.length == 4.0);
  CHECK(state.width == 1.8);
  CHECK_FALSE(state.velocity.has_value());

  SUBCASE("yaw is normalized to (-pi, pi]")
  {
    rec.rotation_y = -kPi;
    CHECK(to_bev(rec).yaw == doctest::Approx(kPi));
    rec.rotation_y = kPi;
    CHECK(to_bev(rec).yaw == doctest::Approx(kPi));
  }
  SUBCASE("non-positive dimensions are rejected")
  {
    rec.width = 0.0;
    CHECK_THROWS_AS(to_bev(rec), std::invalid_argument);
  }
  SUBCASE("ignored classes are rejected")
  {
    rec.cls = RoadUserClass::Ignored;
    CHECK_THROWS_AS(to_bev(rec), std::invalid_argument);
  }
}

TEST_CASE("to_bev preserves the footprint area")
{
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    ObservationRecord rec = random_record(rng);
    if (!is_analyzed(rec.cls)) {
      continue;
    }
    const BevState state = to_bev(rec);
    CHECK(state.length * state.width == rec.length * rec.width);
  }
}

TEST_CASE("apply_ego_pose")
{
  BevState state;
  state.frame = 3;
  state.position = {1.0, 0.0};
  state.yaw = 0.2;
  state.length = 4.0;
  state.width = 2.0;

  SUBCASE("identity pose leaves the state unchanged")
  {
    const BevState out = apply_ego_pose(state, EgoPose{3, 0.0, 0.0, 0.0});
    CHECK(out.position.x == state.position.x);
    CHECK(out.position.z == state.position.z);
    CHECK(out.yaw == state.yaw);
  }
  SUBCASE("quarter-turn heading rotates the position")
  {
    // rotate_kitti convention: heading pi/2 maps (1, 0) to (0, -1).
    const BevState out = apply_ego_pose(state, EgoPose{3, 0.0, 0.0, kPi / 2.0});
    CHECK(out.position.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(out.position.z == doctest::Approx(-1.0));
    CHECK(out.yaw == doctest::Approx(0.2 + kPi / 2.0));
  }
  SUBCASE("frame mismatch is an error")
  {
    CHECK_THROWS_AS(apply_ego_pose(state, EgoPose{4, 0.0, 0.0, 0.0}), std::invalid_argument);
  }
}

TEST_CASE("apply_ego_pose is an isometry")
{
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> pos(-50.0, 50.0);
  std::uniform_real_distribution<double> angle(-3.1, 3.1);
  for (int i = 0; i < 500; ++i) {
    BevState a, b;
    a.frame = b.frame = i;
    a.position = {pos(rng), pos(rng)};
    b.position = {pos(rng), pos(rng)};
    a.length = b.length = 4.0;
    a.width = b.width = 2.0;
    const EgoPose pose{i, pos(rng), pos(rng), angle(rng)};
    const double before = norm(a.position - b.position);
    const double after = norm(apply_ego_pose(a, pose).position - apply_ego_pose(b, pose).position);
    CHECK(std::abs(before - after) < 1e-9);
  }
}

TEST_CASE("ego pose files parse from text and JSON")
{
  const char * text = "0 1.5 2.5 0.1\n1 1.6 2.6 0.2\n";
  const auto from_text = parse_ego_poses(text);
  REQUIRE(from_text.size() == 2);
  CHECK(from_text[1].frame == 1);
  CHECK(from_text[1].x == 1.6);

  const char * json = R"([{"frame":0,"x":1.5,"z":2.5,"heading":0.1},
                          {"frame":1,"x":1.6,"z":2.6,"heading":0.2}])";
  const auto from_json = parse_ego_poses(json);
  REQUIRE(from_json.size() == 2);
  CHECK(from_json[0].x == from_text[0].x);
  CHECK(from_json[1].heading == doctest::Approx(from_text[1].heading));

  SUBCASE("at most one pose per frame")
  {
    const auto poses = parse_ego_poses("0 0 0 0\n0 1 1 1\n");
    CHECK_THROWS_AS(pose_map(poses), std::invalid_argument);
  }
}

TEST_CASE("make_ego_trajectory")
{
  SUBCASE("camera-frame mode repeats a fixed state")
  {
    const std::vector<int> frames = {0, 1, 2};
    const Trajectory ego = make_ego_trajectory(frames, nullptr, EgoConfig{4.5, 1.8, {0.0, 0.0}});
    REQUIRE(ego.states.size() == 3);
    CHECK(ego.track_id == kEgoTrackId);
    for (const BevState & s : ego.states) {
      CHECK(s.position.x == 0.0);
      CHECK(s.position.z == 0.0);
      CHECK(s.length == 4.5);
      CHECK(s.width == 1.8);
    }
  }
  SUBCASE("identity pose keeps the origin offset")
  {
    const std::vector<int> frames = {0};
    std::map<int, EgoPose> poses{{0, EgoPose{0, 0.0, 0.0, 0.0}}};
    const Trajectory ego = make_ego_trajectory(frames, &poses, EgoConfig{4.5, 1.8, {0.5, 1.0}});
    REQUIRE(ego.states.size() == 1);
    CHECK(ego.states[0].position.x == doctest::Approx(0.5));
    CHECK(ego.states[0].position.z == doctest::Approx(1.0));
  }
  SUBCASE("empty frame list is an error")
  {
    CHECK_THROWS_AS(make_ego_trajectory({}, nullptr, EgoConfig{}), std::invalid_argument);
  }
}
