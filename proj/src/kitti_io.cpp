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

#include "smos/kitti_io.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace smos
{

namespace
{

std::vector<std::string_view> split_fields(std::string_view line)
{
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t begin = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > begin) {
      fields.push_back(line.substr(begin, i - begin));
    }
  }
  return fields;
}

double parse_double_field(std::string_view token, std::size_t line, const char * name)
{
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(line, std::string("non-numeric ") + name + " field '" + std::string(token) + "'");
  }
  return value;
}

long long parse_int_field(std::string_view token, std::size_t line, const char * name)
{
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(line, std::string("non-integer ") + name + " field '" + std::string(token) + "'");
  }
  return value;
}

void append_number(std::string & out, double v)
{
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

void append_number(std::string & out, long long v)
{
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace

std::vector<ObservationRecord> parse_tracking_labels(std::string_view text)
{
  std::vector<ObservationRecord> records;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line =
      text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }

    const auto fields = split_fields(line);
    if (fields.empty()) {
      continue;  // blank line
    }
    if (fields.size() != 17 && fields.size() != 18) {
      throw ParseError(
        line_no, "expected 17 or 18 fields, got " + std::to_string(fields.size()));
    }

    ObservationRecord rec;
    const long long frame = parse_int_field(fields[0], line_no, "frame");
    if (frame < 0) {
      throw ParseError(line_no, "negative frame index");
    }
    rec.frame = static_cast<int>(frame);
    rec.track_id = parse_int_field(fields[1], line_no, "track_id");
    rec.raw_class = std::string(fields[2]);
    rec.cls = road_user_class_from_label(fields[2]);
    rec.truncated = parse_double_field(fields[3], line_no, "truncated");
    // Lenient: some tracker outputs write the occlusion flag as a float.
    rec.occluded = static_cast<int>(parse_double_field(fields[4], line_no, "occluded"));
    rec.alpha = parse_double_field(fields[5], line_no, "alpha");
    for (int i = 0; i < 4; ++i) {
      rec.bbox2d[i] = parse_double_field(fields[6 + i], line_no, "bbox");
    }
    rec.height = parse_double_field(fields[10], line_no, "height");
    rec.width = parse_double_field(fields[11], line_no, "width");
    rec.length = parse_double_field(fields[12], line_no, "length");
    for (int i = 0; i < 3; ++i) {
      rec.location[i] = parse_double_field(fields[13 + i], line_no, "location");
    }
    rec.rotation_y = parse_double_field(fields[16], line_no, "rotation_y");
    if (fields.size() == 18) {
      rec.score = parse_double_field(fields[17], line_no, "score");
    }

    if (is_analyzed(rec.cls)) {
      if (rec.track_id < 0) {
        throw ParseError(line_no, "negative track id on analyzed class '" + rec.raw_class + "'");
      }
      if (rec.bbox2d[2] <= rec.bbox2d[0] || rec.bbox2d[3] <= rec.bbox2d[1]) {
        throw ParseError(line_no, "degenerate 2D box on analyzed class '" + rec.raw_class + "'");
      }
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::string serialize_tracking_labels(std::span<const ObservationRecord> records)
{
  std::string out;
  for (const ObservationRecord & rec : records) {
    append_number(out, static_cast<long long>(rec.frame));
    out += ' ';
    append_number(out, static_cast<long long>(rec.track_id));
    out += ' ';
    out += rec.raw_class.empty() ? std::string(to_string(rec.cls)) : rec.raw_class;
    out += ' ';
    append_number(out, rec.truncated);
    out += ' ';
    append_number(out, static_cast<long long>(rec.occluded));
    out += ' ';
    append_number(out, rec.alpha);
    for (double v : rec.bbox2d) {
      out += ' ';
      append_number(out, v);
    }
    out += ' ';
    append_number(out, rec.height);
    out += ' ';
    append_number(out, rec.width);
    out += ' ';
    append_number(out, rec.length);
    for (double v : rec.location) {
      out += ' ';
      append_number(out, v);
    }
    out += ' ';
    append_number(out, rec.rotation_y);
    if (rec.score.has_value()) {
      out += ' ';
      append_number(out, *rec.score);
    }
    out += '\n';
  }
  return out;
}

namespace
{

std::vector<EgoPose> parse_ego_poses_json(std::string_view text)
{
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error & e) {
    throw ParseError(1, std::string("invalid JSON pose file: ") + e.what());
  }
  if (!doc.is_array()) {
    throw ParseError(1, "pose JSON must be an array of objects");
  }
  std::vector<EgoPose> poses;
  poses.reserve(doc.size());
  for (const auto & item : doc) {
    if (!item.is_object() || !item.contains("frame") || !item.contains("x") ||
        !item.contains("z") || !item.contains("heading")) {
      throw ParseError(1, "pose entries need frame, x, z and heading");
    }
    EgoPose pose;
    pose.frame = item.at("frame").get<int>();
    pose.x = item.at("x").get<double>();
    pose.z = item.at("z").get<double>();
    pose.heading = normalize_angle(item.at("heading").get<double>());
    poses.push_back(pose);
  }
  return poses;
}

}  // namespace

std::vector<EgoPose> parse_ego_poses(std::string_view text)
{
  const std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  if (text[first] == '[') {
    return parse_ego_poses_json(text);
  }

  std::vector<EgoPose> poses;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line =
      text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    const auto fields = split_fields(line);
    if (fields.empty()) {
      continue;
    }
    if (fields.size() != 4) {
      throw ParseError(line_no, "expected 4 pose fields (frame x z heading)");
    }
    EgoPose pose;
    pose.frame = static_cast<int>(parse_int_field(fields[0], line_no, "frame"));
    pose.x = parse_double_field(fields[1], line_no, "x");
    pose.z = parse_double_field(fields[2], line_no, "z");
    pose.heading = normalize_angle(parse_double_field(fields[3], line_no, "heading"));
    poses.push_back(pose);
  }
  return poses;
}

std::map<int, EgoPose> pose_map(std::span<const EgoPose> poses)
{
  std::map<int, EgoPose> map;
  for (const EgoPose & pose : poses) {
    if (!map.emplace(pose.frame, pose).second) {
      throw std::invalid_argument(
        "duplicate ego pose for frame " + std::to_string(pose.frame));
    }
  }
  return map;
}

BevState to_bev(const ObservationRecord & record)
{
  if (!is_analyzed(record.cls)) {
    throw std::invalid_argument("to_bev: record class is not analyzed");
  }
  if (record.length <= 0.0 || record.width <= 0.0) {
    throw std::invalid_argument(
      "to_bev: non-positive dimensions for track " + std::to_string(record.track_id) +
      " at frame " + std::to_string(record.frame));
  }
  BevState state;
  state.frame = record.frame;
  state.position = {record.location[0], record.location[2]};
  state.yaw = normalize_angle(record.rotation_y);
  state.length = record.length;
  state.width = record.width;
  return state;
}

BevState apply_ego_pose(const BevState & state, const EgoPose & pose)
{
  if (state.frame != pose.frame) {
    throw std::invalid_argument(
      "apply_ego_pose: pose frame " + std::to_string(pose.frame) +
      " does not match state frame " + std::to_string(state.frame));
  }
  BevState out = state;
  out.position = rotate_kitti(state.position, pose.heading) + Vec2{pose.x, pose.z};
  out.yaw = normalize_angle(state.yaw + pose.heading);
  if (state.velocity.has_value()) {
    out.velocity = rotate_kitti(*state.velocity, pose.heading);
  }
  return out;
}

Trajectory make_ego_trajectory(
  std::span<const int> frames, const std::map<int, EgoPose> * poses, const EgoConfig & ego)
{
  if (frames.empty()) {
    throw std::invalid_argument("make_ego_trajectory: empty frame list");
  }
  std::vector<int> sorted(frames.begin(), frames.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  Trajectory traj;
  traj.track_id = kEgoTrackId;
  traj.cls = RoadUserClass::Car;
  traj.states.reserve(sorted.size());
  for (int frame : sorted) {
    BevState state;
    state.frame = frame;
    state.position = ego.offset;
    state.yaw = normalize_angle(-kPi / 2.0);  // camera z is the ego's forward axis
    state.length = ego.length;
    state.width = ego.width;
    if (poses != nullptr) {
      const auto it = poses->find(frame);
      if (it == poses->end()) {
        throw std::runtime_error("no ego pose for frame " + std::to_string(frame));
      }
      state = apply_ego_pose(state, it->second);
    }
    traj.states.push_back(state);
  }
  return traj;
}

}  // namespace smos
