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

#ifndef SMOS_TRAJECTORY_HPP_
#define SMOS_TRAJECTORY_HPP_

#include <algorithm>
#include <vector>

#include "smos/types.hpp"

namespace smos
{

/// Per-track, frame-ordered sequence of ground-plane states.
struct Trajectory
{
  TrackId track_id = 0;
  RoadUserClass cls = RoadUserClass::Ignored;
  bool stationary = false;  // set by stationary_smooth
  std::vector<BevState> states;  // frames strictly increasing

  bool empty() const { return states.empty(); }
  int first_frame() const { return states.front().frame; }
  int last_frame() const { return states.back().frame; }

  /// True when there is one state per frame over [first_frame, last_frame].
  bool contiguous() const
  {
    return !states.empty() &&
           last_frame() - first_frame() + 1 == static_cast<int>(states.size());
  }

  const BevState * state_at(int frame) const
  {
    const auto it = std::lower_bound(
      states.begin(), states.end(), frame,
      [](const BevState & s, int f) { return s.frame < f; });
    if (it == states.end() || it->frame != frame) {
      return nullptr;
    }
    return &*it;
  }

  bool is_ego() const { return track_id == kEgoTrackId; }
};

}  // namespace smos

#endif  // SMOS_TRAJECTORY_HPP_
