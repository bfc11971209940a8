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

#ifndef SMOS_SAFETY_INDICATORS_HPP_
#define SMOS_SAFETY_INDICATORS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "smos/bev_geometry.hpp"
#include "smos/trajectory.hpp"

namespace smos
{

enum class InteractionCategory {
  BothMoving,          // "interaction 1": neither road user is stationary
  InvolvesStationary,  // "interaction 2": at least one stationary road user
};

constexpr std::string_view to_string(InteractionCategory c)
{
  return c == InteractionCategory::BothMoving ? "both_moving" : "involves_stationary";
}

/// A pair of co-existing road users with its per-instant TTC series.
struct Interaction
{
  TrackId track_a = 0;
  TrackId track_b = 0;
  RoadUserClass class_a = RoadUserClass::Ignored;
  RoadUserClass class_b = RoadUserClass::Ignored;
  InteractionCategory category = InteractionCategory::BothMoving;
  int first_frame = 0;  // inclusive range where both trajectories exist
  int last_frame = 0;

  /// ttc_series[f - first_frame] is the TTC at frame f, when defined.
  std::vector<std::optional<double>> ttc_series;
  std::optional<double> ttc_min;

  // Positions of the two trajectories in the list they were enumerated from.
  std::size_t index_a = 0;
  std::size_t index_b = 0;
};

/// One interaction per unordered pair of trajectories whose frame ranges
/// intersect. The ego trajectory joins the pairing only when include_ego is
/// set. Categories come from the trajectories' stationary flags. The result
/// is sorted by (track_a, track_b), independent of input order.
std::vector<Interaction> enumerate_interactions(
  std::span<const Trajectory> trajectories, bool include_ego);

/// Fills ttc_series over the shared frame range and sets ttc_min to the
/// minimum defined value. Both trajectories must be contiguous and carry
/// velocities over the shared range.
void compute_ttc_series(
  Interaction & interaction, std::span<const Trajectory> trajectories, const TtcConfig & cfg);

InteractionCategory categorize(const Trajectory & a, const Trajectory & b);

/// enumerate + compute + categorize in one pass.
std::vector<Interaction> analyze_interactions(
  std::span<const Trajectory> trajectories, bool include_ego, const TtcConfig & cfg);

struct SeverityCounts
{
  std::size_t below_10s = 0;
  std::size_t below_1_5s = 0;
  std::size_t total_interactions = 0;

  friend bool operator==(const SeverityCounts &, const SeverityCounts &) = default;
  SeverityCounts & operator+=(const SeverityCounts & other)
  {
    below_10s += other.below_10s;
    below_1_5s += other.below_1_5s;
    total_interactions += other.total_interactions;
    return *this;
  }
};

/// Counts interactions with a defined TTC_min strictly below each threshold.
SeverityCounts count_severities(
  std::span<const Interaction> interactions, double threshold_major = 10.0,
  double threshold_severe = 1.5);

struct ReductionPercentages
{
  std::optional<double> below_10s_pct;   // 100 * (before - after) / before
  std::optional<double> below_1_5s_pct;  // unset when the before-count is zero
};

ReductionPercentages reduction_percentages(
  const SeverityCounts & before, const SeverityCounts & after);

}  // namespace smos

#endif  // SMOS_SAFETY_INDICATORS_HPP_
