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

#include "smos/safety_indicators.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace smos
{

InteractionCategory categorize(const Trajectory & a, const Trajectory & b)
{
  return (a.stationary || b.stationary) ? InteractionCategory::InvolvesStationary
                                        : InteractionCategory::BothMoving;
}

std::vector<Interaction> enumerate_interactions(
  std::span<const Trajectory> trajectories, bool include_ego)
{
  std::vector<Interaction> interactions;
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    const Trajectory & a = trajectories[i];
    if (a.empty() || (a.is_ego() && !include_ego)) {
      continue;
    }
    for (std::size_t j = i + 1; j < trajectories.size(); ++j) {
      const Trajectory & b = trajectories[j];
      if (b.empty() || (b.is_ego() && !include_ego)) {
        continue;
      }
      if (a.track_id == b.track_id) {
        throw std::invalid_argument(
          "enumerate_interactions: duplicate track id " + std::to_string(a.track_id));
      }
      const int first = std::max(a.first_frame(), b.first_frame());
      const int last = std::min(a.last_frame(), b.last_frame());
      if (first > last) {
        continue;  // never coexist
      }
      Interaction inter;
      const bool a_first = a.track_id < b.track_id;
      inter.track_a = a_first ? a.track_id : b.track_id;
      inter.track_b = a_first ? b.track_id : a.track_id;
      inter.class_a = a_first ? a.cls : b.cls;
      inter.class_b = a_first ? b.cls : a.cls;
      inter.index_a = a_first ? i : j;
      inter.index_b = a_first ? j : i;
      inter.category = categorize(a, b);
      inter.first_frame = first;
      inter.last_frame = last;
      interactions.push_back(std::move(inter));
    }
  }
  std::sort(
    interactions.begin(), interactions.end(), [](const Interaction & x, const Interaction & y) {
      return std::pair(x.track_a, x.track_b) < std::pair(y.track_a, y.track_b);
    });
  return interactions;
}

void compute_ttc_series(
  Interaction & interaction, std::span<const Trajectory> trajectories, const TtcConfig & cfg)
{
  const Trajectory & a = trajectories[interaction.index_a];
  const Trajectory & b = trajectories[interaction.index_b];
  interaction.ttc_series.clear();
  interaction.ttc_series.reserve(interaction.last_frame - interaction.first_frame + 1);
  interaction.ttc_min.reset();
  for (int frame = interaction.first_frame; frame <= interaction.last_frame; ++frame) {
    const BevState * sa = a.state_at(frame);
    const BevState * sb = b.state_at(frame);
    if (sa == nullptr || sb == nullptr) {
      throw std::invalid_argument(
        "compute_ttc_series: trajectory missing frame " + std::to_string(frame) +
        " in the shared range");
    }
    const std::optional<double> t = ttc(*sa, *sb, cfg);
    if (t.has_value() && (!interaction.ttc_min.has_value() || *t < *interaction.ttc_min)) {
      interaction.ttc_min = t;
    }
    interaction.ttc_series.push_back(t);
  }
}

std::vector<Interaction> analyze_interactions(
  std::span<const Trajectory> trajectories, bool include_ego, const TtcConfig & cfg)
{
  std::vector<Interaction> interactions = enumerate_interactions(trajectories, include_ego);
  for (Interaction & inter : interactions) {
    compute_ttc_series(inter, trajectories, cfg);
  }
  return interactions;
}

SeverityCounts count_severities(
  std::span<const Interaction> interactions, double threshold_major, double threshold_severe)
{
  SeverityCounts counts;
  counts.total_interactions = interactions.size();
  for (const Interaction & inter : interactions) {
    if (!inter.ttc_min.has_value()) {
      continue;
    }
    if (*inter.ttc_min < threshold_major) {
      ++counts.below_10s;
    }
    if (*inter.ttc_min < threshold_severe) {
      ++counts.below_1_5s;
    }
  }
  return counts;
}

ReductionPercentages reduction_percentages(
  const SeverityCounts & before, const SeverityCounts & after)
{
  ReductionPercentages out;
  if (before.below_10s > 0) {
    out.below_10s_pct = 100.0 *
                        (static_cast<double>(before.below_10s) - static_cast<double>(after.below_10s)) /
                        static_cast<double>(before.below_10s);
  }
  if (before.below_1_5s > 0) {
    out.below_1_5s_pct =
      100.0 *
      (static_cast<double>(before.below_1_5s) - static_cast<double>(after.below_1_5s)) /
      static_cast<double>(before.below_1_5s);
  }
  return out;
}

}  // namespace smos
