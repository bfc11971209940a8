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

#include <algorithm>
#include <random>
#include <tuple>

#include "smos/safety_indicators.hpp"

using namespace smos;

namespace
{

Trajectory linear_track(
  TrackId id, int first_frame, int n_frames, Vec2 start, Vec2 velocity, double fps = 10.0,
  bool stationary = false)
{
  Trajectory traj;
  traj.track_id = id;
  traj.cls = RoadUserClass::Car;
  traj.stationary = stationary;
  for (int i = 0; i < n_frames; ++i) {
    BevState s;
    s.frame = first_frame + i;
    s.position = start + velocity * (i / fps);
    s.yaw = 0.0;
    s.length = 4.0;
    s.width = 2.0;
    s.velocity = stationary ? Vec2{0.0, 0.0} : velocity;
    traj.states.push_back(s);
  }
  return traj;
}

std::vector<std::tuple<TrackId, TrackId, std::optional<double>>> signature(
  const std::vector<Interaction> & interactions)
{
  std::vector<std::tuple<TrackId, TrackId, std::optional<double>>> out;
  for (const Interaction & i : interactions) {
    out.emplace_back(i.track_a, i.track_b, i.ttc_min);
  }
  return out;
}

std::vector<Trajectory> random_scene(std::mt19937 & rng, int n_tracks)
{
  std::uniform_real_distribution<double> pos(-30.0, 30.0);
  std::uniform_real_distribution<double> vel(-8.0, 8.0);
  std::uniform_int_distribution<int> start(0, 15);
  std::uniform_int_distribution<int> len(2, 25);
  std::uniform_int_distribution<int> coin(0, 3);
  std::vector<Trajectory> scene;
  for (int i = 0; i < n_tracks; ++i) {
    const bool stationary = coin(rng) == 0;
    const Vec2 v = stationary ? Vec2{0.0, 0.0} : Vec2{vel(rng), vel(rng)};
    scene.push_back(
      linear_track(i, start(rng), len(rng), {pos(rng), pos(rng)}, v, 10.0, stationary));
  }
  return scene;
}

}  // namespace

TEST_CASE("enumerate_interactions pairs coexisting trajectories")
{
  std::vector<Trajectory> scene = {
    linear_track(1, 0, 10, {0, 0}, {1, 0}),
    linear_track(2, 5, 10, {10, 0}, {0, 0}),
    linear_track(3, 0, 20, {0, 20}, {0, 1}),
  };
  const auto interactions = enumerate_interactions(scene, false);
  REQUIRE(interactions.size() == 3);  // C(3, 2), all coexist
  CHECK(interactions[0].track_a == 1);
  CHECK(interactions[0].track_b == 2);
  CHECK(interactions[0].first_frame == 5);
  CHECK(interactions[0].last_frame == 9);

  SUBCASE("disjoint frame ranges produce no interaction")
  {
    std::vector<Trajectory> disjoint = {
      linear_track(1, 0, 5, {0, 0}, {1, 0}),
      linear_track(2, 10, 5, {10, 0}, {0, 0}),
    };
    CHECK(enumerate_interactions(disjoint, false).empty());
  }
  SUBCASE("the ego joins the pairing only when requested")
  {
    scene.pop_back();
    Trajectory ego = linear_track(kEgoTrackId, 0, 20, {0, -5}, {0, 0});
    scene.push_back(ego);
    CHECK(enumerate_interactions(scene, true).size() == 3);
    CHECK(enumerate_interactions(scene, false).size() == 1);
  }
}

TEST_CASE("compute_ttc_series on the head-on closing case")
{
  // 10 m/s toward a parked car 20 m ahead, sampled at three frames.
  std::vector<Trajectory> scene = {
    linear_track(1, 0, 3, {0, 0}, {10, 0}),
    linear_track(2, 0, 3, {20, 0}, {0, 0}),
  };
  const auto interactions = analyze_interactions(scene, false, TtcConfig{});
  REQUIRE(interactions.size() == 1);
  const Interaction & inter = interactions[0];
  REQUIRE(inter.ttc_series.size() == 3);
  CHECK(*inter.ttc_series[0] == doctest::Approx(1.6).epsilon(1e-9));
  CHECK(*inter.ttc_series[1] == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(*inter.ttc_series[2] == doctest::Approx(1.4).epsilon(1e-9));
  CHECK(*inter.ttc_min == doctest::Approx(1.4).epsilon(1e-9));
  CHECK(inter.category == InteractionCategory::BothMoving);
}

TEST_CASE("stationary disjoint pairs have an empty defined set")
{
  std::vector<Trajectory> scene = {
    linear_track(1, 0, 5, {0, 0}, {0, 0}, 10.0, true),
    linear_track(2, 0, 5, {15, 0}, {0, 0}, 10.0, true),
  };
  const auto interactions = analyze_interactions(scene, false, TtcConfig{});
  REQUIRE(interactions.size() == 1);
  CHECK_FALSE(interactions[0].ttc_min.has_value());
  for (const auto & t : interactions[0].ttc_series) {
    CHECK_FALSE(t.has_value());
  }
  CHECK(interactions[0].category == InteractionCategory::InvolvesStationary);
}

TEST_CASE("overlapping boxes give a zero TTC")
{
  std::vector<Trajectory> scene = {
    linear_track(1, 4, 1, {0, 0}, {1, 0}),
    linear_track(2, 4, 1, {1, 0.5}, {0, 0}),
  };
  const auto interactions = analyze_interactions(scene, false, TtcConfig{});
  REQUIRE(interactions.size() == 1);
  CHECK(interactions[0].ttc_min == 0.0);
}

TEST_CASE("categorize")
{
  const Trajectory moving = linear_track(1, 0, 5, {0, 0}, {5, 0});
  const Trajectory parked = linear_track(2, 0, 5, {9, 9}, {0, 0}, 10.0, true);
  CHECK(categorize(moving, parked) == InteractionCategory::InvolvesStationary);
  CHECK(categorize(moving, moving) == InteractionCategory::BothMoving);
  CHECK(categorize(parked, parked) == InteractionCategory::InvolvesStationary);
}

TEST_CASE("count_severities uses strict thresholds")
{
  std::vector<Interaction> interactions(3);
  interactions[0].ttc_min = 0.5;
  interactions[1].ttc_min = 2.0;
  interactions[2].ttc_min.reset();
  const SeverityCounts counts = count_severities(interactions);
  CHECK(counts.below_10s == 2);
  CHECK(counts.below_1_5s == 1);
  CHECK(counts.total_interactions == 3);

  SUBCASE("empty list")
  {
    CHECK(count_severities({}) == SeverityCounts{0, 0, 0});
  }
  SUBCASE("a TTC_min exactly at the threshold does not count")
  {
    interactions[1].ttc_min = 1.5;
    const SeverityCounts c = count_severities(interactions);
    CHECK(c.below_1_5s == 1);
    interactions[1].ttc_min = 10.0;
    CHECK(count_severities(interactions).below_10s == 1);
  }
}

TEST_CASE("reduction_percentages reproduces the ground-truth SS reductions")
{
  const SeverityCounts before{1296, 164, 2000};
  const SeverityCounts after{583, 80, 2000};
  const ReductionPercentages pct = reduction_percentages(before, after);
  REQUIRE(pct.below_10s_pct.has_value());
  REQUIRE(pct.below_1_5s_pct.has_value());
  CHECK(*pct.below_10s_pct == doctest::Approx(100.0 * 713.0 / 1296.0));
  CHECK(*pct.below_1_5s_pct == doctest::Approx(100.0 * 84.0 / 164.0));
  CHECK(std::abs(*pct.below_10s_pct - 55.02) < 0.01);
  CHECK(std::abs(*pct.below_1_5s_pct - 51.21) < 0.01);

  SUBCASE("identical counts give zero percent")
  {
    const ReductionPercentages zero = reduction_percentages(before, before);
    CHECK(*zero.below_10s_pct == 0.0);
    CHECK(*zero.below_1_5s_pct == 0.0);
  }
  SUBCASE("increases are signed")
  {
    const ReductionPercentages neg =
      reduction_percentages(SeverityCounts{100, 10, 100}, SeverityCounts{120, 10, 120});
    CHECK(*neg.below_10s_pct == doctest::Approx(-20.0));
  }
  SUBCASE("zero before-count yields an undefined marker")
  {
    const ReductionPercentages undef =
      reduction_percentages(SeverityCounts{0, 0, 0}, SeverityCounts{5, 1, 5});
    CHECK_FALSE(undef.below_10s_pct.has_value());
    CHECK_FALSE(undef.below_1_5s_pct.has_value());
  }
}

TEST_CASE("severity ordering invariant holds on random scenes")
{
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 50; ++trial) {
    const auto scene = random_scene(rng, 8);
    const auto interactions = analyze_interactions(scene, false, TtcConfig{});
    const SeverityCounts counts = count_severities(interactions);
    CHECK(counts.below_1_5s <= counts.below_10s);
    CHECK(counts.below_10s <= counts.total_interactions);
  }
}

TEST_CASE("enumeration is order-independent")
{
  std::mt19937 rng(4321);
  for (int trial = 0; trial < 30; ++trial) {
    auto scene = random_scene(rng, 7);
    const auto base = signature(analyze_interactions(scene, false, TtcConfig{}));
    std::shuffle(scene.begin(), scene.end(), rng);
    const auto shuffled = signature(analyze_interactions(scene, false, TtcConfig{}));
    CHECK(base == shuffled);
  }
}

TEST_CASE("stationary non-overlapping pairs never contribute to severity counts")
{
  std::mt19937 rng(999);
  for (int trial = 0; trial < 30; ++trial) {
    const auto scene = random_scene(rng, 8);
    const auto interactions = analyze_interactions(scene, false, TtcConfig{});
    for (const Interaction & inter : interactions) {
      const Trajectory & a = scene[inter.index_a];
      const Trajectory & b = scene[inter.index_b];
      if (!a.stationary || !b.stationary) {
        continue;
      }
      bool touching = false;
      for (int f = inter.first_frame; f <= inter.last_frame && !touching; ++f) {
        touching = overlap(footprint(*a.state_at(f)), footprint(*b.state_at(f)));
      }
      if (!touching) {
        CHECK_FALSE(inter.ttc_min.has_value());
      }
    }
  }
}

TEST_CASE("removing a trajectory never increases severity counts")
{
  std::mt19937 rng(2026);
  for (int trial = 0; trial < 25; ++trial) {
    auto scene = random_scene(rng, 7);
    const SeverityCounts before =
      count_severities(analyze_interactions(scene, false, TtcConfig{}));
    scene.erase(
      scene.begin() + std::uniform_int_distribution<std::size_t>(0, scene.size() - 1)(rng));
    const SeverityCounts after =
      count_severities(analyze_interactions(scene, false, TtcConfig{}));
    CHECK(after.below_10s <= before.below_10s);
    CHECK(after.below_1_5s <= before.below_1_5s);
    CHECK(after.total_interactions <= before.total_interactions);
  }
}
