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

#ifndef SMOS_MOT_METRICS_HPP_
#define SMOS_MOT_METRICS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "smos/types.hpp"

namespace smos
{

/// Axis-aligned image-plane rectangle (pixels).
struct Box2d
{
  double left = 0.0;
  double top = 0.0;
  double right = 0.0;
  double bottom = 0.0;
};

double iou(const Box2d & a, const Box2d & b);
double center_distance(const Box2d & a, const Box2d & b);

struct TrackedBox
{
  TrackId id = 0;
  Box2d box;
};

/// Costs at or above this value mark infeasible pairs; such pairs never
/// appear in the returned matching.
inline constexpr double kInfeasibleCost = 1e9;

struct Assignment
{
  std::vector<std::pair<int, int>> pairs;  // (row, col), sorted by row
  double total_cost = 0.0;                 // over the returned pairs only
};

/// Minimum-cost one-to-one assignment on a rectangular cost matrix
/// (Jonker-Volgenant style shortest augmenting paths). An empty matrix
/// yields an empty assignment.
Assignment solve_assignment(const std::vector<std::vector<double>> & cost);

struct MatchOptions
{
  double gate_iou = 0.5;             // minimum IoU for a feasible gt/pred pair
  bool cost_center_distance = false; // cost = center distance instead of 1 - IoU
};

struct FrameMatch
{
  TrackId gt_id = 0;
  TrackId pred_id = 0;
  double distance = 0.0;  // image-plane center distance (pixels)
  double iou = 0.0;
};

struct FrameMatchResult
{
  std::vector<FrameMatch> matches;  // sorted by gt_id
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t match_count() const { return matches.size(); }
};

/// CLEAR MOT per-frame matching: pairs matched in the previous frame that
/// still pass the gate are kept first, the rest is matched by the Hungarian
/// algorithm gated at IoU >= gate. Throws on duplicate ids within a frame.
FrameMatchResult match_frame(
  std::span<const TrackedBox> gt, std::span<const TrackedBox> pred,
  const std::map<TrackId, TrackId> & prev_matches, const MatchOptions & opts = {});

/// Finished, id-free per-run totals; add tallies to pool classes or
/// sequences.
struct MotTally
{
  long long gt = 0;  // ground-truth object-frames
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;
  long long idsw = 0;
  long long frag = 0;
  long long frames = 0;
  long long frames_with_matches = 0;
  long long gt_tracks = 0;
  double sum_match_iou = 0.0;
  double sum_match_distance = 0.0;
  double sum_frame_mean_iou = 0.0;
  std::vector<double> track_coverage;  // matched fraction per gt track
  long long idtp = 0;                  // identity-level true-positive frames
  long long pred_object_frames = 0;

  MotTally & operator+=(const MotTally & other);
};

/// Frame-ordered accumulation of matches, identity switches, fragmentations
/// and coverage for one (sequence, class) evaluation.
class MotAccumulator
{
public:
  explicit MotAccumulator(MatchOptions opts = {}) : opts_(opts) {}

  void observe_frame(std::span<const TrackedBox> gt, std::span<const TrackedBox> pred);

  long long gt_count() const { return gt_; }
  long long tp_count() const { return tp_; }
  long long fn_count() const { return fn_; }

  /// Runs the global id bijection for IDF1 and freezes the tallies.
  MotTally finish() const;

private:
  MatchOptions opts_;
  std::map<TrackId, TrackId> prev_matches_;
  std::map<TrackId, TrackId> last_matched_pred_;
  std::map<TrackId, bool> gap_open_;
  std::map<TrackId, long long> gt_frames_;
  std::map<TrackId, long long> gt_matched_frames_;
  std::map<TrackId, long long> pred_frames_;
  std::map<std::pair<TrackId, TrackId>, long long> id_overlap_;  // gated frames per (gt, pred)
  long long gt_ = 0, tp_ = 0, fp_ = 0, fn_ = 0, idsw_ = 0, frag_ = 0;
  long long frames_ = 0, frames_with_matches_ = 0;
  double sum_match_iou_ = 0.0, sum_match_distance_ = 0.0, sum_frame_mean_iou_ = 0.0;
};

struct MotReport
{
  // Undefined entries (e.g. no ground truth) stay unset.
  std::optional<double> mota;
  std::optional<double> motp;           // mean match IoU, higher is better
  std::optional<double> motp_distance;  // mean image-plane center distance
  std::optional<double> moda;
  std::optional<double> modp;  // mean over frames of per-frame mean match IoU
  std::optional<double> idf1;
  std::optional<double> det_f1;  // detection-level F1 over TP/FP/FN
  std::optional<double> mt;      // fraction of gt tracks with coverage >= 0.8
  std::optional<double> ml;      // fraction with coverage <= 0.2
  std::optional<double> fp_pct;  // 100 * FP / GT
  std::optional<double> fn_pct;
  MotTally counts;
};

MotReport metrics(const MotTally & tally);

}  // namespace smos

#endif  // SMOS_MOT_METRICS_HPP_
