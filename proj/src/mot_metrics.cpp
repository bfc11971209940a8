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

#include "smos/mot_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

namespace smos
{

double iou(const Box2d & a, const Box2d & b)
{
  const double ix = std::min(a.right, b.right) - std::max(a.left, b.left);
  const double iz = std::min(a.bottom, b.bottom) - std::max(a.top, b.top);
  if (ix <= 0.0 || iz <= 0.0) {
    return 0.0;
  }
  const double inter = ix * iz;
  const double area_a = (a.right - a.left) * (a.bottom - a.top);
  const double area_b = (b.right - b.left) * (b.bottom - b.top);
  const double uni = area_a + area_b - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

double center_distance(const Box2d & a, const Box2d & b)
{
  const double dx = 0.5 * (a.left + a.right) - 0.5 * (b.left + b.right);
  const double dy = 0.5 * (a.top + a.bottom) - 0.5 * (b.top + b.bottom);
  return std::hypot(dx, dy);
}

namespace
{

// Shortest-augmenting-path assignment on an n x m matrix with n <= m.
// Returns col index per row.
std::vector<int> assign_rows(const std::vector<std::vector<double>> & a)
{
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(a[0].size());
  const double kInf = std::numeric_limits<double>::max() / 4.0;
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) {
          continue;
        }
        const double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j) {
    if (p[j] != 0) {
      row_to_col[p[j] - 1] = j - 1;
    }
  }
  return row_to_col;
}

}  // namespace

Assignment solve_assignment(const std::vector<std::vector<double>> & cost)
{
  Assignment result;
  const std::size_t rows = cost.size();
  const std::size_t cols = rows == 0 ? 0 : cost[0].size();
  if (rows == 0 || cols == 0) {
    return result;
  }
  for (const auto & row : cost) {
    if (row.size() != cols) {
      throw std::invalid_argument("solve_assignment: ragged cost matrix");
    }
  }

  std::vector<std::pair<int, int>> raw;
  if (rows <= cols) {
    const auto row_to_col = assign_rows(cost);
    for (std::size_t r = 0; r < rows; ++r) {
      raw.emplace_back(static_cast<int>(r), row_to_col[r]);
    }
  } else {
    std::vector<std::vector<double>> t(cols, std::vector<double>(rows));
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        t[c][r] = cost[r][c];
      }
    }
    const auto col_to_row = assign_rows(t);
    for (std::size_t c = 0; c < cols; ++c) {
      raw.emplace_back(col_to_row[c], static_cast<int>(c));
    }
  }

  for (const auto & [r, c] : raw) {
    if (cost[r][c] >= kInfeasibleCost) {
      continue;
    }
    result.pairs.emplace_back(r, c);
    result.total_cost += cost[r][c];
  }
  std::sort(result.pairs.begin(), result.pairs.end());
  return result;
}

FrameMatchResult match_frame(
  std::span<const TrackedBox> gt, std::span<const TrackedBox> pred,
  const std::map<TrackId, TrackId> & prev_matches, const MatchOptions & opts)
{
  std::map<TrackId, const TrackedBox *> gt_by_id;
  for (const TrackedBox & g : gt) {
    if (!gt_by_id.emplace(g.id, &g).second) {
      throw std::runtime_error("duplicate ground-truth id " + std::to_string(g.id));
    }
  }
  std::map<TrackId, const TrackedBox *> pred_by_id;
  for (const TrackedBox & p : pred) {
    if (!pred_by_id.emplace(p.id, &p).second) {
      throw std::runtime_error("duplicate prediction id " + std::to_string(p.id));
    }
  }

  FrameMatchResult result;
  std::set<TrackId> gt_done, pred_done;

  // Continuity rule: carry over still-valid pairs from the previous frame.
  for (const auto & [g_id, p_id] : prev_matches) {
    const auto g_it = gt_by_id.find(g_id);
    const auto p_it = pred_by_id.find(p_id);
    if (g_it == gt_by_id.end() || p_it == pred_by_id.end()) {
      continue;
    }
    const double overlap = iou(g_it->second->box, p_it->second->box);
    if (overlap >= opts.gate_iou) {
      result.matches.push_back(
        {g_id, p_id, center_distance(g_it->second->box, p_it->second->box), overlap});
      gt_done.insert(g_id);
      pred_done.insert(p_id);
    }
  }

  std::vector<const TrackedBox *> gt_rest, pred_rest;
  for (const auto & [id, box] : gt_by_id) {
    if (!gt_done.count(id)) {
      gt_rest.push_back(box);
    }
  }
  for (const auto & [id, box] : pred_by_id) {
    if (!pred_done.count(id)) {
      pred_rest.push_back(box);
    }
  }

  if (!gt_rest.empty() && !pred_rest.empty()) {
    std::vector<std::vector<double>> cost(
      gt_rest.size(), std::vector<double>(pred_rest.size(), kInfeasibleCost));
    for (std::size_t r = 0; r < gt_rest.size(); ++r) {
      for (std::size_t c = 0; c < pred_rest.size(); ++c) {
        const double overlap = iou(gt_rest[r]->box, pred_rest[c]->box);
        if (overlap >= opts.gate_iou) {
          cost[r][c] = opts.cost_center_distance
                         ? center_distance(gt_rest[r]->box, pred_rest[c]->box)
                         : 1.0 - overlap;
        }
      }
    }
    for (const auto & [r, c] : solve_assignment(cost).pairs) {
      const TrackedBox & g = *gt_rest[r];
      const TrackedBox & p = *pred_rest[c];
      result.matches.push_back(
        {g.id, p.id, center_distance(g.box, p.box), iou(g.box, p.box)});
    }
  }

  std::sort(result.matches.begin(), result.matches.end(), [](const auto & a, const auto & b) {
    return a.gt_id < b.gt_id;
  });
  result.fn = gt.size() - result.matches.size();
  result.fp = pred.size() - result.matches.size();
  return result;
}

MotTally & MotTally::operator+=(const MotTally & other)
{
  gt += other.gt;
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  idsw += other.idsw;
  frag += other.frag;
  frames += other.frames;
  frames_with_matches += other.frames_with_matches;
  gt_tracks += other.gt_tracks;
  sum_match_iou += other.sum_match_iou;
  sum_match_distance += other.sum_match_distance;
  sum_frame_mean_iou += other.sum_frame_mean_iou;
  track_coverage.insert(
    track_coverage.end(), other.track_coverage.begin(), other.track_coverage.end());
  idtp += other.idtp;
  pred_object_frames += other.pred_object_frames;
  return *this;
}

void MotAccumulator::observe_frame(
  std::span<const TrackedBox> gt, std::span<const TrackedBox> pred)
{
  const FrameMatchResult frame = match_frame(gt, pred, prev_matches_, opts_);

  ++frames_;
  gt_ += static_cast<long long>(gt.size());
  tp_ += static_cast<long long>(frame.match_count());
  fp_ += static_cast<long long>(frame.fp);
  fn_ += static_cast<long long>(frame.fn);

  std::set<TrackId> matched_gt;
  double frame_iou_sum = 0.0;
  for (const FrameMatch & m : frame.matches) {
    matched_gt.insert(m.gt_id);
    frame_iou_sum += m.iou;
    sum_match_iou_ += m.iou;
    sum_match_distance_ += m.distance;

    const auto last = last_matched_pred_.find(m.gt_id);
    if (last != last_matched_pred_.end() && last->second != m.pred_id) {
      ++idsw_;
    }
    last_matched_pred_[m.gt_id] = m.pred_id;

    if (gap_open_[m.gt_id]) {
      ++frag_;
    }
    gap_open_[m.gt_id] = false;
    ++gt_matched_frames_[m.gt_id];
  }
  if (!frame.matches.empty()) {
    ++frames_with_matches_;
    sum_frame_mean_iou_ += frame_iou_sum / static_cast<double>(frame.matches.size());
  }

  for (const TrackedBox & g : gt) {
    ++gt_frames_[g.id];
    if (!matched_gt.count(g.id) && last_matched_pred_.count(g.id)) {
      gap_open_[g.id] = true;
    }
  }
  for (const TrackedBox & p : pred) {
    ++pred_frames_[p.id];
  }

  // Identity-level overlap counts feed the global IDF1 bijection.
  for (const TrackedBox & g : gt) {
    for (const TrackedBox & p : pred) {
      if (iou(g.box, p.box) >= opts_.gate_iou) {
        ++id_overlap_[{g.id, p.id}];
      }
    }
  }

  prev_matches_.clear();
  for (const FrameMatch & m : frame.matches) {
    prev_matches_[m.gt_id] = m.pred_id;
  }
}

MotTally MotAccumulator::finish() const
{
  MotTally tally;
  tally.gt = gt_;
  tally.tp = tp_;
  tally.fp = fp_;
  tally.fn = fn_;
  tally.idsw = idsw_;
  tally.frag = frag_;
  tally.frames = frames_;
  tally.frames_with_matches = frames_with_matches_;
  tally.sum_match_iou = sum_match_iou_;
  tally.sum_match_distance = sum_match_distance_;
  tally.sum_frame_mean_iou = sum_frame_mean_iou_;
  tally.gt_tracks = static_cast<long long>(gt_frames_.size());
  for (const auto & [id, total] : gt_frames_) {
    const auto matched = gt_matched_frames_.find(id);
    const double covered = matched == gt_matched_frames_.end()
                             ? 0.0
                             : static_cast<double>(matched->second);
    tally.track_coverage.push_back(covered / static_cast<double>(total));
  }
  for (const auto & [id, count] : pred_frames_) {
    tally.pred_object_frames += count;
  }

  // Max-weight bijection between gt and pred identities on gated frame
  // counts; the summed overlap of the chosen pairs is IDTP.
  if (!gt_frames_.empty() && !pred_frames_.empty() && !id_overlap_.empty()) {
    std::vector<TrackId> gt_ids, pred_ids;
    for (const auto & [id, n] : gt_frames_) gt_ids.push_back(id);
    for (const auto & [id, n] : pred_frames_) pred_ids.push_back(id);
    std::map<TrackId, std::size_t> pred_index;
    for (std::size_t i = 0; i < pred_ids.size(); ++i) {
      pred_index[pred_ids[i]] = i;
    }
    std::vector<std::vector<double>> cost(
      gt_ids.size(), std::vector<double>(pred_ids.size(), 0.0));
    std::map<TrackId, std::size_t> gt_index;
    for (std::size_t i = 0; i < gt_ids.size(); ++i) {
      gt_index[gt_ids[i]] = i;
    }
    for (const auto & [pair, overlap] : id_overlap_) {
      cost[gt_index[pair.first]][pred_index[pair.second]] = -static_cast<double>(overlap);
    }
    for (const auto & [r, c] : solve_assignment(cost).pairs) {
      const auto it = id_overlap_.find({gt_ids[r], pred_ids[c]});
      if (it != id_overlap_.end()) {
        tally.idtp += it->second;
      }
    }
  }
  return tally;
}

MotReport metrics(const MotTally & tally)
{
  MotReport report;
  report.counts = tally;
  if (tally.gt > 0) {
    const double gt = static_cast<double>(tally.gt);
    // 1 - (FN + FP + IDSW) / GT, evaluated over the integer numerator so the
    // MOTA <= MODA ordering holds exactly.
    report.mota = static_cast<double>(tally.gt - tally.fn - tally.fp - tally.idsw) / gt;
    report.moda = static_cast<double>(tally.tp - tally.fp) / gt;
    report.fp_pct = 100.0 * static_cast<double>(tally.fp) / gt;
    report.fn_pct = 100.0 * static_cast<double>(tally.fn) / gt;
  }
  if (tally.tp > 0) {
    report.motp = tally.sum_match_iou / static_cast<double>(tally.tp);
    report.motp_distance = tally.sum_match_distance / static_cast<double>(tally.tp);
  }
  if (tally.frames_with_matches > 0) {
    report.modp = tally.sum_frame_mean_iou / static_cast<double>(tally.frames_with_matches);
  }
  if (tally.tp + tally.fp + tally.fn > 0) {
    report.det_f1 =
      2.0 * static_cast<double>(tally.tp) / static_cast<double>(2 * tally.tp + tally.fp + tally.fn);
  }
  const long long id_denominator = tally.gt + tally.pred_object_frames;
  if (id_denominator > 0) {
    report.idf1 = 2.0 * static_cast<double>(tally.idtp) / static_cast<double>(id_denominator);
  }
  if (!tally.track_coverage.empty()) {
    const double tracks = static_cast<double>(tally.track_coverage.size());
    const auto mostly_tracked = std::count_if(
      tally.track_coverage.begin(), tally.track_coverage.end(),
      [](double c) { return c >= 0.8; });
    const auto mostly_lost = std::count_if(
      tally.track_coverage.begin(), tally.track_coverage.end(),
      [](double c) { return c <= 0.2; });
    report.mt = static_cast<double>(mostly_tracked) / tracks;
    report.ml = static_cast<double>(mostly_lost) / tracks;
  }
  return report;
}

}  // namespace smos
