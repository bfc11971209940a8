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

#include "smos/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace smos
{

namespace
{

std::string variant_token(const PostVariant & post)
{
  if (post.idsplit && post.ss) return "idsplit+ss";
  if (post.idsplit) return "idsplit";
  if (post.ss) return "ss";
  return "none";
}

std::string suffix_for_token(const std::string & token)
{
  if (token == "idsplit+ss") return "+IDsplit+SS";
  if (token == "idsplit") return "+IDsplit";
  if (token == "ss") return "+SS";
  return "";
}

std::string class_label(TrackId id, RoadUserClass cls)
{
  return id == kEgoTrackId ? "Ego" : std::string(to_string(cls));
}

std::string sanitize(const std::string & label)
{
  std::string out;
  out.reserve(label.size());
  for (char c : label) {
    out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  }
  return out;
}

}  // namespace

std::optional<VariantSpec> variant_from_name(std::string_view name)
{
  if (name == "none") return VariantSpec{"none", {false, false}};
  if (name == "idsplit") return VariantSpec{"idsplit", {true, false}};
  if (name == "idsplit+ss") return VariantSpec{"idsplit+ss", {true, true}};
  if (name == "ss") return VariantSpec{"ss", {false, true}};
  return std::nullopt;
}

std::string variant_suffix(const VariantSpec & variant)
{
  return suffix_for_token(variant.name);
}

std::string read_file(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path & path, const std::string & content)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << content;
  if (!out) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

std::vector<Trajectory> load_trajectories(
  const std::filesystem::path & labels, const std::optional<std::filesystem::path> & poses,
  bool include_ego, const EgoConfig & ego)
{
  const auto records = parse_tracking_labels(read_file(labels));
  std::vector<ObservationRecord> analyzed;
  analyzed.reserve(records.size());
  for (const ObservationRecord & rec : records) {
    if (is_analyzed(rec.cls)) {
      analyzed.push_back(rec);
    }
  }

  std::optional<std::map<int, EgoPose>> pmap;
  if (poses.has_value()) {
    pmap = pose_map(parse_ego_poses(read_file(*poses)));
  }

  std::optional<Trajectory> ego_traj;
  if (include_ego && !analyzed.empty()) {
    int max_frame = 0;
    for (const ObservationRecord & rec : analyzed) {
      max_frame = std::max(max_frame, rec.frame);
    }
    std::vector<int> frames(static_cast<std::size_t>(max_frame) + 1);
    std::iota(frames.begin(), frames.end(), 0);
    ego_traj = make_ego_trajectory(frames, pmap.has_value() ? &*pmap : nullptr, ego);
  }

  std::vector<Trajectory> trajectories = build_trajectories(analyzed, ego_traj);
  if (pmap.has_value()) {
    for (Trajectory & traj : trajectories) {
      if (traj.is_ego()) {
        continue;  // already placed in the world frame
      }
      for (BevState & state : traj.states) {
        const auto it = pmap->find(state.frame);
        if (it == pmap->end()) {
          throw std::runtime_error("no ego pose for frame " + std::to_string(state.frame));
        }
        state = apply_ego_pose(state, it->second);
      }
    }
  }
  return trajectories;
}

namespace
{

struct VariantOutcome
{
  SeverityCounts counts;
  std::vector<double> all;
  std::vector<double> both_moving;
  std::vector<double> involves_stationary;
  std::vector<Interaction> interactions;
};

VariantOutcome analyze_variant(
  const std::vector<Trajectory> & built, const PostVariant & post, const RunConfig & cfg)
{
  VariantOutcome outcome;
  const std::vector<Trajectory> trajectories = postprocess(built, post, cfg.post);
  outcome.interactions = analyze_interactions(trajectories, cfg.include_ego, cfg.ttc);
  outcome.counts = count_severities(outcome.interactions);
  for (const Interaction & inter : outcome.interactions) {
    if (!inter.ttc_min.has_value()) {
      continue;
    }
    outcome.all.push_back(*inter.ttc_min);
    if (inter.category == InteractionCategory::BothMoving) {
      outcome.both_moving.push_back(*inter.ttc_min);
    } else {
      outcome.involves_stationary.push_back(*inter.ttc_min);
    }
  }
  std::sort(outcome.all.begin(), outcome.all.end());
  std::sort(outcome.both_moving.begin(), outcome.both_moving.end());
  std::sort(outcome.involves_stationary.begin(), outcome.involves_stationary.end());
  return outcome;
}

struct SequenceComputation
{
  SequenceReport report;
  std::vector<InteractionSet> sets;
};

SequenceComputation analyze_sequence(const SequenceInput & input, const RunConfig & cfg)
{
  const std::vector<Trajectory> built =
    load_trajectories(input.labels, input.poses, cfg.include_ego, cfg.ego);

  std::optional<std::vector<Trajectory>> gt_built;
  if (input.gt_labels.has_value()) {
    gt_built = load_trajectories(*input.gt_labels, input.poses, cfg.include_ego, cfg.ego);
  }

  SequenceComputation comp;
  comp.report.sequence = input.id;

  // Reference outcomes, one per distinct reference variant. IDsplit is only
  // applied to the reference when explicitly requested.
  std::map<std::string, VariantOutcome> gt_outcomes;
  std::vector<std::string> gt_order;
  const auto gt_variant_of = [&cfg](const VariantSpec & v) {
    return PostVariant{v.post.idsplit && cfg.gt_idsplit, v.post.ss};
  };
  if (gt_built.has_value()) {
    for (const VariantSpec & v : cfg.variants) {
      const PostVariant gv = gt_variant_of(v);
      const std::string token = variant_token(gv);
      if (!gt_outcomes.count(token)) {
        gt_outcomes.emplace(token, analyze_variant(*gt_built, gv, cfg));
        gt_order.push_back(token);
      }
    }
  }

  for (const VariantSpec & v : cfg.variants) {
    VariantOutcome outcome = analyze_variant(built, v.post, cfg);
    MethodStats ms;
    ms.method = cfg.method + variant_suffix(v);
    ms.variant = v.name;
    ms.counts = outcome.counts;
    ms.ttc_min = outcome.all;
    ms.ttc_min_both_moving = outcome.both_moving;
    ms.ttc_min_involves_stationary = outcome.involves_stationary;
    ms.median_ttc_min = median(ms.ttc_min);
    if (gt_built.has_value()) {
      const VariantOutcome & ref = gt_outcomes.at(variant_token(gt_variant_of(v)));
      ms.d_vs_gt = ks_d_statistic(ms.ttc_min, ref.all);
      const std::optional<double> ref_median = median(ref.all);
      if (ms.median_ttc_min.has_value() && ref_median.has_value()) {
        ms.median_abs_diff_vs_gt = std::abs(*ms.median_ttc_min - *ref_median);
        ms.within_half_second_of_gt = within_band(*ms.median_ttc_min, *ref_median);
      }
    }
    comp.report.methods.push_back(std::move(ms));
    comp.sets.push_back(
      {input.id, cfg.method + variant_suffix(v), v.name, std::move(outcome.interactions)});
  }

  for (const std::string & token : gt_order) {
    VariantOutcome & outcome = gt_outcomes.at(token);
    MethodStats ms;
    ms.method = cfg.gt_method + suffix_for_token(token);
    ms.variant = token;
    ms.counts = outcome.counts;
    ms.ttc_min = outcome.all;
    ms.ttc_min_both_moving = outcome.both_moving;
    ms.ttc_min_involves_stationary = outcome.involves_stationary;
    ms.median_ttc_min = median(ms.ttc_min);
    comp.report.methods.push_back(std::move(ms));
    comp.sets.push_back(
      {input.id, cfg.gt_method + suffix_for_token(token), token,
       std::move(outcome.interactions)});
  }
  return comp;
}

std::vector<ReductionRow> build_reductions(const std::vector<TotalsRow> & totals)
{
  std::vector<ReductionRow> rows;
  for (const TotalsRow & row : totals) {
    if (row.variant == "none") {
      continue;
    }
    const std::string suffix = suffix_for_token(row.variant);
    if (row.method.size() < suffix.size()) {
      continue;
    }
    const std::string base = row.method.substr(0, row.method.size() - suffix.size());
    const auto baseline = std::find_if(totals.begin(), totals.end(), [&](const TotalsRow & t) {
      return t.variant == "none" && t.method == base;
    });
    if (baseline == totals.end()) {
      continue;
    }
    const ReductionPercentages pct = reduction_percentages(baseline->counts, row.counts);
    rows.push_back(ReductionRow{row.method, baseline->method, pct.below_10s_pct, pct.below_1_5s_pct});
  }
  return rows;
}

struct RunOutcome
{
  AnalysisOutputs outputs;
  std::vector<std::string> errors;  // "sequence <id> (<file>): <what>"
};

RunOutcome run_analysis_internal(const RunConfig & config)
{
  if (config.sequences.empty()) {
    throw std::invalid_argument("no input sequences");
  }
  if (config.variants.empty()) {
    throw std::invalid_argument("no post-processing variants requested");
  }
  if (!config.post.valid()) {
    throw std::invalid_argument("invalid post-processing thresholds");
  }
  if (!config.ttc.valid()) {
    throw std::invalid_argument("invalid TTC search configuration");
  }

  const std::size_t n = config.sequences.size();
  std::vector<std::optional<SequenceComputation>> results(n);
  std::vector<std::string> errors(n);

  const auto run_one = [&](std::size_t i) {
    try {
      results[i] = analyze_sequence(config.sequences[i], config);
    } catch (const std::exception & e) {
      errors[i] = "sequence " + config.sequences[i].id + " (" +
                  config.sequences[i].labels.string() + "): " + e.what();
    }
  };

  const int jobs = std::max(1, config.jobs);
  if (jobs == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      run_one(i);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const int worker_count = std::min<std::size_t>(jobs, n);
    workers.reserve(worker_count);
    for (int w = 0; w < worker_count; ++w) {
      workers.emplace_back([&]() {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
          run_one(i);
        }
      });
    }
    for (std::thread & t : workers) {
      t.join();
    }
  }

  RunOutcome outcome;
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i].empty()) {
      outcome.errors.push_back(errors[i]);
    } else if (results[i].has_value()) {
      outcome.outputs.report.sequences.push_back(std::move(results[i]->report));
      for (InteractionSet & set : results[i]->sets) {
        outcome.outputs.interaction_sets.push_back(std::move(set));
      }
    }
  }
  if (!outcome.errors.empty()) {
    return outcome;
  }

  if (config.drop_undefined) {
    std::set<std::string> dropped;
    auto & seqs = outcome.outputs.report.sequences;
    for (const SequenceReport & seq : seqs) {
      for (const MethodStats & ms : seq.methods) {
        if (ms.ttc_min.empty()) {
          dropped.insert(seq.sequence);
          break;
        }
      }
    }
    std::erase_if(seqs, [&](const SequenceReport & s) { return dropped.count(s.sequence) > 0; });
    std::erase_if(outcome.outputs.interaction_sets, [&](const InteractionSet & s) {
      return dropped.count(s.sequence) > 0;
    });
  }

  outcome.outputs.report.ttc = config.ttc;
  outcome.outputs.report.totals = aggregate_totals(outcome.outputs.report.sequences);
  outcome.outputs.report.reductions = build_reductions(outcome.outputs.report.totals);
  return outcome;
}

}  // namespace

AnalysisOutputs run_analysis(const RunConfig & config)
{
  RunOutcome outcome = run_analysis_internal(config);
  if (!outcome.errors.empty()) {
    std::string joined;
    for (const std::string & e : outcome.errors) {
      if (!joined.empty()) {
        joined += "; ";
      }
      joined += e;
    }
    throw std::runtime_error(joined);
  }
  return std::move(outcome.outputs);
}

std::string export_interactions(const InteractionSet & set, ReportFormat format, bool emit_series)
{
  if (format == ReportFormat::Csv) {
    std::string out = "track_a,track_b,class_a,class_b,category,first_frame,last_frame,ttc_min";
    if (emit_series) {
      out += ",ttc_series";
    }
    out += '\n';
    for (const Interaction & inter : set.interactions) {
      out += std::to_string(inter.track_a) + ',' + std::to_string(inter.track_b) + ',';
      out += class_label(inter.track_a, inter.class_a) + ',';
      out += class_label(inter.track_b, inter.class_b) + ',';
      out += std::string(to_string(inter.category)) + ',';
      out += std::to_string(inter.first_frame) + ',' + std::to_string(inter.last_frame) + ',';
      if (inter.ttc_min.has_value()) {
        out += format_number(*inter.ttc_min);
      }
      if (emit_series) {
        out += ',';
        bool first = true;
        for (std::size_t i = 0; i < inter.ttc_series.size(); ++i) {
          if (!inter.ttc_series[i].has_value()) {
            continue;
          }
          if (!first) {
            out += ';';
          }
          first = false;
          out += std::to_string(inter.first_frame + static_cast<int>(i)) + ':' +
                 format_number(*inter.ttc_series[i]);
        }
      }
      out += '\n';
    }
    return out;
  }

  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const Interaction & inter : set.interactions) {
    nlohmann::ordered_json j;
    j["track_a"] = inter.track_a;
    j["track_b"] = inter.track_b;
    j["class_a"] = class_label(inter.track_a, inter.class_a);
    j["class_b"] = class_label(inter.track_b, inter.class_b);
    j["category"] = std::string(to_string(inter.category));
    j["first_frame"] = inter.first_frame;
    j["last_frame"] = inter.last_frame;
    j["ttc_min"] = inter.ttc_min.has_value() ? nlohmann::ordered_json(*inter.ttc_min)
                                             : nlohmann::ordered_json(nullptr);
    if (emit_series) {
      nlohmann::ordered_json series = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < inter.ttc_series.size(); ++i) {
        if (inter.ttc_series[i].has_value()) {
          series[std::to_string(inter.first_frame + static_cast<int>(i))] = *inter.ttc_series[i];
        }
      }
      j["ttc_series"] = std::move(series);
    }
    arr.push_back(std::move(j));
  }
  nlohmann::ordered_json root;
  root["sequence"] = set.sequence;
  root["method"] = set.method;
  root["variant"] = set.variant;
  root["interactions"] = std::move(arr);
  return root.dump(2) + "\n";
}

void write_analysis(const AnalysisOutputs & outputs, const RunConfig & config)
{
  std::filesystem::create_directories(config.out_dir);
  const bool csv = config.format == ReportFormat::Csv;
  const std::string ext = csv ? ".csv" : ".json";
  write_file(config.out_dir / ("report" + ext), export_report(outputs.report, config.format));

  std::set<std::string> used;
  for (const InteractionSet & set : outputs.interaction_sets) {
    std::string stem = "interactions_" + sanitize(set.sequence) + "_" + sanitize(set.method);
    std::string name = stem;
    for (int suffix = 2; used.count(name) > 0; ++suffix) {
      name = stem + "_" + std::to_string(suffix);
    }
    used.insert(name);
    write_file(
      config.out_dir / (name + ext), export_interactions(set, config.format, config.emit_series));
  }
}

int cmd_analyze(const RunConfig & config, std::ostream & out, std::ostream & err)
{
  RunOutcome outcome;
  try {
    outcome = run_analysis_internal(config);
  } catch (const std::exception & e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  if (!outcome.errors.empty()) {
    err << outcome.errors.size() << " sequence(s) failed; no outputs written\n";
    for (const std::string & e : outcome.errors) {
      err << "  " << e << "\n";
    }
    return 1;
  }
  try {
    write_analysis(outcome.outputs, config);
  } catch (const std::exception & e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  char line[160];
  out << "totals over " << outcome.outputs.report.sequences.size() << " sequence(s):\n";
  for (const TotalsRow & row : outcome.outputs.report.totals) {
    std::snprintf(
      line, sizeof(line), "  %-32s total %8zu   <10s %8zu   <1.5s %8zu\n", row.method.c_str(),
      row.counts.total_interactions, row.counts.below_10s, row.counts.below_1_5s);
    out << line;
  }
  const auto pct = [](const std::optional<double> & v) {
    char buf[32];
    if (!v.has_value()) {
      return std::string("n/a");
    }
    std::snprintf(buf, sizeof(buf), "%.2f%%", *v);
    return std::string(buf);
  };
  for (const ReductionRow & row : outcome.outputs.report.reductions) {
    std::snprintf(
      line, sizeof(line), "  %-32s vs %-24s reduction <10s %s  <1.5s %s\n", row.method.c_str(),
      row.baseline.c_str(), pct(row.below_10s_pct).c_str(), pct(row.below_1_5s_pct).c_str());
    out << line;
  }
  return 0;
}

// ---------------------------------------------------------------------------

namespace
{

std::map<int, std::vector<TrackedBox>> group_boxes(
  std::span<const ObservationRecord> records, RoadUserClass cls)
{
  std::map<int, std::vector<TrackedBox>> by_frame;
  for (const ObservationRecord & rec : records) {
    if (rec.cls != cls) {
      continue;
    }
    by_frame[rec.frame].push_back(TrackedBox{
      rec.track_id, Box2d{rec.bbox2d[0], rec.bbox2d[1], rec.bbox2d[2], rec.bbox2d[3]}});
  }
  return by_frame;
}

std::string pct_or_dash(const std::optional<double> & v)
{
  if (!v.has_value()) {
    return "-";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", *v * 100.0);
  return buf;
}

std::string opt_number(const std::optional<double> & v)
{
  return v.has_value() ? format_number(*v) : std::string();
}

}  // namespace

std::vector<ClassMetrics> run_metrics(const MetricsConfig & config)
{
  if (config.pairs.empty()) {
    throw std::invalid_argument("no (ground truth, prediction) file pairs");
  }
  if (!config.sequence_lengths.empty() && config.sequence_lengths.size() != config.pairs.size()) {
    throw std::invalid_argument("need one sequence length per file pair");
  }
  constexpr RoadUserClass kClasses[] = {
    RoadUserClass::Car, RoadUserClass::Pedestrian, RoadUserClass::Cyclist};
  std::map<RoadUserClass, MotTally> tallies;

  for (std::size_t pair_index = 0; pair_index < config.pairs.size(); ++pair_index) {
    const auto & [gt_path, pred_path] = config.pairs[pair_index];
    const auto gt_records = parse_tracking_labels(read_file(gt_path));
    const auto pred_records = parse_tracking_labels(read_file(pred_path));
    for (RoadUserClass cls : kClasses) {
      auto gt_frames = group_boxes(gt_records, cls);
      auto pred_frames = group_boxes(pred_records, cls);
      int max_frame = -1;
      if (!config.sequence_lengths.empty()) {
        max_frame = config.sequence_lengths[pair_index] - 1;
      }
      if (!gt_frames.empty()) {
        max_frame = std::max(max_frame, gt_frames.rbegin()->first);
      }
      if (!pred_frames.empty()) {
        max_frame = std::max(max_frame, pred_frames.rbegin()->first);
      }
      MotAccumulator acc(config.match);
      static const std::vector<TrackedBox> kEmpty;
      for (int frame = 0; frame <= max_frame; ++frame) {
        const auto g = gt_frames.find(frame);
        const auto p = pred_frames.find(frame);
        acc.observe_frame(
          g == gt_frames.end() ? kEmpty : g->second,
          p == pred_frames.end() ? kEmpty : p->second);
      }
      tallies[cls] += acc.finish();
    }
  }

  std::vector<ClassMetrics> rows;
  MotTally overall;
  for (RoadUserClass cls : kClasses) {
    overall += tallies[cls];
    rows.push_back(ClassMetrics{std::string(to_string(cls)), metrics(tallies[cls])});
  }
  rows.push_back(ClassMetrics{"Overall", metrics(overall)});
  return rows;
}

std::string format_metrics_table(std::span<const ClassMetrics> rows)
{
  std::string out =
    "class       MOTA%   MOTP%   MODA%   MODP%   IDF1%     MT%     ML%     FP%     FN%   IDSW"
    "   FRAG        GT\n";
  char line[256];
  for (const ClassMetrics & row : rows) {
    const MotReport & r = row.report;
    std::snprintf(
      line, sizeof(line), "%-10s %7s %7s %7s %7s %7s %7s %7s %7s %7s %6lld %6lld %9lld\n",
      row.label.c_str(), pct_or_dash(r.mota).c_str(), pct_or_dash(r.motp).c_str(),
      pct_or_dash(r.moda).c_str(), pct_or_dash(r.modp).c_str(), pct_or_dash(r.idf1).c_str(),
      pct_or_dash(r.mt).c_str(), pct_or_dash(r.ml).c_str(),
      r.fp_pct.has_value() ? pct_or_dash(*r.fp_pct / 100.0).c_str() : "-",
      r.fn_pct.has_value() ? pct_or_dash(*r.fn_pct / 100.0).c_str() : "-", r.counts.idsw,
      r.counts.frag, r.counts.gt);
    out += line;
  }
  return out;
}

std::string export_metrics(std::span<const ClassMetrics> rows, ReportFormat format)
{
  if (format == ReportFormat::Csv) {
    std::string out =
      "class,mota,motp,motp_distance,moda,modp,idf1,det_f1,mt,ml,fp_pct,fn_pct,"
      "gt,tp,fp,fn,idsw,frag,gt_tracks,frames\n";
    for (const ClassMetrics & row : rows) {
      const MotReport & r = row.report;
      out += row.label + ',' + opt_number(r.mota) + ',' + opt_number(r.motp) + ',' +
             opt_number(r.motp_distance) + ',' + opt_number(r.moda) + ',' + opt_number(r.modp) +
             ',' + opt_number(r.idf1) + ',' + opt_number(r.det_f1) + ',' + opt_number(r.mt) +
             ',' + opt_number(r.ml) + ',' + opt_number(r.fp_pct) + ',' + opt_number(r.fn_pct) +
             ',' + std::to_string(r.counts.gt) + ',' + std::to_string(r.counts.tp) + ',' +
             std::to_string(r.counts.fp) + ',' + std::to_string(r.counts.fn) + ',' +
             std::to_string(r.counts.idsw) + ',' + std::to_string(r.counts.frag) + ',' +
             std::to_string(r.counts.gt_tracks) + ',' + std::to_string(r.counts.frames) + '\n';
    }
    return out;
  }

  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  const auto opt = [](const std::optional<double> & v) {
    return v.has_value() ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  for (const ClassMetrics & row : rows) {
    const MotReport & r = row.report;
    nlohmann::ordered_json j;
    j["class"] = row.label;
    j["mota"] = opt(r.mota);
    j["motp"] = opt(r.motp);
    j["motp_distance"] = opt(r.motp_distance);
    j["moda"] = opt(r.moda);
    j["modp"] = opt(r.modp);
    j["idf1"] = opt(r.idf1);
    j["det_f1"] = opt(r.det_f1);
    j["mt"] = opt(r.mt);
    j["ml"] = opt(r.ml);
    j["fp_pct"] = opt(r.fp_pct);
    j["fn_pct"] = opt(r.fn_pct);
    j["counts"] = {
      {"gt", r.counts.gt},       {"tp", r.counts.tp},     {"fp", r.counts.fp},
      {"fn", r.counts.fn},       {"idsw", r.counts.idsw}, {"frag", r.counts.frag},
      {"gt_tracks", r.counts.gt_tracks}, {"frames", r.counts.frames},
      {"idtp", r.counts.idtp},   {"pred_object_frames", r.counts.pred_object_frames}};
    arr.push_back(std::move(j));
  }
  nlohmann::ordered_json root;
  root["schema"] = "smos.mot_metrics/1";
  root["classes"] = std::move(arr);
  return root.dump(2) + "\n";
}

int cmd_metrics(const MetricsConfig & config, std::ostream & out, std::ostream & err)
{
  std::vector<ClassMetrics> rows;
  try {
    rows = run_metrics(config);
    out << format_metrics_table(rows);
    if (config.out.has_value()) {
      write_file(*config.out, export_metrics(rows, config.format));
    }
  } catch (const std::exception & e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_parse_check(
  const std::vector<std::filesystem::path> & files, std::ostream & out, std::ostream & err)
{
  int failures = 0;
  for (const std::filesystem::path & path : files) {
    try {
      const auto records = parse_tracking_labels(read_file(path));
      std::size_t analyzed = 0;
      for (const ObservationRecord & rec : records) {
        if (is_analyzed(rec.cls)) {
          ++analyzed;
        }
      }
      out << path.string() << ": " << records.size() << " records (" << analyzed
          << " analyzed)\n";
    } catch (const std::exception & e) {
      err << path.string() << ": error: " << e.what() << "\n";
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}

int cmd_postprocess(const PostprocessRun & run, std::ostream & out, std::ostream & err)
{
  try {
    std::filesystem::create_directories(run.out_dir);
    for (const SequenceInput & input : run.sequences) {
      const auto built = load_trajectories(input.labels, input.poses, run.include_ego, run.ego);
      const auto trajectories = postprocess(built, run.variant.post, run.post);
      std::string csv = "frame,track_id,class,x,z,yaw,length,width,vx,vz,stationary\n";
      for (const Trajectory & traj : trajectories) {
        for (const BevState & s : traj.states) {
          csv += std::to_string(s.frame) + ',' + std::to_string(traj.track_id) + ',';
          csv += class_label(traj.track_id, traj.cls) + ',';
          csv += format_number(s.position.x) + ',' + format_number(s.position.z) + ',';
          csv += format_number(s.yaw) + ',' + format_number(s.length) + ',' +
                 format_number(s.width) + ',';
          csv += s.velocity.has_value() ? format_number(s.velocity->x) : std::string();
          csv += ',';
          csv += s.velocity.has_value() ? format_number(s.velocity->z) : std::string();
          csv += ',';
          csv += traj.stationary ? "true" : "false";
          csv += '\n';
        }
      }
      const std::string name =
        "postprocessed_" + sanitize(input.id) + "_" + sanitize(run.variant.name) + ".csv";
      write_file(run.out_dir / name, csv);
      out << input.id << ": " << trajectories.size() << " trajectories\n";
    }
  } catch (const std::exception & e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int cmd_export_cdf(
  const std::filesystem::path & report_json, const std::filesystem::path & out_file,
  std::ostream & err)
{
  try {
    const AnalysisReport report = import_report(read_file(report_json), ReportFormat::Json);
    write_file(out_file, export_cdf_table(report));
  } catch (const std::exception & e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace smos
