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

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smos/pipeline.hpp"

namespace
{

std::vector<smos::SequenceInput> build_sequence_inputs(
  const std::vector<std::string> & labels, const std::vector<std::string> & poses,
  const std::vector<std::string> & gt_labels)
{
  if (!poses.empty() && poses.size() != labels.size()) {
    throw CLI::ValidationError("--poses", "needs one pose file per label file");
  }
  if (!gt_labels.empty() && gt_labels.size() != labels.size()) {
    throw CLI::ValidationError("--gt-labels", "needs one reference file per label file");
  }
  std::vector<smos::SequenceInput> sequences;
  sequences.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    smos::SequenceInput input;
    input.labels = labels[i];
    input.id = input.labels.stem().string();
    if (!poses.empty()) {
      input.poses = std::filesystem::path(poses[i]);
    }
    if (!gt_labels.empty()) {
      input.gt_labels = std::filesystem::path(gt_labels[i]);
    }
    sequences.push_back(std::move(input));
  }
  return sequences;
}

std::vector<smos::VariantSpec> resolve_variants(
  const std::vector<std::string> & names, bool enable_idsplit, bool enable_ss)
{
  std::vector<smos::VariantSpec> variants;
  if (names.empty()) {
    smos::PostVariant post{enable_idsplit, enable_ss};
    std::string token = "none";
    if (post.idsplit && post.ss) token = "idsplit+ss";
    else if (post.idsplit) token = "idsplit";
    else if (post.ss) token = "ss";
    variants.push_back(*smos::variant_from_name(token));
    return variants;
  }
  for (const std::string & name : names) {
    const auto v = smos::variant_from_name(name);
    if (!v.has_value()) {
      throw CLI::ValidationError(
        "--variants", "unknown variant '" + name + "' (use none, idsplit, idsplit+ss, ss)");
    }
    variants.push_back(*v);
  }
  return variants;
}

smos::ReportFormat resolve_format(const std::string & name)
{
  const auto format = smos::report_format_from_string(name);
  if (!format.has_value()) {
    throw CLI::ValidationError("--format", "must be csv or json");
  }
  return *format;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"surrogate safety analysis for KITTI-format tracking data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "smos 0.1.0");

  // --- analyze ---------------------------------------------------------
  auto * analyze = app.add_subcommand(
    "analyze", "TTC interaction analysis: severity counts, distributions, comparisons");
  std::vector<std::string> labels, poses, gt_labels, variant_names;
  std::string method = "method";
  std::string gt_method = "GroundTruth";
  std::string format_name = "json";
  std::string out_dir = "smos_out";
  bool enable_idsplit = false, enable_ss = false, gt_idsplit = false;
  bool include_ego = true, drop_undefined = false, emit_series = false;
  smos::PostProcessConfig post;
  smos::TtcConfig ttc;
  smos::EgoConfig ego;
  int jobs = 1;
  analyze->add_option("--labels", labels, "KITTI tracking label file, one per sequence")
    ->required();
  analyze->add_option("--poses", poses, "ego-pose file per sequence (world-frame analysis)");
  analyze->add_option(
    "--gt-labels", gt_labels, "reference (ground truth) label file per sequence");
  analyze->add_option("--method", method, "method label carried into every output row");
  analyze->add_option("--gt-method", gt_method, "label for the reference rows");
  analyze->add_option(
    "--variants", variant_names,
    "post-processing variants to run (none, idsplit, idsplit+ss, ss); reductions are "
    "emitted against the none variant");
  analyze->add_flag("--enable-idsplit", enable_idsplit, "apply IDsplit (single-variant mode)");
  analyze->add_flag("--enable-ss", enable_ss, "apply stationary smoothing (single-variant mode)");
  analyze->add_flag(
    "--gt-idsplit", gt_idsplit, "also apply IDsplit to the reference trajectories");
  analyze->add_flag(
    "--include-ego,!--no-include-ego", include_ego, "include the ego vehicle as a road user");
  analyze->add_flag(
    "--drop-undefined", drop_undefined, "drop sequences where a row has no defined TTC_min");
  analyze->add_flag("--emit-series", emit_series, "write per-frame TTC series");
  analyze->add_option("--thr-split", post.thr_split, "IDsplit gap threshold (frames)");
  analyze->add_option("--thr-cons", post.thr_cons, "IDsplit minimum segment length (frames)");
  analyze->add_option("--thr-sta", post.thr_sta, "SS endpoint displacement threshold (meters)");
  analyze->add_option("--fps", post.fps, "recording frame rate");
  analyze->add_option("--velocity-window", post.velocity_window, "velocity difference half-window");
  analyze->add_option("--ttc-horizon", ttc.horizon, "TTC search cap (seconds)");
  analyze->add_option("--ttc-dt", ttc.dt, "TTC search resolution (seconds)");
  analyze->add_option("--ego-length", ego.length, "ego box length (meters)");
  analyze->add_option("--ego-width", ego.width, "ego box width (meters)");
  analyze->add_option("--ego-offset-x", ego.offset.x, "ego box center x in camera frame");
  analyze->add_option("--ego-offset-z", ego.offset.z, "ego box center z in camera frame");
  analyze->add_option("--format", format_name, "output format: csv or json");
  analyze->add_option("--out", out_dir, "output directory");
  analyze->add_option("--jobs", jobs, "sequence worker pool size");

  // --- metrics ---------------------------------------------------------
  auto * metrics_cmd =
    app.add_subcommand("metrics", "CLEAR MOT evaluation of tracker output against ground truth");
  std::vector<std::string> metrics_gt, metrics_pred;
  std::vector<int> metrics_lengths;
  double gate_iou = 0.5;
  bool cost_center = false;
  std::string metrics_format = "json";
  std::string metrics_out;
  metrics_cmd->add_option("--gt", metrics_gt, "ground-truth label file(s)")->required();
  metrics_cmd->add_option("--pred", metrics_pred, "tracker output file(s), paired with --gt")
    ->required();
  metrics_cmd->add_option(
    "--seq-length", metrics_lengths, "sequence length per pair (default: max frame + 1)");
  metrics_cmd->add_option("--gate-iou", gate_iou, "matching gate (IoU)");
  metrics_cmd->add_flag(
    "--cost-center", cost_center, "match on center distance instead of 1 - IoU");
  metrics_cmd->add_option("--format", metrics_format, "serialization format: csv or json");
  metrics_cmd->add_option("--out", metrics_out, "also write the report to this file");

  // --- parse-check -----------------------------------------------------
  auto * parse_check = app.add_subcommand("parse-check", "validate KITTI tracking label files");
  std::vector<std::string> check_files;
  parse_check->add_option("files", check_files, "label files")->required();

  // --- postprocess -----------------------------------------------------
  auto * postprocess =
    app.add_subcommand("postprocess", "write post-processed trajectories as CSV");
  std::vector<std::string> pp_labels, pp_poses;
  std::string pp_variant = "none";
  std::string pp_out = "smos_out";
  bool pp_include_ego = true;
  smos::PostProcessConfig pp_post;
  smos::EgoConfig pp_ego;
  postprocess->add_option("--labels", pp_labels, "label file per sequence")->required();
  postprocess->add_option("--poses", pp_poses, "ego-pose file per sequence");
  postprocess->add_option("--variant", pp_variant, "none, idsplit, idsplit+ss or ss");
  postprocess->add_option("--thr-split", pp_post.thr_split, "IDsplit gap threshold (frames)");
  postprocess->add_option("--thr-cons", pp_post.thr_cons, "IDsplit minimum segment length");
  postprocess->add_option("--thr-sta", pp_post.thr_sta, "SS displacement threshold (meters)");
  postprocess->add_option("--fps", pp_post.fps, "recording frame rate");
  postprocess->add_option("--velocity-window", pp_post.velocity_window, "velocity half-window");
  postprocess->add_flag(
    "--include-ego,!--no-include-ego", pp_include_ego, "include the ego trajectory");
  postprocess->add_option("--ego-length", pp_ego.length, "ego box length");
  postprocess->add_option("--ego-width", pp_ego.width, "ego box width");
  postprocess->add_option("--out", pp_out, "output directory");

  // --- export-cdf ------------------------------------------------------
  auto * export_cdf =
    app.add_subcommand("export-cdf", "CDF step table from an analyze JSON report");
  std::string cdf_report, cdf_out = "cdf.csv";
  export_cdf->add_option("--report", cdf_report, "report.json written by analyze")->required();
  export_cdf->add_option("--out", cdf_out, "output CSV file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) {
      smos::RunConfig config;
      config.sequences = build_sequence_inputs(labels, poses, gt_labels);
      config.method = method;
      config.gt_method = gt_method;
      config.variants = resolve_variants(variant_names, enable_idsplit, enable_ss);
      config.gt_idsplit = gt_idsplit;
      config.post = post;
      config.ttc = ttc;
      config.include_ego = include_ego;
      config.ego = ego;
      config.drop_undefined = drop_undefined;
      config.emit_series = emit_series;
      config.out_dir = out_dir;
      config.format = resolve_format(format_name);
      config.jobs = jobs;
      return smos::cmd_analyze(config, std::cout, std::cerr);
    }
    if (metrics_cmd->parsed()) {
      if (metrics_gt.size() != metrics_pred.size()) {
        std::cerr << "error: --gt and --pred need the same number of files\n";
        return 2;
      }
      smos::MetricsConfig config;
      for (std::size_t i = 0; i < metrics_gt.size(); ++i) {
        config.pairs.emplace_back(metrics_gt[i], metrics_pred[i]);
      }
      config.sequence_lengths = metrics_lengths;
      config.match.gate_iou = gate_iou;
      config.match.cost_center_distance = cost_center;
      config.format = resolve_format(metrics_format);
      if (!metrics_out.empty()) {
        config.out = std::filesystem::path(metrics_out);
      }
      return smos::cmd_metrics(config, std::cout, std::cerr);
    }
    if (parse_check->parsed()) {
      std::vector<std::filesystem::path> files(check_files.begin(), check_files.end());
      return smos::cmd_parse_check(files, std::cout, std::cerr);
    }
    if (postprocess->parsed()) {
      smos::PostprocessRun run;
      run.sequences = build_sequence_inputs(pp_labels, pp_poses, {});
      const auto variant = smos::variant_from_name(pp_variant);
      if (!variant.has_value()) {
        std::cerr << "error: unknown variant '" << pp_variant << "'\n";
        return 2;
      }
      run.variant = *variant;
      run.post = pp_post;
      run.include_ego = pp_include_ego;
      run.ego = pp_ego;
      run.out_dir = pp_out;
      return smos::cmd_postprocess(run, std::cout, std::cerr);
    }
    if (export_cdf->parsed()) {
      return smos::cmd_export_cdf(cdf_report, cdf_out, std::cerr);
    }
  } catch (const CLI::Error & e) {
    return app.exit(e);
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
