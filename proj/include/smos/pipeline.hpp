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

#ifndef SMOS_PIPELINE_HPP_
#define SMOS_PIPELINE_HPP_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "smos/kitti_io.hpp"
#include "smos/mot_metrics.hpp"
#include "smos/safety_indicators.hpp"
#include "smos/stats_report.hpp"
#include "smos/trajectory_post.hpp"

namespace smos
{

/// Post-processing variant with its canonical token and display suffix:
///   none -> "", idsplit -> "+IDsplit", idsplit+ss -> "+IDsplit+SS", ss -> "+SS".
struct VariantSpec
{
  std::string name;
  PostVariant post;
};

std::optional<VariantSpec> variant_from_name(std::string_view name);
std::string variant_suffix(const VariantSpec & variant);

struct SequenceInput
{
  std::string id;  // output key, defaults to the label file stem
  std::filesystem::path labels;
  std::optional<std::filesystem::path> poses;
  std::optional<std::filesystem::path> gt_labels;  // reference for D / median comparisons
};

struct RunConfig
{
  std::vector<SequenceInput> sequences;
  std::string method = "method";
  std::string gt_method = "GroundTruth";
  std::vector<VariantSpec> variants;  // at least one
  bool gt_idsplit = false;            // also split the reference trajectories
  PostProcessConfig post;
  TtcConfig ttc;
  bool include_ego = true;
  EgoConfig ego;
  bool drop_undefined = false;  // drop sequences where a row has no defined TTC_min
  bool emit_series = false;     // include per-frame TTC series in interaction files
  std::filesystem::path out_dir;
  ReportFormat format = ReportFormat::Json;
  int jobs = 1;
};

struct InteractionSet
{
  std::string sequence;
  std::string method;  // display label (method or reference, with variant suffix)
  std::string variant;
  std::vector<Interaction> interactions;
};

struct AnalysisOutputs
{
  AnalysisReport report;
  std::vector<InteractionSet> interaction_sets;
};

/// Parses one label file, projects to BEV (optionally into the world frame
/// via poses) and builds per-track trajectories, appending the ego
/// trajectory when requested.
std::vector<Trajectory> load_trajectories(
  const std::filesystem::path & labels, const std::optional<std::filesystem::path> & poses,
  bool include_ego, const EgoConfig & ego);

/// Full analysis over all configured sequences and variants. Throws on the
/// first input error when jobs == 1; with a worker pool the first error (in
/// input order) is rethrown after all workers drain.
AnalysisOutputs run_analysis(const RunConfig & config);

void write_analysis(const AnalysisOutputs & outputs, const RunConfig & config);

/// analyze subcommand: computes everything first and only then writes, so a
/// failing sequence leaves no partial outputs. Returns the process exit
/// code; per-sequence failures are summarized on `err`.
int cmd_analyze(const RunConfig & config, std::ostream & out, std::ostream & err);

// ---------------------------------------------------------------------------

struct MetricsConfig
{
  std::vector<std::pair<std::filesystem::path, std::filesystem::path>> pairs;  // (gt, pred)
  std::vector<int> sequence_lengths;  // optional, parallel to pairs; default max frame + 1
  MatchOptions match;
  std::optional<std::filesystem::path> out;
  ReportFormat format = ReportFormat::Json;
};

struct ClassMetrics
{
  std::string label;  // "Car", "Pedestrian", "Cyclist" or "Overall"
  MotReport report;
};

std::vector<ClassMetrics> run_metrics(const MetricsConfig & config);
std::string format_metrics_table(std::span<const ClassMetrics> rows);
std::string export_metrics(std::span<const ClassMetrics> rows, ReportFormat format);
int cmd_metrics(const MetricsConfig & config, std::ostream & out, std::ostream & err);

// ---------------------------------------------------------------------------

int cmd_parse_check(
  const std::vector<std::filesystem::path> & files, std::ostream & out, std::ostream & err);

struct PostprocessRun
{
  std::vector<SequenceInput> sequences;
  VariantSpec variant;
  PostProcessConfig post;
  bool include_ego = false;
  EgoConfig ego;
  std::filesystem::path out_dir;
};

int cmd_postprocess(const PostprocessRun & run, std::ostream & out, std::ostream & err);

int cmd_export_cdf(
  const std::filesystem::path & report_json, const std::filesystem::path & out_file,
  std::ostream & err);

// ---------------------------------------------------------------------------

std::string read_file(const std::filesystem::path & path);
void write_file(const std::filesystem::path & path, const std::string & content);

/// Serialization of interaction sets ("--emit-series" adds the per-frame
/// TTC values).
std::string export_interactions(const InteractionSet & set, ReportFormat format, bool emit_series);

}  // namespace smos

#endif  // SMOS_PIPELINE_HPP_
