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

#ifndef SMOS_STATS_REPORT_HPP_
#define SMOS_STATS_REPORT_HPP_

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smos/bev_geometry.hpp"
#include "smos/safety_indicators.hpp"

namespace smos
{

/// Right-continuous empirical CDF: F(x) = fraction of samples <= x.
class EmpiricalCdf
{
public:
  explicit EmpiricalCdf(std::vector<double> samples);

  double operator()(double x) const;
  std::span<const double> values() const { return values_; }

  /// (value, cumulative probability) per distinct sample value.
  std::vector<std::pair<double, double>> steps() const;

private:
  std::vector<double> values_;  // sorted ascending
};

/// Two-sample Kolmogorov-Smirnov D: sup over x of |F_a(x) - F_b(x)|,
/// evaluated exactly at the pooled sample points. Nullopt on empty input.
std::optional<double> ks_d_statistic(std::span<const double> a, std::span<const double> b);

/// Middle order statistic; mean of the two middle values for even sizes.
std::optional<double> median(std::span<const double> samples);

inline bool within_band(double method_median, double reference_median, double band = 0.5)
{
  return std::abs(method_median - reference_median) <= band;
}

/// Shortest decimal form that parses back to the same double.
std::string format_number(double v);

// ---------------------------------------------------------------------------
// Report structures behind the severity / comparison tables.

struct MethodStats
{
  std::string method;   // display label, e.g. "GroundTruth+SS"
  std::string variant;  // none | idsplit | idsplit+ss | ss
  SeverityCounts counts;
  std::vector<double> ttc_min;                      // defined TTC_min samples, sorted
  std::vector<double> ttc_min_both_moving;          // category split of the above
  std::vector<double> ttc_min_involves_stationary;
  std::optional<double> median_ttc_min;
  std::optional<double> d_vs_gt;                // KS D against the reference samples
  std::optional<double> median_abs_diff_vs_gt;
  std::optional<bool> within_half_second_of_gt;
};

struct SequenceReport
{
  std::string sequence;
  std::vector<MethodStats> methods;
};

struct TotalsRow
{
  std::string method;
  std::string variant;
  SeverityCounts counts;
};

struct ReductionRow
{
  std::string method;    // the post-processed row
  std::string baseline;  // the row it is compared against
  std::optional<double> below_10s_pct;
  std::optional<double> below_1_5s_pct;
};

struct AnalysisReport
{
  TtcConfig ttc;
  std::vector<SequenceReport> sequences;  // sorted by sequence id
  std::vector<TotalsRow> totals;
  std::vector<ReductionRow> reductions;
};

enum class ReportFormat { Csv, Json };

std::optional<ReportFormat> report_format_from_string(std::string_view name);

/// Deterministic serialization; sequences sorted by id. JSON carries the
/// TTC_min samples, CSV only the table columns.
std::string export_report(const AnalysisReport & report, ReportFormat format);

/// Reads back what export_report wrote; export(import(export(r))) is a
/// fixed point per format.
AnalysisReport import_report(const std::string & content, ReportFormat format);

/// CDF step table (CSV) for external plotting: one row per
/// (sequence, method, category, value) with the cumulative probability.
std::string export_cdf_table(const AnalysisReport & report);

/// Columnwise sums of the severity counts across sequences, one row per
/// (method, variant) in first-appearance order.
std::vector<TotalsRow> aggregate_totals(std::span<const SequenceReport> sequences);

}  // namespace smos

#endif  // SMOS_STATS_REPORT_HPP_
