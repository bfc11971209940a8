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

#include "smos/stats_report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "smos/error.hpp"

namespace smos
{

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : values_(std::move(samples))
{
  if (values_.empty()) {
    throw std::invalid_argument("EmpiricalCdf: empty sample");
  }
  std::sort(values_.begin(), values_.end());
}

double EmpiricalCdf::operator()(double x) const
{
  const auto it = std::upper_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

std::vector<std::pair<double, double>> EmpiricalCdf::steps() const
{
  std::vector<std::pair<double, double>> out;
  const double n = static_cast<double>(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i + 1 < values_.size() && values_[i + 1] == values_[i]) {
      continue;  // collapse ties into one step
    }
    out.emplace_back(values_[i], static_cast<double>(i + 1) / n);
  }
  return out;
}

std::optional<double> ks_d_statistic(std::span<const double> a, std::span<const double> b)
{
  if (a.empty() || b.empty()) {
    return std::nullopt;
  }
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const std::size_t n = sa.size();
  const std::size_t m = sb.size();
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < n || j < m) {
    double x;
    if (i < n && j < m) {
      x = std::min(sa[i], sb[j]);
    } else if (i < n) {
      x = sa[i];
    } else {
      x = sb[j];
    }
    while (i < n && sa[i] <= x) ++i;
    while (j < m && sb[j] <= x) ++j;
    d = std::max(
      d, std::abs(
           static_cast<double>(i) / static_cast<double>(n) -
           static_cast<double>(j) / static_cast<double>(m)));
  }
  return d;
}

std::optional<double> median(std::span<const double> samples)
{
  if (samples.empty()) {
    return std::nullopt;
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  if (n % 2 == 1) {
    return sorted[n / 2];
  }
  return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

std::string format_number(double v)
{
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::optional<ReportFormat> report_format_from_string(std::string_view name)
{
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  return std::nullopt;
}

namespace
{

using nlohmann::ordered_json;

constexpr const char * kCsvHeader =
  "kind,sequence,method,variant,total_interactions,below_10s,below_1_5s,median_ttc_min,"
  "d_vs_gt,median_abs_diff_vs_gt,within_half_second_of_gt,baseline,"
  "below_10s_reduction_pct,below_1_5s_reduction_pct";

std::string opt_field(const std::optional<double> & v)
{
  return v.has_value() ? format_number(*v) : std::string();
}

std::string opt_field(const std::optional<bool> & v)
{
  if (!v.has_value()) {
    return {};
  }
  return *v ? "true" : "false";
}

void require_no_comma(const std::string & label)
{
  if (label.find(',') != std::string::npos) {
    throw std::invalid_argument("label may not contain a comma: '" + label + "'");
  }
}

std::string export_csv(const AnalysisReport & report)
{
  std::string out = kCsvHeader;
  out += '\n';
  for (const SequenceReport & seq : report.sequences) {
    for (const MethodStats & ms : seq.methods) {
      require_no_comma(ms.method);
      out += "seq," + seq.sequence + ',' + ms.method + ',' + ms.variant + ',';
      out += std::to_string(ms.counts.total_interactions) + ',';
      out += std::to_string(ms.counts.below_10s) + ',';
      out += std::to_string(ms.counts.below_1_5s) + ',';
      out += opt_field(ms.median_ttc_min) + ',';
      out += opt_field(ms.d_vs_gt) + ',';
      out += opt_field(ms.median_abs_diff_vs_gt) + ',';
      out += opt_field(ms.within_half_second_of_gt) + ",,,\n";
    }
  }
  for (const TotalsRow & row : report.totals) {
    require_no_comma(row.method);
    out += "total,," + row.method + ',' + row.variant + ',';
    out += std::to_string(row.counts.total_interactions) + ',';
    out += std::to_string(row.counts.below_10s) + ',';
    out += std::to_string(row.counts.below_1_5s) + ",,,,,,,\n";
  }
  for (const ReductionRow & row : report.reductions) {
    require_no_comma(row.method);
    require_no_comma(row.baseline);
    out += "reduction,," + row.method + ",,,,,,,,," + row.baseline + ',';
    out += opt_field(row.below_10s_pct) + ',' + opt_field(row.below_1_5s_pct) + '\n';
  }
  return out;
}

ordered_json samples_json(const std::vector<double> & samples)
{
  ordered_json arr = ordered_json::array();
  for (double v : samples) {
    arr.push_back(v);
  }
  return arr;
}

ordered_json opt_json(const std::optional<double> & v)
{
  return v.has_value() ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json opt_json(const std::optional<bool> & v)
{
  return v.has_value() ? ordered_json(*v) : ordered_json(nullptr);
}

std::string export_json(const AnalysisReport & report)
{
  ordered_json j;
  j["schema"] = "smos.analysis_report/1";
  j["ttc"] = {{"horizon", report.ttc.horizon}, {"dt", report.ttc.dt}};
  ordered_json sequences = ordered_json::array();
  for (const SequenceReport & seq : report.sequences) {
    ordered_json js;
    js["sequence"] = seq.sequence;
    ordered_json methods = ordered_json::array();
    for (const MethodStats & ms : seq.methods) {
      ordered_json jm;
      jm["method"] = ms.method;
      jm["variant"] = ms.variant;
      jm["counts"] = {
        {"total_interactions", ms.counts.total_interactions},
        {"below_10s", ms.counts.below_10s},
        {"below_1_5s", ms.counts.below_1_5s}};
      jm["ttc_min"] = samples_json(ms.ttc_min);
      jm["ttc_min_both_moving"] = samples_json(ms.ttc_min_both_moving);
      jm["ttc_min_involves_stationary"] = samples_json(ms.ttc_min_involves_stationary);
      jm["median_ttc_min"] = opt_json(ms.median_ttc_min);
      jm["d_vs_gt"] = opt_json(ms.d_vs_gt);
      jm["median_abs_diff_vs_gt"] = opt_json(ms.median_abs_diff_vs_gt);
      jm["within_half_second_of_gt"] = opt_json(ms.within_half_second_of_gt);
      methods.push_back(std::move(jm));
    }
    js["methods"] = std::move(methods);
    sequences.push_back(std::move(js));
  }
  j["sequences"] = std::move(sequences);

  ordered_json totals = ordered_json::array();
  for (const TotalsRow & row : report.totals) {
    totals.push_back(ordered_json{
      {"method", row.method},
      {"variant", row.variant},
      {"total_interactions", row.counts.total_interactions},
      {"below_10s", row.counts.below_10s},
      {"below_1_5s", row.counts.below_1_5s}});
  }
  j["totals"] = std::move(totals);

  ordered_json reductions = ordered_json::array();
  for (const ReductionRow & row : report.reductions) {
    reductions.push_back(ordered_json{
      {"method", row.method},
      {"baseline", row.baseline},
      {"below_10s_pct", opt_json(row.below_10s_pct)},
      {"below_1_5s_pct", opt_json(row.below_1_5s_pct)}});
  }
  j["reductions"] = std::move(reductions);
  return j.dump(2) + "\n";
}

std::vector<std::string> split_csv_line(const std::string & line)
{
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

std::optional<double> parse_opt_double(const std::string & s, std::size_t line)
{
  if (s.empty()) {
    return std::nullopt;
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError(line, "bad number '" + s + "'");
  }
  return v;
}

std::size_t parse_count(const std::string & s, std::size_t line)
{
  unsigned long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError(line, "bad count '" + s + "'");
  }
  return static_cast<std::size_t>(v);
}

AnalysisReport import_csv(const std::string & content)
{
  AnalysisReport report;
  std::size_t pos = 0, line_no = 0;
  SequenceReport * current = nullptr;
  while (pos < content.size()) {
    const std::size_t eol = content.find('\n', pos);
    std::string line =
      content.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
    pos = eol == std::string::npos ? content.size() : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    if (line_no == 1) {
      if (line != kCsvHeader) {
        throw ParseError(1, "unexpected report header");
      }
      continue;
    }
    const auto f = split_csv_line(line);
    if (f.size() != 14) {
      throw ParseError(line_no, "expected 14 columns, got " + std::to_string(f.size()));
    }
    if (f[0] == "seq") {
      if (current == nullptr || current->sequence != f[1]) {
        report.sequences.push_back(SequenceReport{f[1], {}});
        current = &report.sequences.back();
      }
      MethodStats ms;
      ms.method = f[2];
      ms.variant = f[3];
      ms.counts.total_interactions = parse_count(f[4], line_no);
      ms.counts.below_10s = parse_count(f[5], line_no);
      ms.counts.below_1_5s = parse_count(f[6], line_no);
      ms.median_ttc_min = parse_opt_double(f[7], line_no);
      ms.d_vs_gt = parse_opt_double(f[8], line_no);
      ms.median_abs_diff_vs_gt = parse_opt_double(f[9], line_no);
      if (!f[10].empty()) {
        ms.within_half_second_of_gt = (f[10] == "true");
      }
      current->methods.push_back(std::move(ms));
    } else if (f[0] == "total") {
      TotalsRow row;
      row.method = f[2];
      row.variant = f[3];
      row.counts.total_interactions = parse_count(f[4], line_no);
      row.counts.below_10s = parse_count(f[5], line_no);
      row.counts.below_1_5s = parse_count(f[6], line_no);
      report.totals.push_back(std::move(row));
    } else if (f[0] == "reduction") {
      ReductionRow row;
      row.method = f[2];
      row.baseline = f[11];
      row.below_10s_pct = parse_opt_double(f[12], line_no);
      row.below_1_5s_pct = parse_opt_double(f[13], line_no);
      report.reductions.push_back(std::move(row));
    } else {
      throw ParseError(line_no, "unknown row kind '" + f[0] + "'");
    }
  }
  return report;
}

std::vector<double> samples_from_json(const ordered_json & arr)
{
  std::vector<double> out;
  out.reserve(arr.size());
  for (const auto & v : arr) {
    out.push_back(v.get<double>());
  }
  return out;
}

template <typename T>
std::optional<T> opt_from_json(const ordered_json & v)
{
  if (v.is_null()) {
    return std::nullopt;
  }
  return v.get<T>();
}

AnalysisReport import_json(const std::string & content)
{
  ordered_json j;
  try {
    j = ordered_json::parse(content);
  } catch (const nlohmann::json::parse_error & e) {
    throw ParseError(1, std::string("invalid report JSON: ") + e.what());
  }
  AnalysisReport report;
  report.ttc.horizon = j.at("ttc").at("horizon").get<double>();
  report.ttc.dt = j.at("ttc").at("dt").get<double>();
  for (const auto & js : j.at("sequences")) {
    SequenceReport seq;
    seq.sequence = js.at("sequence").get<std::string>();
    for (const auto & jm : js.at("methods")) {
      MethodStats ms;
      ms.method = jm.at("method").get<std::string>();
      ms.variant = jm.at("variant").get<std::string>();
      ms.counts.total_interactions = jm.at("counts").at("total_interactions").get<std::size_t>();
      ms.counts.below_10s = jm.at("counts").at("below_10s").get<std::size_t>();
      ms.counts.below_1_5s = jm.at("counts").at("below_1_5s").get<std::size_t>();
      ms.ttc_min = samples_from_json(jm.at("ttc_min"));
      ms.ttc_min_both_moving = samples_from_json(jm.at("ttc_min_both_moving"));
      ms.ttc_min_involves_stationary = samples_from_json(jm.at("ttc_min_involves_stationary"));
      ms.median_ttc_min = opt_from_json<double>(jm.at("median_ttc_min"));
      ms.d_vs_gt = opt_from_json<double>(jm.at("d_vs_gt"));
      ms.median_abs_diff_vs_gt = opt_from_json<double>(jm.at("median_abs_diff_vs_gt"));
      ms.within_half_second_of_gt = opt_from_json<bool>(jm.at("within_half_second_of_gt"));
      seq.methods.push_back(std::move(ms));
    }
    report.sequences.push_back(std::move(seq));
  }
  for (const auto & jt : j.at("totals")) {
    TotalsRow row;
    row.method = jt.at("method").get<std::string>();
    row.variant = jt.at("variant").get<std::string>();
    row.counts.total_interactions = jt.at("total_interactions").get<std::size_t>();
    row.counts.below_10s = jt.at("below_10s").get<std::size_t>();
    row.counts.below_1_5s = jt.at("below_1_5s").get<std::size_t>();
    report.totals.push_back(std::move(row));
  }
  for (const auto & jr : j.at("reductions")) {
    ReductionRow row;
    row.method = jr.at("method").get<std::string>();
    row.baseline = jr.at("baseline").get<std::string>();
    row.below_10s_pct = opt_from_json<double>(jr.at("below_10s_pct"));
    row.below_1_5s_pct = opt_from_json<double>(jr.at("below_1_5s_pct"));
    report.reductions.push_back(std::move(row));
  }
  return report;
}

}  // namespace

std::string export_report(const AnalysisReport & report, ReportFormat format)
{
  AnalysisReport sorted = report;
  std::sort(
    sorted.sequences.begin(), sorted.sequences.end(),
    [](const SequenceReport & a, const SequenceReport & b) { return a.sequence < b.sequence; });
  return format == ReportFormat::Csv ? export_csv(sorted) : export_json(sorted);
}

AnalysisReport import_report(const std::string & content, ReportFormat format)
{
  return format == ReportFormat::Csv ? import_csv(content) : import_json(content);
}

std::string export_cdf_table(const AnalysisReport & report)
{
  std::string out = "sequence,method,variant,category,value,cum_probability\n";
  const auto emit = [&out](
                      const std::string & seq, const MethodStats & ms, const char * category,
                      const std::vector<double> & samples) {
    if (samples.empty()) {
      return;
    }
    for (const auto & [value, prob] : EmpiricalCdf(samples).steps()) {
      out += seq + ',' + ms.method + ',' + ms.variant + ',' + category + ',' +
             format_number(value) + ',' + format_number(prob) + '\n';
    }
  };
  for (const SequenceReport & seq : report.sequences) {
    for (const MethodStats & ms : seq.methods) {
      emit(seq.sequence, ms, "all", ms.ttc_min);
      emit(seq.sequence, ms, "both_moving", ms.ttc_min_both_moving);
      emit(seq.sequence, ms, "involves_stationary", ms.ttc_min_involves_stationary);
    }
  }
  return out;
}

std::vector<TotalsRow> aggregate_totals(std::span<const SequenceReport> sequences)
{
  std::vector<TotalsRow> totals;
  for (const SequenceReport & seq : sequences) {
    for (const MethodStats & ms : seq.methods) {
      auto it = std::find_if(totals.begin(), totals.end(), [&](const TotalsRow & row) {
        return row.method == ms.method && row.variant == ms.variant;
      });
      if (it == totals.end()) {
        totals.push_back(TotalsRow{ms.method, ms.variant, {}});
        it = totals.end() - 1;
      }
      it->counts += ms.counts;
    }
  }
  return totals;
}

}  // namespace smos
