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
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "smos/stats_report.hpp"

using namespace smos;
using test::brute_force_d;

namespace
{

std::vector<double> random_samples(std::mt19937 & rng, std::size_t max_size)
{
  std::uniform_int_distribution<std::size_t> size(1, max_size);
  std::uniform_int_distribution<int> grid(0, 30);
  std::vector<double> out(size(rng));
  for (double & v : out) {
    // quantized values so ties across the two samples actually happen
    v = grid(rng) / 3.0;
  }
  return out;
}

AnalysisReport sample_report()
{
  AnalysisReport report;
  report.ttc = TtcConfig{10.0, 0.1};

  MethodStats m1;
  m1.method = "GroundTruth";
  m1.variant = "none";
  m1.counts = {157, 30, 400};
  m1.ttc_min = {0.5, 1.2, 3.7, 9.9};
  m1.ttc_min_both_moving = {1.2, 3.7};
  m1.ttc_min_involves_stationary = {0.5, 9.9};
  m1.median_ttc_min = median(m1.ttc_min);

  MethodStats m2;
  m2.method = "GroundTruth+SS";
  m2.variant = "ss";
  m2.counts = {9, 2, 380};
  m2.ttc_min = {1.2, 3.7};
  m2.median_ttc_min = median(m2.ttc_min);
  m2.d_vs_gt = 0.25;
  m2.median_abs_diff_vs_gt = 0.3;
  m2.within_half_second_of_gt = true;

  SequenceReport s1{"0001", {m1, m2}};
  SequenceReport s2{"0003", {m1, m2}};
  s2.methods[0].counts = {10, 4, 50};
  s2.methods[1].ttc_min.clear();
  s2.methods[1].ttc_min_both_moving.clear();
  s2.methods[1].median_ttc_min.reset();
  s2.methods[1].d_vs_gt.reset();
  s2.methods[1].median_abs_diff_vs_gt.reset();
  s2.methods[1].within_half_second_of_gt.reset();

  report.sequences = {s2, s1};  // unsorted on purpose; export sorts
  report.totals = aggregate_totals(report.sequences);
  report.reductions.push_back(
    ReductionRow{"GroundTruth+SS", "GroundTruth", 55.02, std::nullopt});
  return report;
}

}  // namespace

TEST_CASE("ks_d_statistic fixtures")
{
  const std::vector<double> a = {1.0, 2.0, 3.0};
  const std::vector<double> far = {4.0, 5.0, 6.0};
  const std::vector<double> odd = {1.0, 3.0};
  const std::vector<double> even = {2.0, 4.0};
  CHECK(*ks_d_statistic(a, a) == 0.0);
  CHECK(*ks_d_statistic(a, far) == 1.0);
  CHECK(*ks_d_statistic(odd, even) == 0.5);

  SUBCASE("empty samples are undefined")
  {
    CHECK_FALSE(ks_d_statistic(std::vector<double>{}, a).has_value());
    CHECK_FALSE(ks_d_statistic(a, std::vector<double>{}).has_value());
  }
  SUBCASE("different multisets with identical ECDFs give zero")
  {
    const std::vector<double> twice = {1.0, 1.0};
    const std::vector<double> once = {1.0};
    CHECK(*ks_d_statistic(twice, once) == 0.0);
  }
  SUBCASE("distinct ECDFs give a positive statistic")
  {
    const std::vector<double> p = {1.0, 2.0};
    const std::vector<double> q = {1.0, 3.0};
    CHECK(*ks_d_statistic(p, q) > 0.0);
  }
}

TEST_CASE("ks_d_statistic equals the brute-force maximization")
{
  std::mt19937 rng(20260202);
  for (int trial = 0; trial < 1200; ++trial) {
    const auto a = random_samples(rng, 40);
    const auto b = random_samples(rng, 40);
    const double got = *ks_d_statistic(a, b);
    const double expected = brute_force_d(a, b);
    CHECK(std::abs(got - expected) <= 1e-12);
    CHECK(got >= 0.0);
    CHECK(got <= 1.0);
    CHECK(got == *ks_d_statistic(b, a));  // symmetric
  }
}

TEST_CASE("median")
{
  CHECK(*median(std::vector<double>{1.0, 2.0, 3.0}) == 2.0);
  CHECK(*median(std::vector<double>{1.0, 2.0, 3.0, 4.0}) == 2.5);
  CHECK(*median(std::vector<double>{5.0}) == 5.0);
  CHECK(*median(std::vector<double>{3.0, 1.0, 2.0}) == 2.0);  // unsorted input
  CHECK_FALSE(median({}).has_value());
}

TEST_CASE("within_band")
{
  CHECK(within_band(2.0, 2.4));
  CHECK_FALSE(within_band(2.0, 2.6));
  CHECK(within_band(3.3, 3.3));
  CHECK(within_band(2.0, 2.5));  // inclusive band edge
}

TEST_CASE("EmpiricalCdf")
{
  const EmpiricalCdf cdf(std::vector<double>{3.0, 1.0, 2.0, 2.0});
  CHECK(cdf(0.99) == 0.0);
  CHECK(cdf(1.0) == 0.25);
  CHECK(cdf(2.0) == 0.75);
  CHECK(cdf(1e18) == 1.0);

  const auto steps = cdf.steps();
  REQUIRE(steps.size() == 3);  // ties collapsed
  CHECK(steps[0] == std::pair{1.0, 0.25});
  CHECK(steps[1] == std::pair{2.0, 0.75});
  CHECK(steps[2] == std::pair{3.0, 1.0});

  CHECK_THROWS_AS(EmpiricalCdf(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("report export / import / export is a fixed point")
{
  const AnalysisReport report = sample_report();
  for (ReportFormat format : {ReportFormat::Json, ReportFormat::Csv}) {
    const std::string once = export_report(report, format);
    const AnalysisReport reread = import_report(once, format);
    const std::string twice = export_report(reread, format);
    CHECK(once == twice);
  }
}

TEST_CASE("export sorts sequences and sums the totals")
{
  const AnalysisReport report = sample_report();
  const std::string csv = export_report(report, ReportFormat::Csv);
  CHECK(csv.find("seq,0001") < csv.find("seq,0003"));

  REQUIRE(report.totals.size() == 2);
  CHECK(report.totals[0].method == "GroundTruth");
  CHECK(report.totals[0].counts.below_10s == 157 + 10);
  CHECK(report.totals[0].counts.below_1_5s == 30 + 4);
  CHECK(report.totals[0].counts.total_interactions == 450);

  SUBCASE("one sequence: totals equal the single row")
  {
    AnalysisReport single = report;
    single.sequences.pop_back();
    const auto totals = aggregate_totals(single.sequences);
    REQUIRE(totals.size() == 2);
    CHECK(totals[0].counts == single.sequences[0].methods[0].counts);
  }
}

TEST_CASE("empty report exports a header-only table")
{
  AnalysisReport report;
  const std::string csv = export_report(report, ReportFormat::Csv);
  CHECK(csv.find("kind,sequence,method") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1);
  // and still round-trips
  CHECK(export_report(import_report(csv, ReportFormat::Csv), ReportFormat::Csv) == csv);
}

TEST_CASE("cdf table is monotone per group and skips empty samples")
{
  const AnalysisReport report = sample_report();
  const std::string table = export_cdf_table(report);
  CHECK(table.find("sequence,method,variant,category,value,cum_probability") == 0);
  CHECK(table.find("0001,GroundTruth,none,all,") != std::string::npos);
  // the 0003 SS row has no samples: no line for it
  CHECK(table.find("0003,GroundTruth+SS") == std::string::npos);

  // last column is nondecreasing within a group and ends at 1
  std::istringstream lines(table);
  std::string line;
  std::getline(lines, line);  // header
  std::string prev_group;
  double prev_p = 0.0;
  while (std::getline(lines, line)) {
    const auto last_comma = line.rfind(',');
    const auto group_end = line.rfind(',', last_comma - 1);
    const std::string group = line.substr(0, group_end);
    const double p = std::stod(line.substr(last_comma + 1));
    if (group != prev_group) {
      prev_group = group;
      prev_p = 0.0;
    }
    CHECK(p >= prev_p);
    CHECK(p <= 1.0);
    prev_p = p;
  }
  CHECK(prev_p == 1.0);
}

TEST_CASE("format_number round-trips exactly")
{
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> value(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = value(rng);
    CHECK(std::stod(format_number(v)) == v);
  }
}
