// Copyright 2026 The fibbraid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "fibbraid/benchmark.hpp"

namespace fibbraid {
namespace {

namespace fs = std::filesystem;

const GateSet& gates() {
  static const GateSet g = fibonacci_gateset();
  return g;
}

const BfsCostToGo& heuristic() {
  static const BfsTable t = BfsTable::build(8, gates());
  static const BfsCostToGo h(t);
  return h;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fibbraid_bench_" + name);
  fs::remove_all(p);
  return p;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

TEST(TypicalAverageTest, HandBuiltSamples) {
  const std::vector<double> a{1e-2, 1e-4};
  EXPECT_NEAR(typical_average(a), 1e-3, 1e-18);
  const std::vector<double> b{0.0, 1e-15};
  EXPECT_NEAR(typical_average(b), 1e-15, 1e-28);
  const std::vector<double> c{0.5, 0.5, 0.5};
  EXPECT_NEAR(typical_average(c), 0.5, 1e-15);
}

TEST(PercentileTest, LinearInterpolation) {
  EXPECT_EQ(percentile({4, 1, 3, 2}, 25), 1.75);
  EXPECT_EQ(percentile({4, 1, 3, 2}, 75), 3.25);
  EXPECT_EQ(percentile({7}, 25), 7.0);
}

TEST(AggregateTest, Fields) {
  std::vector<CompileReport> r(4);
  const double eps[] = {1e-1, 1e-3, 1e-2, 1e-2};
  for (int i = 0; i < 4; ++i) {
    r[i].distance = eps[i];
    r[i].length = 10 + 2 * i;
    r[i].depth_reached = i;
    r[i].wall_time_s = 0.5;
    r[i].terminated_by = i == 0 ? TerminatedBy::DepthCap : TerminatedBy::Accuracy;
  }
  const BenchmarkRow row = aggregate(1e-2, r);
  EXPECT_NEAR(row.eps_bar, 1e-2, 1e-15);
  EXPECT_EQ(row.L_bar, 13.0);
  EXPECT_EQ(row.D_bar, 1.5);
  EXPECT_EQ(row.t_bar, 0.5);
  EXPECT_EQ(row.R, 0.25);
  EXPECT_EQ(row.L_p25, 11.5);
  EXPECT_EQ(row.L_p75, 14.5);
  EXPECT_EQ(row.n, 4u);
}

TEST(CsvTest, Headers) {
  EXPECT_EQ(csv_header(BenchMode::Scaling), "epsilon_T,eps_bar,L_bar,D_bar,t_bar,R,L_p25,L_p75,n");
  EXPECT_EQ(csv_header(BenchMode::Compare), "algorithm,epsilon_T,eps_bar,L_bar,D_bar,t_bar,R,L_p25,L_p75,n");
  EXPECT_EQ(csv_header(BenchMode::Grid), "lambda,gamma,D_max,epsilon_T,eps_bar,L_bar,D_bar,t_bar,R,L_p25,L_p75,n");
}

TEST(ParallelForTest, VisitsEveryIndexOnceAndRethrows) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                 if (i == 7) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}

TEST(ScalingTest, CsvIsRecomputableFromSampleDirectory) {
  BenchContext ctx;
  ctx.rl = &heuristic();
  ctx.gates = &gates();
  ctx.n = 6;
  ctx.seed = 3;
  ctx.threads = 2;
  ctx.sample_dir = scratch("scaling");
  ScalingOptions opt;
  opt.epsilons = {2e-1, 1e-1, 5e-2};
  opt.search.D_max = 40;
  const auto samples = run_scaling(ctx, opt);
  ASSERT_EQ(samples.size(), 18u);
  const std::string csv = to_csv(BenchMode::Scaling, samples);
  const auto rows = lines(csv);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], csv_header(BenchMode::Scaling));
  EXPECT_EQ(rows[1].substr(0, 4), "0.2,");

  const auto reread = read_samples(*ctx.sample_dir);
  EXPECT_EQ(reread.size(), samples.size());
  EXPECT_EQ(to_csv(BenchMode::Scaling, reread), csv);

  // Same seed, same targets.
  EXPECT_EQ(samples[0].target_seed, target_seed(3, 0));
  fs::remove_all(*ctx.sample_dir);
}

TEST(ScalingTest, TypicalAccuracyImprovesWithTighterThreshold) {
  BenchContext ctx;
  ctx.rl = &heuristic();
  ctx.gates = &gates();
  ctx.n = 10;
  ScalingOptions opt;
  opt.epsilons = {2e-1, 5e-2};
  opt.search.D_max = 60;
  const auto groups = group_samples(run_scaling(ctx, opt));
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_LE(groups[1].row.eps_bar, groups[0].row.eps_bar);
}

TEST(CompareTest, ThreeAlgorithmRowsPerBucket) {
  const SkBaseNet base = sk_build_base(8, gates());
  BenchContext ctx;
  ctx.rl = &heuristic();
  ctx.gates = &gates();
  ctx.n = 10;
  CompareOptions opt;
  opt.epsilons = {2e-1, 1e-1};
  opt.search.D_max = 50;
  opt.bf_depth = 8;
  opt.sk_base = &base;
  opt.sk_max_level = 2;
  const auto rows = lines(to_csv(BenchMode::Compare, run_compare(ctx, opt)));
  ASSERT_EQ(rows.size(), 7u);
  std::multiset<std::string> algos;
  for (std::size_t i = 1; i < rows.size(); ++i) algos.insert(rows[i].substr(0, rows[i].find(',')));
  EXPECT_EQ(algos.count("rl"), 2u);
  EXPECT_EQ(algos.count("bruteforce"), 2u);
  EXPECT_EQ(algos.count("sk"), 2u);
}

TEST(GridTest, PenaltyExtremesBothComplete) {
  BenchContext ctx;
  ctx.rl = &heuristic();
  ctx.gates = &gates();
  ctx.n = 4;
  GridOptions opt;
  opt.lambdas = {1.0};
  opt.gammas = {0.0, 400.0};
  opt.d_max = {5, 10};
  opt.search.lambda = 1.0;
  opt.search.gamma = 400.0;
  const auto samples = run_grid(ctx, opt);
  const auto groups = group_samples(samples);
  // Two gamma cells at D_max = 10 plus the D_max = 5 sweep point.
  ASSERT_EQ(groups.size(), 3u);
  for (const auto& g : groups) {
    EXPECT_EQ(g.row.n, 4u);
    EXPECT_GT(g.row.L_bar, 0.0);
  }
  EXPECT_EQ(lines(to_csv(BenchMode::Grid, samples)).size(), 4u);
}

TEST(SampleRecordTest, JsonRoundTrip) {
  SampleRecord s;
  s.mode = BenchMode::Grid;
  s.algorithm = "rl";
  s.lambda = 0.5;
  s.gamma = 100;
  s.D_max = 30;
  s.index = 12;
  s.target_seed = 99;
  s.report.word = BraidWord::parse("s1 s2i");
  s.report.distance = 0.0123;
  s.report.length = 2;
  s.report.terminated_by = TerminatedBy::Accuracy;
  const SampleRecord back = sample_from_json(sample_to_json(s));
  EXPECT_EQ(sample_to_json(back), sample_to_json(s));
  EXPECT_FALSE(back.epsilon_T.has_value());
}

TEST(ReferenceMetadataTest, HasFullScaleValues) {
  const std::string j = reference_metadata_json();
  EXPECT_NE(j.find("24.79"), std::string::npos);
  EXPECT_NE(j.find("6.56"), std::string::npos);
}

}  // namespace
}  // namespace fibbraid
