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

#pragma once

// Benchmark harness: seeded target sets, a worker pool, per-sample JSON
// records, and aggregation into CSV rows.
//
// Every CSV is produced by aggregating SampleRecords, and the same records
// are written one file per sample, so a CSV can always be recomputed from
// its sample directory.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fibbraid/baselines.hpp"
#include "fibbraid/search.hpp"

namespace fibbraid {

inline constexpr double kAccuracyFloor = 1e-15;

/// exp(mean(log(max(eps_i, 1e-15)))).
double typical_average(std::span<const double> eps);
/// Linear interpolation between order statistics, p in [0, 100].
double percentile(std::vector<double> values, double p);

struct BenchmarkRow {
  std::optional<double> epsilon_T;
  double eps_bar = 0.0;
  double L_bar = 0.0;
  double D_bar = 0.0;
  double t_bar = 0.0;
  double R = 0.0;  // fraction terminated by the depth cap
  double L_p25 = 0.0;
  double L_p75 = 0.0;
  std::size_t n = 0;
};

BenchmarkRow aggregate(std::optional<double> epsilon_T, std::span<const CompileReport> reports);

enum class BenchMode { Scaling, Compare, Grid };
std::string_view to_string(BenchMode m);
BenchMode parse_bench_mode(std::string_view s);

struct SampleRecord {
  BenchMode mode = BenchMode::Scaling;
  std::string algorithm = "rl";  // rl | bruteforce | sk
  std::optional<double> epsilon_T;
  double lambda = 1.0;
  double gamma = 0.0;
  int D_max = 0;
  std::size_t index = 0;
  std::uint64_t target_seed = 0;
  CompileReport report;
};

std::string sample_to_json(const SampleRecord& s);
SampleRecord sample_from_json(const std::string& text);
std::filesystem::path sample_filename(const SampleRecord& s);
void write_samples(const std::filesystem::path& dir, std::span<const SampleRecord> samples);
std::vector<SampleRecord> read_samples(const std::filesystem::path& dir);

struct GroupedRow {
  std::string algorithm;
  double lambda = 1.0;
  double gamma = 0.0;
  int D_max = 0;
  BenchmarkRow row;
  std::vector<double> lengths;  // per-sample, for medians
};

/// Groups by (epsilon_T, algorithm, D_max, lambda, gamma) in a canonical
/// order independent of the input order.
std::vector<GroupedRow> group_samples(std::span<const SampleRecord> samples);

/// Header `epsilon_T,eps_bar,L_bar,D_bar,t_bar,R,L_p25,L_p75,n`, preceded by
/// `algorithm` in compare mode and `lambda,gamma,D_max` in grid mode.
std::string csv_header(BenchMode mode);
std::string to_csv(BenchMode mode, std::span<const SampleRecord> samples);

/// Full-scale reference values recorded next to benchmark output. Not gated.
std::string reference_metadata_json();

/// Seeded Haar-random targets; target i uses seed target_seed(seed, i).
std::uint64_t target_seed(std::uint64_t seed, std::size_t i);

/// Runs f(i) for i in [0, n) on `threads` workers (0 = hardware threads).
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& f);

struct BenchContext {
  const CostToGo* rl = nullptr;
  const GateSet* gates = nullptr;
  std::uint64_t seed = 0;
  std::size_t n = 100;
  unsigned threads = 0;
  std::optional<std::filesystem::path> sample_dir;
};

struct ScalingOptions {
  std::vector<double> epsilons{1e-1, 5e-2, 2e-2, 1e-2, 5e-3};
  SearchConfig search = SearchConfig::complexity_preset(1e-2);
};

struct CompareOptions {
  std::vector<double> epsilons{1e-1, 5e-2, 2e-2};
  SearchConfig search = SearchConfig::complexity_preset(1e-2);
  int bf_depth = 8;
  const SkBaseNet* sk_base = nullptr;
  int sk_max_level = 4;
};

struct GridOptions {
  std::vector<double> lambdas{0.5, 1.0, 2.0};
  std::vector<double> gammas{0.0, 100.0, 400.0};
  std::vector<int> d_max{10, 30, 100};
  SearchConfig search;  // lambda, gamma, D_max overridden per cell
};

std::vector<SampleRecord> run_scaling(const BenchContext& ctx, const ScalingOptions& opt);
std::vector<SampleRecord> run_compare(const BenchContext& ctx, const CompareOptions& opt);
/// The lambda x gamma grid at the largest D_max, plus a D_max sweep at the
/// base lambda and gamma.
std::vector<SampleRecord> run_grid(const BenchContext& ctx, const GridOptions& opt);

}  // namespace fibbraid
