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

#include "fibbraid/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>

#include "fibbraid/errors.hpp"

namespace fibbraid {
namespace {

using ojson = nlohmann::ordered_json;

int algorithm_rank(const std::string& a) {
  if (a == "rl") return 0;
  if (a == "bruteforce") return 1;
  if (a == "sk") return 2;
  return 3;
}

// Unset epsilon sorts first; otherwise descending (coarse to fine).
double eps_order(const std::optional<double>& e) { return e ? -*e : -INFINITY; }

auto group_key(const SampleRecord& s) {
  return std::make_tuple(eps_order(s.epsilon_T), algorithm_rank(s.algorithm), s.algorithm, s.D_max,
                         s.lambda, s.gamma);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt_eps(const std::optional<double>& e) { return e ? fmt(*e) : "none"; }

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ParseError("cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<SampleRecord> run_targets(const BenchContext& ctx, const SampleRecord& proto,
                                      const std::function<CompileReport(const Unitary2&)>& compile) {
  std::vector<SampleRecord> out(ctx.n, proto);
  parallel_for(ctx.n, ctx.threads, [&](std::size_t i) {
    SampleRecord& s = out[i];
    s.index = i;
    s.target_seed = target_seed(ctx.seed, i);
    s.report = compile(random_su2(s.target_seed));
  });
  if (ctx.sample_dir) write_samples(*ctx.sample_dir, out);
  return out;
}

void require(const BenchContext& ctx) {
  if (!ctx.rl || !ctx.gates) throw Error("benchmark context needs a cost-to-go and a gate set");
}

}  // namespace

double typical_average(std::span<const double> eps) {
  if (eps.empty()) return 0.0;
  double s = 0.0;
  for (double e : eps) s += std::log(std::max(e, kAccuracyFloor));
  return std::exp(s / static_cast<double>(eps.size()));
}

double percentile(std::vector<double> v, double p) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = std::clamp(p, 0.0, 100.0) / 100.0 * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

BenchmarkRow aggregate(std::optional<double> epsilon_T, std::span<const CompileReport> reports) {
  BenchmarkRow row;
  row.epsilon_T = epsilon_T;
  row.n = reports.size();
  if (reports.empty()) return row;
  std::vector<double> eps, len;
  double depth = 0, time = 0, capped = 0;
  for (const auto& r : reports) {
    eps.push_back(r.distance);
    len.push_back(static_cast<double>(r.length));
    depth += r.depth_reached;
    time += r.wall_time_s;
    capped += r.terminated_by == TerminatedBy::DepthCap ? 1.0 : 0.0;
  }
  const double n = static_cast<double>(reports.size());
  row.eps_bar = typical_average(eps);
  for (double l : len) row.L_bar += l / n;
  row.D_bar = depth / n;
  row.t_bar = time / n;
  row.R = capped / n;
  row.L_p25 = percentile(len, 25);
  row.L_p75 = percentile(len, 75);
  return row;
}

std::string_view to_string(BenchMode m) {
  switch (m) {
    case BenchMode::Scaling: return "scaling";
    case BenchMode::Compare: return "compare";
    case BenchMode::Grid: return "grid";
  }
  return "?";
}

BenchMode parse_bench_mode(std::string_view s) {
  if (s == "scaling") return BenchMode::Scaling;
  if (s == "compare") return BenchMode::Compare;
  if (s == "grid") return BenchMode::Grid;
  throw ParseError("unknown benchmark mode: " + std::string(s));
}

std::string sample_to_json(const SampleRecord& s) {
  ojson j;
  j["mode"] = std::string(to_string(s.mode));
  j["algorithm"] = s.algorithm;
  j["epsilon_T"] = s.epsilon_T ? ojson(*s.epsilon_T) : ojson(nullptr);
  j["lambda"] = s.lambda;
  j["gamma"] = s.gamma;
  j["D_max"] = s.D_max;
  j["index"] = s.index;
  j["target_seed"] = s.target_seed;
  const auto& r = s.report;
  j["word"] = r.word.to_string();
  j["distance"] = r.distance;
  j["length"] = r.length;
  j["nodes_expanded"] = r.nodes_expanded;
  j["depth_reached"] = r.depth_reached;
  j["wall_time_s"] = r.wall_time_s;
  j["terminated_by"] = std::string(to_string(r.terminated_by));
  return j.dump(2);
}

SampleRecord sample_from_json(const std::string& text) {
  SampleRecord s;
  try {
    const ojson j = ojson::parse(text);
    s.mode = parse_bench_mode(j.at("mode").get<std::string>());
    s.algorithm = j.at("algorithm").get<std::string>();
    if (!j.at("epsilon_T").is_null()) s.epsilon_T = j.at("epsilon_T").get<double>();
    s.lambda = j.at("lambda").get<double>();
    s.gamma = j.at("gamma").get<double>();
    s.D_max = j.at("D_max").get<int>();
    s.index = j.at("index").get<std::size_t>();
    s.target_seed = j.at("target_seed").get<std::uint64_t>();
    s.report.word = BraidWord::parse(j.at("word").get<std::string>());
    s.report.distance = j.at("distance").get<double>();
    s.report.length = j.at("length").get<std::size_t>();
    s.report.nodes_expanded = j.at("nodes_expanded").get<std::size_t>();
    s.report.depth_reached = j.at("depth_reached").get<int>();
    s.report.wall_time_s = j.at("wall_time_s").get<double>();
    s.report.terminated_by =
        j.at("terminated_by").get<std::string>() == "Accuracy" ? TerminatedBy::Accuracy : TerminatedBy::DepthCap;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad sample record: ") + e.what());
  }
  return s;
}

std::filesystem::path sample_filename(const SampleRecord& s) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s_%s_e%s_l%g_g%g_d%d_%05zu.json", std::string(to_string(s.mode)).c_str(),
                s.algorithm.c_str(), fmt_eps(s.epsilon_T).c_str(), s.lambda, s.gamma, s.D_max, s.index);
  return buf;
}

void write_samples(const std::filesystem::path& dir, std::span<const SampleRecord> samples) {
  std::filesystem::create_directories(dir);
  for (const auto& s : samples) {
    std::ofstream out(dir / sample_filename(s));
    if (!out) throw Error("cannot write sample record in " + dir.string());
    out << sample_to_json(s) << '\n';
  }
}

std::vector<SampleRecord> read_samples(const std::filesystem::path& dir) {
  std::vector<SampleRecord> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.path().extension() == ".json") out.push_back(sample_from_json(read_file(e.path())));
  }
  std::sort(out.begin(), out.end(), [](const SampleRecord& a, const SampleRecord& b) {
    return std::tuple_cat(group_key(a), std::make_tuple(a.index)) <
           std::tuple_cat(group_key(b), std::make_tuple(b.index));
  });
  return out;
}

std::vector<GroupedRow> group_samples(std::span<const SampleRecord> samples) {
  using Key = decltype(group_key(samples[0]));
  std::map<Key, std::vector<const SampleRecord*>> groups;
  for (const auto& s : samples) groups[group_key(s)].push_back(&s);
  std::vector<GroupedRow> rows;
  for (auto& [key, members] : groups) {
    std::sort(members.begin(), members.end(),
              [](const SampleRecord* a, const SampleRecord* b) { return a->index < b->index; });
    std::vector<CompileReport> reports;
    GroupedRow g;
    g.algorithm = members.front()->algorithm;
    g.lambda = members.front()->lambda;
    g.gamma = members.front()->gamma;
    g.D_max = members.front()->D_max;
    for (const auto* m : members) {
      reports.push_back(m->report);
      g.lengths.push_back(static_cast<double>(m->report.length));
    }
    g.row = aggregate(members.front()->epsilon_T, reports);
    rows.push_back(std::move(g));
  }
  return rows;
}

std::string csv_header(BenchMode mode) {
  const std::string base = "epsilon_T,eps_bar,L_bar,D_bar,t_bar,R,L_p25,L_p75,n";
  switch (mode) {
    case BenchMode::Compare: return "algorithm," + base;
    case BenchMode::Grid: return "lambda,gamma,D_max," + base;
    default: return base;
  }
}

std::string to_csv(BenchMode mode, std::span<const SampleRecord> samples) {
  std::ostringstream out;
  out << csv_header(mode) << '\n';
  for (const auto& g : group_samples(samples)) {
    if (mode == BenchMode::Compare) out << g.algorithm << ',';
    if (mode == BenchMode::Grid) out << fmt(g.lambda) << ',' << fmt(g.gamma) << ',' << g.D_max << ',';
    const auto& r = g.row;
    out << fmt_eps(r.epsilon_T) << ',' << fmt(r.eps_bar) << ',' << fmt(r.L_bar) << ',' << fmt(r.D_bar) << ','
        << fmt(r.t_bar) << ',' << fmt(r.R) << ',' << fmt(r.L_p25) << ',' << fmt(r.L_p75) << ',' << r.n << '\n';
  }
  return out.str();
}

std::string reference_metadata_json() {
  ojson j;
  j["note"] = "full-scale reference values; desk-scale runs are not expected to match";
  j["random_targets"] = {{"n", 1000}, {"eps_bar", 3.1e-3}, {"L_bar", 24.79}};
  j["depth_vs_log_inv_eps_slope"] = 6.56;
  j["time_vs_log_inv_eps_slope_s"] = 0.274;
  j["named_gate_distance"] = {{"H", 4.4e-3}, {"X", 2.4e-3}, {"Y", 2.3e-3}};
  j["cix_fixture"] = {{"length", 140}, {"error", 2.7e-3}};
  j["network"] = {{"hidden1", 5000}, {"hidden2", 1000}, {"n_res_blocks", 6}};
  return j.dump(2);
}

std::uint64_t target_seed(std::uint64_t seed, std::size_t i) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(i) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& f) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<SampleRecord> run_scaling(const BenchContext& ctx, const ScalingOptions& opt) {
  require(ctx);
  std::vector<SampleRecord> all;
  for (double eps : opt.epsilons) {
    SearchConfig cfg = opt.search;
    cfg.epsilon_T = eps;
    SampleRecord proto;
    proto.mode = BenchMode::Scaling;
    proto.epsilon_T = eps;
    proto.lambda = cfg.lambda;
    proto.gamma = cfg.gamma;
    proto.D_max = cfg.D_max;
    auto rows = run_targets(ctx, proto, [&](const Unitary2& t) { return search(t, *ctx.rl, *ctx.gates, cfg); });
    all.insert(all.end(), rows.begin(), rows.end());
  }
  return all;
}

std::vector<SampleRecord> run_compare(const BenchContext& ctx, const CompareOptions& opt) {
  require(ctx);
  if (!opt.sk_base) throw Error("compare mode needs a Solovay-Kitaev base net");
  std::vector<SampleRecord> all;
  for (double eps : opt.epsilons) {
    SearchConfig cfg = opt.search;
    cfg.epsilon_T = eps;
    SampleRecord proto;
    proto.mode = BenchMode::Compare;
    proto.epsilon_T = eps;
    proto.lambda = cfg.lambda;
    proto.gamma = cfg.gamma;

    proto.algorithm = "rl";
    proto.D_max = cfg.D_max;
    auto rl = run_targets(ctx, proto, [&](const Unitary2& t) { return search(t, *ctx.rl, *ctx.gates, cfg); });

    proto.algorithm = "bruteforce";
    proto.D_max = opt.bf_depth;
    auto bf = run_targets(ctx, proto, [&](const Unitary2& t) {
      return bruteforce_compile(t, opt.bf_depth, eps, *ctx.gates);
    });

    proto.algorithm = "sk";
    proto.D_max = opt.sk_max_level;
    auto sk = run_targets(ctx, proto, [&](const Unitary2& t) {
      CompileReport r;
      for (int level = 0; level <= opt.sk_max_level; ++level) {
        r = sk_compile(t, level, *opt.sk_base, *ctx.gates);
        r.depth_reached = level;
        r.terminated_by = r.distance <= eps ? TerminatedBy::Accuracy : TerminatedBy::DepthCap;
        if (r.distance <= eps) break;
      }
      return r;
    });
    for (auto* part : {&rl, &bf, &sk}) all.insert(all.end(), part->begin(), part->end());
  }
  return all;
}

std::vector<SampleRecord> run_grid(const BenchContext& ctx, const GridOptions& opt) {
  require(ctx);
  std::vector<SampleRecord> all;
  auto cell = [&](double lambda, double gamma, int d_max) {
    SearchConfig cfg = opt.search;
    cfg.lambda = lambda;
    cfg.gamma = gamma;
    cfg.D_max = d_max;
    SampleRecord proto;
    proto.mode = BenchMode::Grid;
    proto.epsilon_T = cfg.epsilon_T;
    proto.lambda = lambda;
    proto.gamma = gamma;
    proto.D_max = d_max;
    auto rows = run_targets(ctx, proto, [&](const Unitary2& t) { return search(t, *ctx.rl, *ctx.gates, cfg); });
    all.insert(all.end(), rows.begin(), rows.end());
  };
  const int top = opt.d_max.empty() ? opt.search.D_max : *std::max_element(opt.d_max.begin(), opt.d_max.end());
  for (double l : opt.lambdas)
    for (double g : opt.gammas) cell(l, g, top);
  for (int d : opt.d_max) {
    if (d == top && std::find(opt.lambdas.begin(), opt.lambdas.end(), opt.search.lambda) != opt.lambdas.end() &&
        std::find(opt.gammas.begin(), opt.gammas.end(), opt.search.gamma) != opt.gammas.end())
      continue;  // already in the grid
    cell(opt.search.lambda, opt.search.gamma, d);
  }
  return all;
}

}  // namespace fibbraid
