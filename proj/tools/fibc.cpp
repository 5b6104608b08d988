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

// fibc: train, compile, and benchmark Fibonacci braid compilers.
//
// Exit codes: 0 success, 1 runtime failure, 2 bad input (missing file,
// malformed target or config).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fibbraid/baselines.hpp"
#include "fibbraid/benchmark.hpp"
#include "fibbraid/checkpoint.hpp"
#include "fibbraid/config.hpp"
#include "fibbraid/errors.hpp"
#include "fibbraid/search.hpp"
#include "fibbraid/trainer.hpp"
#include "fibbraid/two_qubit.hpp"

namespace fs = std::filesystem;
using namespace fibbraid;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitInput = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SearchFlags {
  double lambda = 1.0;
  double gamma = 400.0;
  int dmax = 100;
  int dbf = 5;
  int n = 100;
  std::size_t max_open = 100000;
  std::optional<double> eps_t;

  void add(CLI::App* app) {
    app->add_option("--lambda", lambda, "weight on path cost")->capture_default_str();
    app->add_option("--gamma", gamma, "decimal penalty weight")->capture_default_str();
    app->add_option("--dmax", dmax, "search iterations")->capture_default_str();
    app->add_option("--dbf", dbf, "brute-force prefix depth")->capture_default_str();
    app->add_option("--batch-n", n, "nodes expanded per iteration")->capture_default_str();
    app->add_option("--max-open", max_open, "open-set cap")->capture_default_str();
    app->add_option("--eps-t", eps_t, "stop once this distance is reached");
  }
  SearchConfig config() const {
    SearchConfig c;
    c.lambda = lambda;
    c.gamma = gamma;
    c.D_max = dmax;
    c.D_bf = dbf;
    c.N = n;
    c.max_open = max_open;
    c.epsilon_T = eps_t;
    c.validate();
    return c;
  }
};

MLPNetwork load_model(const std::string& path) {
  if (path.empty() || !fs::exists(path)) throw InputError("checkpoint not found: " + path);
  MLPNetwork net = load_checkpoint(path);
  net.set_mode(Mode::Eval);
  return net;
}

// "random" draws from --seed; everything else goes to the target parser.
std::string resolve_target(const std::string& spec, std::uint64_t seed) {
  return spec == "random" ? "random:" + std::to_string(seed) : spec;
}

std::vector<TrainingLogRow> read_log_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) return {};
  return read_log(in);
}

int checkpoint_epoch(const fs::path& p) {
  static const std::regex re(R"(ckpt_(\d+)\.json$)");
  std::smatch m;
  const std::string name = p.filename().string();
  if (std::regex_search(name, m, re)) return std::stoi(m[1]);
  return -1;
}

int cmd_train(const std::string& config_path) {
  if (!fs::exists(config_path)) throw InputError("config not found: " + config_path);
  TrainRunConfig rc;
  try {
    rc = train_run_config(read_key_values(config_path));
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  const fs::path dir = rc.output_dir;
  fs::create_directories(dir);
  const fs::path log_path = dir / "log.csv";

  std::optional<ValueTrainer> trainer;
  std::vector<TrainingLogRow> history;
  if (rc.resume) {
    const MLPNetwork policy = load_model(*rc.resume);
    history = read_log_file(log_path);
    int epoch = checkpoint_epoch(*rc.resume);
    if (epoch < 0) epoch = history.empty() ? 0 : history.back().epoch;
    std::erase_if(history, [&](const TrainingLogRow& r) { return r.epoch > epoch; });
    int M = rc.training.M_init;
    if (!history.empty()) {
      const auto& last = history.back();
      M = last.loss < rc.training.delta ? last.M + 1 : last.M;
    }
    trainer.emplace(rc.training, policy, epoch, M);
    std::cerr << "resuming at epoch " << epoch << " with M=" << trainer->max_length() << "\n";
  } else {
    trainer.emplace(rc.training);
  }

  std::ofstream log(log_path, std::ios::trunc);
  write_log_header(log);
  for (const auto& r : history) write_log_row(log, r);
  log.flush();

  auto save = [&](const ValueTrainer& t) {
    char name[32];
    std::snprintf(name, sizeof name, "ckpt_%06d.json", t.epoch());
    MLPNetwork net = t.policy();
    net.set_mode(Mode::Eval);
    save_checkpoint(net, dir / name);
    save_checkpoint(net, dir / "latest.json");
  };
  if (trainer->epoch() >= rc.training.epochs) save(*trainer);
  trainer->run([&](const TrainingLogRow& row, const ValueTrainer& t) {
    write_log_row(log, row);
    if (row.epoch % 50 == 0) {
      log.flush();
      std::cerr << "epoch " << row.epoch << " loss " << row.loss << " M " << row.M << "\n";
    }
    if (t.epoch() % rc.checkpoint_every == 0 || t.epoch() == rc.training.epochs) save(t);
  });
  return 0;
}

int cmd_compile(const std::string& target_spec, const std::string& ckpt, const SearchFlags& flags,
                std::uint64_t seed) {
  Unitary2 target;
  try {
    target = parse_target(resolve_target(target_spec, seed));
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  const MLPNetwork net = load_model(ckpt);
  const SearchConfig cfg = flags.config();
  const CompileReport r = search(target, net, fibonacci_gateset(), cfg);
  std::cout << report_to_json(r, &cfg) << "\n";
  return 0;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

struct BenchFlags {
  std::string mode;
  std::string ckpt;
  std::string out = "bench.csv";
  std::string samples;
  std::size_t n = 100;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string eps;
  std::string lambdas;
  std::string gammas;
  std::string dmax_list;
  int bf_depth = 8;
  int sk_depth = 12;
  int sk_levels = 4;
};

int cmd_bench(const BenchFlags& b, const SearchFlags& sflags) {
  BenchMode mode;
  try {
    mode = parse_bench_mode(b.mode);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  const MLPNetwork net = load_model(b.ckpt);
  const NetworkCostToGo heuristic(net);
  const GateSet gates = fibonacci_gateset();

  BenchContext ctx;
  ctx.rl = &heuristic;
  ctx.gates = &gates;
  ctx.seed = b.seed;
  ctx.n = b.n;
  ctx.threads = b.threads;
  ctx.sample_dir = b.samples.empty() ? fs::path(b.out + ".samples") : fs::path(b.samples);
  if (fs::exists(*ctx.sample_dir)) fs::remove_all(*ctx.sample_dir);

  std::vector<SampleRecord> samples;
  SearchConfig base = sflags.config();
  switch (mode) {
    case BenchMode::Scaling: {
      ScalingOptions opt;
      opt.search = base;
      opt.search.D_max = std::max(base.D_max, 1000);
      if (!b.eps.empty()) opt.epsilons = parse_list(b.eps);
      samples = run_scaling(ctx, opt);
      break;
    }
    case BenchMode::Compare: {
      const SkBaseNet sk = sk_build_base(b.sk_depth, gates);
      CompareOptions opt;
      opt.search = base;
      opt.search.D_max = std::max(base.D_max, 1000);
      opt.bf_depth = b.bf_depth;
      opt.sk_base = &sk;
      opt.sk_max_level = b.sk_levels;
      if (!b.eps.empty()) opt.epsilons = parse_list(b.eps);
      samples = run_compare(ctx, opt);
      break;
    }
    case BenchMode::Grid: {
      GridOptions opt;
      opt.search = base;
      if (!b.lambdas.empty()) opt.lambdas = parse_list(b.lambdas);
      if (!b.gammas.empty()) opt.gammas = parse_list(b.gammas);
      if (!b.dmax_list.empty()) {
        opt.d_max.clear();
        for (double d : parse_list(b.dmax_list)) opt.d_max.push_back(static_cast<int>(d));
      }
      samples = run_grid(ctx, opt);
      break;
    }
  }
  std::ofstream csv(b.out);
  if (!csv) throw Error("cannot write " + b.out);
  csv << to_csv(mode, samples);
  std::ofstream meta(b.out + ".meta.json");
  meta << reference_metadata_json() << "\n";
  std::cerr << "wrote " << b.out << " (" << samples.size() << " samples in " << ctx.sample_dir->string()
            << ")\n";
  return 0;
}

int cmd_compile2(const std::string& target_spec, const std::string& ckpt, const std::string& fixture_path,
                 const SearchFlags& flags, std::uint64_t seed, bool exact_slots) {
  Unitary4 target;
  std::optional<CixFixture> fixture;
  try {
    target = parse_target4(resolve_target(target_spec, seed));
    if (!fixture_path.empty()) fixture = CixFixture::load(fixture_path);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  const MLPNetwork net = load_model(ckpt);
  const NetworkCostToGo heuristic(net);
  const GateSet gates = fibonacci_gateset();
  const CixFixture* fx = fixture ? &*fixture : nullptr;
  const TwoQubitReport r = exact_slots
                               ? compile_two_qubit(target, exact_slot_compiler(), fx)
                               : compile_two_qubit(target, heuristic, gates, flags.config(), fx);
  std::cout << two_qubit_report_to_json(r) << "\n";
  return 0;
}

int cmd_bfs_table(int depth, const std::string& out) {
  const BfsTable t = BfsTable::build(depth, fibonacci_gateset());
  t.save(out);
  std::cerr << "wrote " << t.size() << " states to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fibonacci anyon braid compiler"};
  app.require_subcommand(1);

  std::string config_path;
  auto* train = app.add_subcommand("train", "train a cost-to-go network from a config file");
  train->add_option("config", config_path, "key = value config file")->required();

  std::string target, ckpt, fixture;
  std::uint64_t seed = 0;
  SearchFlags sflags;
  auto* compile = app.add_subcommand("compile", "compile a single-qubit target");
  compile->add_option("--target", target, "I X Y Z H S T, random, random:<seed>, word:<tokens>, JSON")
      ->required();
  compile->add_option("--checkpoint", ckpt, "network checkpoint")->required();
  compile->add_option("--seed", seed, "seed for random targets");
  sflags.add(compile);

  BenchFlags bflags;
  SearchFlags bsearch;
  auto* bench = app.add_subcommand("bench", "benchmark sweeps written as CSV");
  bench->add_option("mode", bflags.mode, "scaling | compare | grid")->required();
  bench->add_option("--checkpoint", bflags.ckpt, "network checkpoint")->required();
  bench->add_option("--out", bflags.out, "CSV path")->capture_default_str();
  bench->add_option("--samples", bflags.samples, "per-sample JSON directory (default <out>.samples)");
  bench->add_option("--n", bflags.n, "targets per data point")->capture_default_str();
  bench->add_option("--seed", bflags.seed, "seed for the target set")->capture_default_str();
  bench->add_option("--threads", bflags.threads, "worker threads (0 = all)")->capture_default_str();
  bench->add_option("--eps", bflags.eps, "comma-separated accuracy targets");
  bench->add_option("--lambdas", bflags.lambdas, "grid: comma-separated lambda values");
  bench->add_option("--gammas", bflags.gammas, "grid: comma-separated gamma values");
  bench->add_option("--dmax-list", bflags.dmax_list, "grid: comma-separated D_max values");
  bench->add_option("--bf-depth", bflags.bf_depth, "compare: brute-force depth")->capture_default_str();
  bench->add_option("--sk-depth", bflags.sk_depth, "compare: Solovay-Kitaev base depth")->capture_default_str();
  bench->add_option("--sk-levels", bflags.sk_levels, "compare: max Solovay-Kitaev level")->capture_default_str();
  bsearch.add(bench);

  std::string target4, ckpt2;
  std::uint64_t seed2 = 0;
  SearchFlags sflags2;
  auto* compile2 = app.add_subcommand("compile2", "compile a two-qubit target");
  compile2->add_option("--target", target4, "I CNOT CZ SWAP CIX, random, random:<seed>, JSON")->required();
  compile2->add_option("--checkpoint", ckpt2, "network checkpoint")->required();
  compile2->add_option("--fixture", fixture, "controlled-iX fixture JSON (default: ideal gate)");
  compile2->add_option("--seed", seed2, "seed for random targets");
  bool exact_slots = false;
  compile2->add_flag("--exact-slots", exact_slots, "keep single-qubit slots exact (no braid search)");
  sflags2.add(compile2);

  int depth = 10;
  std::string table_out = "bfs_table.json";
  auto* table = app.add_subcommand("bfs-table", "build and save a shortest-word table");
  table->add_option("--depth", depth, "maximum word length")->capture_default_str();
  table->add_option("--out", table_out, "output path")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*train) return cmd_train(config_path);
    if (*compile) return cmd_compile(target, ckpt, sflags, seed);
    if (*bench) return cmd_bench(bflags, bsearch);
    if (*compile2) return cmd_compile2(target4, ckpt2, fixture, sflags2, seed2, exact_slots);
    if (*table) return cmd_bfs_table(depth, table_out);
  } catch (const InputError& e) {
    std::cerr << "fibc: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "fibc: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
