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

#include "fibbraid/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fibbraid/errors.hpp"

namespace fibbraid {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end)
    throw ParseError("bad value for " + key + ": '" + v + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ParseError("bad boolean for " + key + ": '" + v + "'");
}

WalkMode parse_walk_mode(const std::string& v) {
  if (v == "uniform") return WalkMode::Uniform;
  if (v == "nonbacktracking") return WalkMode::NonBacktracking;
  throw ParseError("walk_mode must be uniform or nonbacktracking, got '" + v + "'");
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ParseError("cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <int N>
Eigen::Matrix<Complex, N, N> matrix_from_json(const std::string& text) {
  using nlohmann::json;
  Eigen::Matrix<Complex, N, N> m;
  try {
    const json j = json::parse(text);
    const json& rows = j.at("matrix");
    if (!rows.is_array() || rows.size() != N) throw ParseError("matrix has the wrong shape");
    for (int r = 0; r < N; ++r) {
      if (!rows[r].is_array() || rows[r].size() != N) throw ParseError("matrix has the wrong shape");
      for (int c = 0; c < N; ++c) {
        const json& e = rows[r][c];
        if (!e.is_array() || e.size() != 2) throw ParseError("matrix entries must be [re, im]");
        m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad matrix JSON: ") + e.what());
  }
  return m;
}

bool starts_with(const std::string& s, std::string_view prefix) { return s.rfind(prefix, 0) == 0; }

std::uint64_t parse_seed(const std::string& spec) {
  return parse_number<std::uint64_t>("seed", spec.substr(spec.find(':') + 1));
}

}  // namespace

KeyValues parse_key_values(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, value).second) throw ParseError("repeated key " + key);
  }
  return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) { return parse_key_values(read_file(path)); }

TrainRunConfig train_run_config(const KeyValues& kv) {
  TrainRunConfig rc;
  TrainingConfig& c = rc.training;
  NetworkSpec& n = c.network;
  for (const auto& [k, v] : kv) {
    if (k == "input_dim") n.input_dim = parse_number<int>(k, v);
    else if (k == "hidden1") n.hidden1 = parse_number<int>(k, v);
    else if (k == "hidden2") n.hidden2 = parse_number<int>(k, v);
    else if (k == "n_res_blocks") n.n_res_blocks = parse_number<int>(k, v);
    else if (k == "res_width") n.res_width = parse_number<int>(k, v);
    else if (k == "leaky_slope") n.leaky_slope = parse_number<double>(k, v);
    else if (k == "use_batchnorm") n.use_batchnorm = parse_bool(k, v);
    else if (k == "M_init") c.M_init = parse_number<int>(k, v);
    else if (k == "M_cap") c.M_cap = parse_number<int>(k, v);
    else if (k == "delta") c.delta = parse_number<double>(k, v);
    else if (k == "D_bf_data") c.D_bf_data = parse_number<int>(k, v);
    else if (k == "batch_size") c.batch_size = parse_number<int>(k, v);
    else if (k == "pool_walks") c.pool_walks = parse_number<int>(k, v);
    else if (k == "refresh_every") c.refresh_every = parse_number<int>(k, v);
    else if (k == "walk_mode") c.walk_mode = parse_walk_mode(v);
    else if (k == "epochs") c.epochs = parse_number<int>(k, v);
    else if (k == "lr") c.lr = parse_number<double>(k, v);
    else if (k == "identity_eps") c.identity_eps = parse_number<double>(k, v);
    else if (k == "seed") c.seed = parse_number<std::uint64_t>(k, v);
    else if (k == "output_dir") rc.output_dir = v;
    else if (k == "checkpoint_every") rc.checkpoint_every = parse_number<int>(k, v);
    else if (k == "resume") rc.resume = v;
    else throw ParseError("unknown training key " + k);
  }
  c.validate();
  if (rc.checkpoint_every <= 0) throw ParseError("checkpoint_every must be positive");
  return rc;
}

SearchConfig search_config(const KeyValues& kv, SearchConfig c) {
  for (const auto& [k, v] : kv) {
    if (k == "lambda") c.lambda = parse_number<double>(k, v);
    else if (k == "gamma") c.gamma = parse_number<double>(k, v);
    else if (k == "D_max") c.D_max = parse_number<int>(k, v);
    else if (k == "D_bf") c.D_bf = parse_number<int>(k, v);
    else if (k == "N") c.N = parse_number<int>(k, v);
    else if (k == "max_open") c.max_open = parse_number<std::size_t>(k, v);
    else if (k == "epsilon_T") c.epsilon_T = parse_number<double>(k, v);
    else if (k == "dedupe_grid") c.dedupe_grid = parse_number<double>(k, v);
    else throw ParseError("unknown search key " + k);
  }
  c.validate();
  return c;
}

Unitary2 parse_target(const std::string& raw, const GateSet& gates) {
  const std::string spec = trim(raw);
  if (spec.empty()) throw ParseError("empty target");
  if (starts_with(spec, "random:")) return random_su2(parse_seed(spec));
  if (starts_with(spec, "word:")) return word_to_unitary(BraidWord::parse(spec.substr(5)), gates);
  if (spec.front() == '{') return Unitary2(matrix_from_json<2>(spec));
  if (spec.size() <= 2) return named_gate(spec);
  if (std::filesystem::exists(spec)) return Unitary2(matrix_from_json<2>(read_file(spec)));
  throw ParseError("unrecognized target: " + spec);
}

Unitary4 parse_target4(const std::string& raw) {
  const std::string spec = trim(raw);
  if (spec.empty()) throw ParseError("empty target");
  if (starts_with(spec, "random:")) return random_su4(parse_seed(spec));
  if (spec.front() == '{') return Unitary4(matrix_from_json<4>(spec));
  if (std::filesystem::exists(spec)) return Unitary4(matrix_from_json<4>(read_file(spec)));
  return named_gate4(spec);
}

}  // namespace fibbraid
