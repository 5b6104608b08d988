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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fibbraid/baselines.hpp"
#include "fibbraid/errors.hpp"

namespace fibbraid {

namespace {

struct GateTable {
  std::vector<Quat> quats;
  std::vector<Action> actions;
  std::vector<int> inverse;  // entry index of the inverse action, -1 if absent

  explicit GateTable(const GateSet& gates) {
    for (const auto& e : gates.entries()) {
      quats.push_back(e.quaternion.raw());
      actions.push_back(e.action);
    }
    for (const auto& e : gates.entries()) {
      int inv = -1;
      for (std::size_t j = 0; j < actions.size(); ++j) {
        if (actions[j] == e.action.inverted()) inv = static_cast<int>(j);
      }
      inverse.push_back(inv);
    }
  }
};

class BruteForce {
 public:
  BruteForce(const GateTable& table, const Quat& target, Pruning pruning)
      : gates_(table), target_(target), pruning_(pruning) {}

  void scan_depth(int depth) {
    path_.assign(depth, 0);
    visit(Quat{}, 0, depth, -1);
  }

  double best_distance = 2.0;
  std::vector<int> best_path;
  std::size_t visited = 0;

 private:
  void visit(const Quat& q, int depth, int target_depth, int last) {
    if (depth == target_depth) {
      ++visited;
      const double d = std::abs(dot(q, target_));
      if (d > best_dot_ - 1e-15) {
        const double dist = quaternion_distance(q, target_);
        if (dist < best_distance - 1e-12) {
          best_distance = dist;
          best_dot_ = std::max(best_dot_, d);
          best_path = path_;
        }
      }
      return;
    }
    for (std::size_t g = 0; g < gates_.quats.size(); ++g) {
      if (pruning_ == Pruning::InverseAdjacent && last >= 0 && gates_.inverse[last] == static_cast<int>(g)) {
        continue;
      }
      path_[depth] = static_cast<int>(g);
      visit(mul(gates_.quats[g], q), depth + 1, target_depth, static_cast<int>(g));
    }
  }

  const GateTable& gates_;
  Quat target_;
  Pruning pruning_;
  double best_dot_ = -1.0;
  std::vector<int> path_;
};

}  // namespace

CompileReport bruteforce_compile(const Unitary2& target, int max_depth,
                                 std::optional<double> accuracy_goal, const GateSet& gates,
                                 Pruning pruning) {
  if (max_depth > kBruteForceDepthGuard) {
    throw DepthGuardExceeded("brute force depth " + std::to_string(max_depth) + " exceeds " +
                             std::to_string(kBruteForceDepthGuard));
  }
  if (max_depth < 0) throw std::invalid_argument("bruteforce_compile: negative depth");
  if (gates.empty()) throw EmptyGateSet("bruteforce_compile: empty gate set");
  const auto start = std::chrono::steady_clock::now();
  const GateTable table(gates);
  const UnitQuaternion t = unitary_to_quaternion(target);
  BruteForce bf(table, t.raw(), pruning);

  CompileReport report;
  for (int depth = 0; depth <= max_depth; ++depth) {
    bf.scan_depth(depth);
    report.depth_reached = depth;
    if (accuracy_goal && bf.best_distance < *accuracy_goal) {
      report.terminated_by = TerminatedBy::Accuracy;
      break;
    }
  }
  for (int g : bf.best_path) report.word.tokens.push_back(table.actions[g]);
  report.length = report.word.size();
  report.distance = quaternion_distance(word_to_quaternion(report.word, gates), t);
  report.nodes_expanded = bf.visited;
  report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

const BfsTable::Entry* BfsTable::find(const UnitQuaternion& state) const {
  const auto c = state.components();
  // Candidate cells per coordinate: the rounded cell and, near a cell
  // boundary, its neighbour.
  std::array<std::array<std::int64_t, 2>, 4> cand;
  std::array<int, 4> count{};
  for (int i = 0; i < 4; ++i) {
    const double s = c[i] / grid_;
    const double r = std::round(s);
    cand[i][0] = static_cast<std::int64_t>(r);
    count[i] = 1;
    const double frac = s - r;
    if (std::abs(std::abs(frac) - 0.5) < 1e-3) {
      cand[i][1] = cand[i][0] + (frac > 0 ? 1 : -1);
      count[i] = 2;
    }
  }
  const bool sign_ambiguous = std::abs(c[0]) < 1e-6;
  for (int flip = 0; flip < (sign_ambiguous ? 2 : 1); ++flip) {
    for (int a = 0; a < count[0]; ++a)
      for (int b = 0; b < count[1]; ++b)
        for (int d = 0; d < count[2]; ++d)
          for (int e = 0; e < count[3]; ++e) {
            GridKey key{{cand[0][a], cand[1][b], cand[2][d], cand[3][e]}};
            if (flip) {
              for (auto& v : key.cell) v = -v;
            }
            const auto it = entries_.find(key);
            if (it != entries_.end()) return &it->second;
          }
  }
  return nullptr;
}

void BfsTable::insert(const UnitQuaternion& state, std::uint32_t packed, int depth) {
  entries_.emplace(grid_key(state, grid_), Entry{packed, static_cast<std::uint8_t>(depth), state});
}

BfsTable BfsTable::build(int max_depth, const GateSet& gates, double grid) {
  if (max_depth < 0 || max_depth > kBruteForceDepthGuard) {
    throw DepthGuardExceeded("BfsTable depth must lie in [0, 16]");
  }
  if (gates.empty()) throw EmptyGateSet("BfsTable: empty gate set");
  const GateTable table(gates);
  BfsTable t;
  t.max_depth_ = max_depth;
  t.grid_ = grid;

  struct Item {
    Quat q;
    std::uint32_t packed;
    int last;
  };
  std::vector<Item> frontier = {{Quat{}, 0u, -1}};
  t.insert(UnitQuaternion(), 0u, 0);
  t.level_sizes_.push_back(1);
  for (int depth = 1; depth <= max_depth; ++depth) {
    std::vector<Item> next;
    for (const Item& it : frontier) {
      for (std::size_t g = 0; g < table.quats.size(); ++g) {
        if (it.last >= 0 && table.inverse[it.last] == static_cast<int>(g)) continue;
        const Quat q = mul(table.quats[g], it.q);
        const UnitQuaternion u(q);
        if (t.find(u)) continue;
        const std::uint32_t packed =
            it.packed | (static_cast<std::uint32_t>(table.actions[g].index()) << (2 * (depth - 1)));
        t.insert(u, packed, depth);
        next.push_back({q, packed, static_cast<int>(g)});
      }
    }
    t.level_sizes_.push_back(next.size());
    frontier = std::move(next);
  }
  return t;
}

std::optional<int> BfsTable::distance(const UnitQuaternion& state) const {
  const Entry* e = find(state);
  if (!e) return std::nullopt;
  return e->depth;
}

std::optional<BraidWord> BfsTable::word(const UnitQuaternion& state) const {
  const Entry* e = find(state);
  if (!e) return std::nullopt;
  return unpack_word(e->packed, e->depth);
}

void BfsTable::save(const std::filesystem::path& path) const {
  nlohmann::json doc;
  doc["version"] = 1;
  doc["kind"] = "bfs_table";
  doc["max_depth"] = max_depth_;
  doc["grid"] = grid_;
  // Sorted for a stable file.
  std::vector<std::pair<int, std::uint32_t>> rows;
  rows.reserve(entries_.size());
  for (const auto& [key, e] : entries_) rows.emplace_back(e.depth, e.packed);
  std::sort(rows.begin(), rows.end());
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [depth, packed] : rows) entries.push_back({packed, depth});
  doc["entries"] = std::move(entries);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump() << '\n';
}

BfsTable BfsTable::load(const std::filesystem::path& path, const GateSet& gates) {
  std::ifstream in(path);
  if (!in) throw CorruptCheckpoint("cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
    if (doc.at("version") != 1 || doc.at("kind") != "bfs_table") {
      throw CorruptCheckpoint("not a version-1 bfs_table file");
    }
    BfsTable t;
    t.max_depth_ = doc.at("max_depth").get<int>();
    t.grid_ = doc.at("grid").get<double>();
    t.level_sizes_.assign(t.max_depth_ + 1, 0);
    for (const auto& row : doc.at("entries")) {
      const auto packed = row.at(0).get<std::uint32_t>();
      const int depth = row.at(1).get<int>();
      if (depth < 0 || depth > t.max_depth_) throw CorruptCheckpoint("entry depth out of range");
      const BraidWord w = unpack_word(packed, depth);
      t.insert(word_to_quaternion(w, gates), packed, depth);
      ++t.level_sizes_[depth];
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw CorruptCheckpoint(std::string("malformed bfs_table: ") + e.what());
  }
}

std::optional<int> bfs_distance(const UnitQuaternion& state, const BfsTable& table) {
  return table.distance(state);
}

std::vector<double> BfsCostToGo::evaluate(std::span<const UnitQuaternion> states) const {
  std::vector<double> out;
  out.reserve(states.size());
  for (const auto& s : states) {
    const auto d = table_->distance(s);
    out.push_back(d ? static_cast<double>(*d) : static_cast<double>(table_->max_depth() + 1));
  }
  return out;
}

}  // namespace fibbraid
