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

// Reference compilers over the same gate set: exhaustive enumeration, an
// exact shortest-word table, and the Solovay-Kitaev recursion.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fibbraid/gateset.hpp"
#include "fibbraid/search.hpp"

namespace fibbraid {

inline constexpr int kBruteForceDepthGuard = 16;

enum class Pruning {
  InverseAdjacent,  // never follow a by a^-1: 4 * 3^(d-1) words at depth d
  None,             // all 4^d words
};

/// Shortest word of length <= max_depth achieving the best distance to the
/// target (depths are scanned in increasing order; a longer word replaces
/// the incumbent only if it is closer by more than 1e-12). With an
/// accuracy goal, stops after the first depth that reaches it.
/// Throws DepthGuardExceeded when max_depth > 16.
CompileReport bruteforce_compile(const Unitary2& target, int max_depth,
                                 std::optional<double> accuracy_goal, const GateSet& gates,
                                 Pruning pruning = Pruning::InverseAdjacent);

/// Shortest word for every state reachable within max_depth, keyed by grid
/// cell of the canonical quaternion. The stored word w realizes the state
/// word_to_unitary(w); its length is the exact distance to the identity.
class BfsTable {
 public:
  static BfsTable build(int max_depth, const GateSet& gates, double grid = 1e-9);

  int max_depth() const { return max_depth_; }
  double grid() const { return grid_; }
  std::size_t size() const { return entries_.size(); }
  /// Number of distinct states first reached at each depth.
  const std::vector<std::size_t>& level_sizes() const { return level_sizes_; }

  std::optional<int> distance(const UnitQuaternion& state) const;
  std::optional<BraidWord> word(const UnitQuaternion& state) const;

  /// Visits every (word, state) pair.
  template <class F>
  void for_each(F&& f) const {
    for (const auto& [key, e] : entries_) f(unpack_word(e.packed, e.depth), e.state);
  }

  /// Versioned JSON: {"version": 1, "kind": "bfs_table", "max_depth": d,
  /// "grid": g, "entries": [[packed_word, depth], ...]}. States are
  /// recomputed from the words on load.
  void save(const std::filesystem::path& path) const;
  static BfsTable load(const std::filesystem::path& path, const GateSet& gates);

 private:
  struct Entry {
    std::uint32_t packed = 0;
    std::uint8_t depth = 0;
    UnitQuaternion state;
  };
  const Entry* find(const UnitQuaternion& state) const;
  void insert(const UnitQuaternion& state, std::uint32_t packed, int depth);

  int max_depth_ = 0;
  double grid_ = 1e-9;
  std::unordered_map<GridKey, Entry, GridKeyHash> entries_;
  std::vector<std::size_t> level_sizes_;
};

/// BFS distance; std::nullopt means NotCovered (farther than max_depth).
std::optional<int> bfs_distance(const UnitQuaternion& state, const BfsTable& table);

/// Exact cost-to-go from a table; uncovered states score max_depth + 1,
/// which never overestimates.
class BfsCostToGo final : public CostToGo {
 public:
  explicit BfsCostToGo(const BfsTable& table) : table_(&table) {}
  std::vector<double> evaluate(std::span<const UnitQuaternion> states) const override;

 private:
  const BfsTable* table_;
};

/// Solovay-Kitaev base net: distinct states of all words up to `depth`.
struct SkBaseNet {
  std::vector<std::uint32_t> packed;
  std::vector<std::uint8_t> lengths;
  std::vector<Quat> states;
  int depth = 0;
  double covering_radius = 0.0;  // max nearest-entry distance over a seeded sample

  std::size_t size() const { return states.size(); }
  BraidWord word(std::size_t i) const { return unpack_word(packed[i], lengths[i]); }
  /// Index of the entry closest to q in quaternion distance.
  std::size_t nearest(const Quat& q) const;
};

SkBaseNet sk_build_base(int depth, const GateSet& gates);

struct GroupCommutator {
  Unitary2 V;
  Unitary2 W;
};

/// Balanced group commutator: V W V^dagger W^dagger == U up to global
/// phase, with V and W rotations by the same angle phi where
///   sin(theta/2) = 2 sin^2(phi/2) sqrt(1 - sin^4(phi/2))
/// and theta in [0, pi] is the rotation angle of U. V and W are the x and
/// y rotations by phi, conjugated by the rotation carrying the axis of
/// their commutator onto the axis of U. Every theta in [0, pi] is
/// admissible; throws CommutatorDecompositionFailure if recomposition
/// misses by more than 1e-8.
GroupCommutator gc_decompose(const Unitary2& u);

/// Rotation angle in [0, pi] of the projective class of u.
double rotation_angle(const Unitary2& u);

/// Level 0 is the nearest base-net word; level n composes
///   U_n = V W V^dagger W^dagger U_{n-1}
/// from level n-1 approximations of U_{n-1} and of the commutator pair of
/// U U_{n-1}^dagger. If a commutator decomposition fails the residual is
/// split into two half-angle rotations, each decomposed separately.
CompileReport sk_compile(const Unitary2& target, int level, const SkBaseNet& base,
                         const GateSet& gates);

}  // namespace fibbraid
