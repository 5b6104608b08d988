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

// Braid generators, braid words and the state transition S(s, a).
//
// Time order: the leftmost token of a BraidWord acts first, so the word
// a1 a2 ... an realizes the matrix U(an) ... U(a2) U(a1).

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fibbraid/su2.hpp"

namespace fibbraid {

enum class Generator : std::uint8_t { S1 = 0, S2 = 1 };

struct Action {
  Generator generator = Generator::S1;
  bool inverse = false;

  /// Dense index in [0, 4): s1, s1i, s2, s2i.
  constexpr int index() const { return 2 * static_cast<int>(generator) + (inverse ? 1 : 0); }
  static constexpr Action from_index(int i) {
    return {static_cast<Generator>(i / 2), (i % 2) == 1};
  }
  constexpr Action inverted() const { return {generator, !inverse}; }
  std::string_view token() const;

  friend constexpr bool operator==(Action, Action) = default;
};

inline constexpr int kActionCount = 4;
inline constexpr std::array<Action, kActionCount> kAllActions = {
    Action::from_index(0), Action::from_index(1), Action::from_index(2), Action::from_index(3)};

/// Parses one of `s1`, `s1i`, `s2`, `s2i`. Throws ParseError.
Action parse_action(std::string_view token);

struct BraidWord {
  std::vector<Action> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }

  /// Whitespace separated tokens; throws ParseError on an unknown token.
  static BraidWord parse(std::string_view text);
  /// Single-space separated tokens, no trailing space.
  std::string to_string() const;

  friend bool operator==(const BraidWord&, const BraidWord&) = default;
};

/// Reverse order and flip every inverse flag.
BraidWord invert_word(const BraidWord& w);

/// Cancels adjacent a a^-1 pairs until none remain.
BraidWord free_reduce(const BraidWord& w);

/// `first` then `second` in time order.
BraidWord concat(const BraidWord& first, const BraidWord& second);

struct GateEntry {
  Action action;
  Unitary2 unitary;
  UnitQuaternion quaternion;
  double cost = 1.0;
};

/// The action alphabet with its unitaries and costs g(a).
class GateSet {
 public:
  GateSet() = default;
  /// Entries may be any subset of the four actions, each at most once.
  explicit GateSet(std::vector<GateEntry> entries);

  std::span<const GateEntry> entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  bool contains(Action a) const { return slot_[a.index()] >= 0; }
  /// Throws std::out_of_range if the action is absent.
  const GateEntry& entry(Action a) const;
  const Unitary2& unitary(Action a) const { return entry(a).unitary; }
  double cost(Action a) const { return entry(a).cost; }

  /// True if every action's inverse is present with unitary(a^-1) == unitary(a)^dagger.
  bool closed_under_inverse(double tol = 1e-12) const;

 private:
  std::vector<GateEntry> entries_;
  std::array<int, kActionCount> slot_ = {-1, -1, -1, -1};
};

/// Golden ratio and the F-move matrix [[1/phi, phi^-1/2], [phi^-1/2, -1/phi]].
Matrix2 fibonacci_f_matrix();

/// sigma1 = diag(e^{-4 pi i/5}, e^{3 pi i/5}), sigma2 = F sigma1 F, with
/// inverses and unit costs.
GateSet fibonacci_gateset(double cost = 1.0);

/// S(s, a): left-multiplies the state by U(a), canonical sign re-applied.
UnitQuaternion apply_action(const UnitQuaternion& s, Action a, const GateSet& g);

/// U(wn) ... U(w1).
Unitary2 word_to_unitary(const BraidWord& w, const GateSet& g);

/// Quaternion of word_to_unitary, accumulated in quaternion arithmetic.
UnitQuaternion word_to_quaternion(const BraidWord& w, const GateSet& g);

/// Total cost sum g(a) over the word.
double word_cost(const BraidWord& w, const GateSet& g);

/// Packs up to 16 actions at two bits each (first token in the low bits).
std::uint32_t pack_word(const BraidWord& w);
BraidWord unpack_word(std::uint32_t packed, int length);

}  // namespace fibbraid
