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

#include "fibbraid/gateset.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "fibbraid/errors.hpp"

namespace fibbraid {

std::string_view Action::token() const {
  static constexpr std::array<std::string_view, kActionCount> kTokens = {"s1", "s1i", "s2", "s2i"};
  return kTokens[index()];
}

Action parse_action(std::string_view token) {
  for (Action a : kAllActions) {
    if (a.token() == token) return a;
  }
  throw ParseError("unknown braid token '" + std::string(token) + "'");
}

BraidWord BraidWord::parse(std::string_view text) {
  BraidWord w;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) w.tokens.push_back(parse_action(text.substr(i, j - i)));
    i = j;
  }
  return w;
}

std::string BraidWord::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i].token();
  }
  return out;
}

BraidWord invert_word(const BraidWord& w) {
  BraidWord out;
  out.tokens.reserve(w.size());
  for (auto it = w.tokens.rbegin(); it != w.tokens.rend(); ++it) out.tokens.push_back(it->inverted());
  return out;
}

BraidWord free_reduce(const BraidWord& w) {
  BraidWord out;
  out.tokens.reserve(w.size());
  for (Action a : w.tokens) {
    if (!out.tokens.empty() && out.tokens.back() == a.inverted()) {
      out.tokens.pop_back();
    } else {
      out.tokens.push_back(a);
    }
  }
  return out;
}

BraidWord concat(const BraidWord& first, const BraidWord& second) {
  BraidWord out = first;
  out.tokens.insert(out.tokens.end(), second.tokens.begin(), second.tokens.end());
  return out;
}

GateSet::GateSet(std::vector<GateEntry> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    auto& slot = slot_[entries_[i].action.index()];
    if (slot >= 0) throw std::invalid_argument("GateSet: duplicate action");
    if (!(entries_[i].cost > 0.0)) throw std::invalid_argument("GateSet: costs must be positive");
    slot = static_cast<int>(i);
  }
}

const GateEntry& GateSet::entry(Action a) const {
  const int slot = slot_[a.index()];
  if (slot < 0) throw std::out_of_range("GateSet: action not in set");
  return entries_[slot];
}

bool GateSet::closed_under_inverse(double tol) const {
  for (const auto& e : entries_) {
    if (!contains(e.action.inverted())) return false;
    const Matrix2 diff = unitary(e.action.inverted()).matrix() - e.unitary.matrix().adjoint();
    if (diff.norm() > tol) return false;
  }
  return true;
}

Matrix2 fibonacci_f_matrix() {
  const double phi = std::numbers::phi;
  const double a = 1.0 / phi;
  const double b = 1.0 / std::sqrt(phi);
  Matrix2 f;
  f << a, b, b, -a;
  return f;
}

GateSet fibonacci_gateset(double cost) {
  using std::numbers::pi;
  Matrix2 s1 = Matrix2::Zero();
  s1(0, 0) = std::polar(1.0, -4.0 * pi / 5.0);
  s1(1, 1) = std::polar(1.0, 3.0 * pi / 5.0);
  const Matrix2 f = fibonacci_f_matrix();
  const Matrix2 s2 = f * s1 * f;

  std::vector<GateEntry> entries;
  auto add = [&](Action a, const Matrix2& m) {
    const Unitary2 u(m);
    entries.push_back({a, u, unitary_to_quaternion(u), cost});
  };
  add(Action{Generator::S1, false}, s1);
  add(Action{Generator::S1, true}, s1.adjoint());
  add(Action{Generator::S2, false}, s2);
  add(Action{Generator::S2, true}, s2.adjoint());
  return GateSet(std::move(entries));
}

UnitQuaternion apply_action(const UnitQuaternion& s, Action a, const GateSet& g) {
  return UnitQuaternion(mul(g.entry(a).quaternion.raw(), s.raw()));
}

Unitary2 word_to_unitary(const BraidWord& w, const GateSet& g) {
  Matrix2 m = Matrix2::Identity();
  for (Action a : w.tokens) m = g.unitary(a).matrix() * m;
  return Unitary2::trusted(m);
}

UnitQuaternion word_to_quaternion(const BraidWord& w, const GateSet& g) {
  Quat q;
  for (Action a : w.tokens) q = mul(g.entry(a).quaternion.raw(), q);
  return UnitQuaternion(q);
}

double word_cost(const BraidWord& w, const GateSet& g) {
  double total = 0.0;
  for (Action a : w.tokens) total += g.cost(a);
  return total;
}

std::uint32_t pack_word(const BraidWord& w) {
  if (w.size() > 16) throw std::invalid_argument("pack_word: at most 16 tokens");
  std::uint32_t packed = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    packed |= static_cast<std::uint32_t>(w.tokens[i].index()) << (2 * i);
  }
  return packed;
}

BraidWord unpack_word(std::uint32_t packed, int length) {
  BraidWord w;
  w.tokens.reserve(length);
  for (int i = 0; i < length; ++i) w.tokens.push_back(Action::from_index((packed >> (2 * i)) & 3u));
  return w;
}

}  // namespace fibbraid
