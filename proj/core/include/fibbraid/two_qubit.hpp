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

// Two-qubit compilation by analytic decomposition.
//
// Conventions: wire 0 is the first (most significant) factor of every
// Kronecker product, so a gate A on wire 0 and B on wire 1 is A (x) B.
// The named CNOT and the controlled-iX fixture both have control = wire 0;
// placements with control on wire 1 use the swap-conjugated matrix.
//
// Every SU(4) element is written as three CNOTs and seven single-qubit
// slots in the fixed time order
//
//   slot0(w0) slot1(w1) | CX(1->0) | slot2(w0) slot3(w1) | CX(0->1) |
//   slot4(w1) | CX(1->0) | slot5(w0) slot6(w1)
//
// obtained from U = (A1 (x) A2) exp(i(a XX + b YY + c ZZ)) (A3 (x) A4) and
// the three-CNOT circuit for the canonical factor.

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fibbraid/gateset.hpp"
#include "fibbraid/search.hpp"
#include "fibbraid/su2.hpp"

namespace fibbraid {

using Matrix4 = Eigen::Matrix4cd;

/// 4x4 unitary; construction checks ||U^dagger U - I||_F < 1e-10.
class Unitary4 {
 public:
  Unitary4() : m_(Matrix4::Identity()) {}
  explicit Unitary4(const Matrix4& m);
  static Unitary4 trusted(const Matrix4& m) {
    Unitary4 u;
    u.m_ = m;
    return u;
  }
  const Matrix4& matrix() const { return m_; }

 private:
  Matrix4 m_;
};

Matrix4 kron(const Matrix2& wire0, const Matrix2& wire1);
/// Single-qubit gate on one wire.
Matrix4 on_wire(const Matrix2& g, int wire);
Matrix4 cnot_matrix(int control, int target);
/// |0><0| (x) I + |1><1| (x) iX with control on `control`.
Matrix4 ideal_controlled_ix(int control = 0);
Matrix4 swap_matrix();

/// Haar-random SU(4), deterministic in the seed.
Unitary4 random_su4(std::uint64_t seed);

/// Named two-qubit gates: I, CNOT, CZ, SWAP, CIX. Throws ParseError.
Unitary4 named_gate4(std::string_view name);

/// min over phi of ||a - e^{i phi} b||_2 (spectral norm), computed from the
/// eigenphases of a^dagger b.
double spectral_distance(const Matrix4& a, const Matrix4& b);

struct Slot {
  Unitary2 gate;
  int wire = 0;
};

struct CnotPlacement {
  int control = 0;
  int target = 1;
};

/// Seven slots and three CNOTs in the fixed topology above.
struct TwoQubitCircuit {
  std::array<Slot, 7> slots;
  std::array<CnotPlacement, 3> cnots;
  std::array<double, 3> canonical{};  // (a, b, c)

  Matrix4 recompose() const;
};

/// Deterministic: eigenvectors from the real/imaginary split of the
/// magic-basis symmetric form, degenerate eigenspaces resolved by the
/// imaginary part, columns sorted by eigenphase (descending) with the first
/// significant entry made positive. Never fails on degenerate spectra.
TwoQubitCircuit kak_decompose(const Unitary4& u);

/// Controlled-iX braid from an external source, treated as data.
struct CixFixture {
  std::vector<std::string> word;  // opaque six-anyon tokens
  Unitary4 matrix;                // effective computational-subspace matrix, control = wire 0
  int length = 0;
  double error = 0.0;
  double leakage = 0.0;
  std::string charge = "I";  // "I" or "tau"
  bool synthetic = false;

  /// Ideal matrix, empty word, length 140, labeled synthetic.
  static CixFixture synthetic_default();
  /// JSON fields word, matrix (4x4 nested [re, im]), length, error,
  /// leakage, charge; optional synthetic. Throws ParseError when the
  /// matrix is farther than `error` (+1e-9) from the ideal gate.
  static CixFixture parse(const std::string& json_text);
  static CixFixture load(const std::filesystem::path& path);
  std::string to_json() const;
};

struct HybridCircuit {
  std::array<Slot, 7> slots;  // with the Rz(-pi/2) corrections merged in
  std::array<CnotPlacement, 3> placements;
  Matrix4 cix;                // fixture matrix, control = wire 0
  bool ideal_cnot_mode = false;

  Matrix4 recompose() const;
  /// Recomposition with replacement single-qubit gates.
  Matrix4 recompose(const std::array<Unitary2, 7>& gates) const;
};

/// Replaces each CNOT by Rz(-pi/2) on its control followed by the
/// controlled-iX, merging the rotation into the control-wire slot
/// immediately preceding the CNOT. Without a fixture the ideal
/// controlled-iX is used and the result is flagged ideal_cnot_mode.
HybridCircuit substitute_cnots(const TwoQubitCircuit& c, const CixFixture* fixture);

struct SlotCompilation {
  CompileReport report;
  Unitary2 realized;  // word_to_unitary(report.word) for braid compilers
};
using SlotCompiler = std::function<SlotCompilation(const Unitary2&)>;

/// Slot compiler backed by the weighted A* search.
SlotCompiler search_slot_compiler(const CostToGo& heuristic, const GateSet& gates,
                                  const SearchConfig& cfg);

/// Passes each slot through unchanged with an empty word. Isolates the
/// decomposition and fixture error from braid approximation error.
SlotCompiler exact_slot_compiler();

struct TwoQubitReport {
  std::array<Unitary2, 7> slot_targets;
  std::array<SlotCompilation, 7> slots;
  double error = 0.0;  // spectral_distance(target, approximation)
  std::size_t slot_length = 0;
  std::size_t total_length = 0;  // slot_length + 3 * fixture length
  int fixture_length = 0;
  double fixture_error = 0.0;
  std::string fixture_charge;
  bool ideal_cnot_mode = false;
  double wall_time_s = 0.0;
};

TwoQubitReport compile_two_qubit(const Unitary4& u, const SlotCompiler& compile_slot,
                                 const CixFixture* fixture);
TwoQubitReport compile_two_qubit(const Unitary4& u, const CostToGo& heuristic,
                                 const GateSet& gates, const SearchConfig& cfg,
                                 const CixFixture* fixture);

std::string two_qubit_report_to_json(const TwoQubitReport& r);

}  // namespace fibbraid
