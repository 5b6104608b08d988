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

// Batched weighted A* over the braid-action graph.
//
// The search starts from the target T and looks for actions that bring it
// back to the identity. Node ordering uses
//
//   f(s) = lambda * G(s) + J(s) + gamma * (J - round(J))^2 / J
//
// where G is the accumulated action cost and J the cost-to-go estimate.
// Ties in f are broken by smaller J, then by insertion order.
//
// Phases:
//   1. Exhaustive expansion of every word up to D_bf from T. Interior
//      states are closed; the depth-D_bf frontier seeds the open set.
//   2. Up to D_max iterations, each expanding the N lowest-f open nodes
//      with one batched cost-to-go call for all new successors. States
//      are deduplicated on a quaternion grid of pitch dedupe_grid. The
//      open set is truncated to max_open by dropping the highest f.
//
// The best state is tracked by distance to the identity (shorter path on
// ties). The returned word is the inverse of its action path, freely
// reduced, so that word_to_unitary(word) approximates T.

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fibbraid/gateset.hpp"
#include "fibbraid/network.hpp"

namespace fibbraid {

/// Cost-to-go estimate used to order the search.
class CostToGo {
 public:
  virtual ~CostToGo() = default;
  virtual std::vector<double> evaluate(std::span<const UnitQuaternion> states) const = 0;
};

/// J(s) from a network in Eval mode, clamped at zero from below.
class NetworkCostToGo final : public CostToGo {
 public:
  /// Throws UninitializedNetwork; the network must outlive this object.
  explicit NetworkCostToGo(const MLPNetwork& net);
  std::vector<double> evaluate(std::span<const UnitQuaternion> states) const override;

 private:
  const MLPNetwork* net_;
};

/// Threshold that counts as an exact hit when no termination accuracy is set.
inline constexpr double kExactHitDistance = 1e-10;

struct SearchConfig {
  double lambda = 1.0;
  double gamma = 400.0;
  int D_max = 100;
  int D_bf = 5;
  int N = 100;
  std::size_t max_open = 100000;
  std::optional<double> epsilon_T;
  double dedupe_grid = 1e-9;

  /// D_max = 1000, used for accuracy-terminated runs.
  static SearchConfig complexity_preset(double epsilon_T);
  void validate() const;
};

enum class TerminatedBy { DepthCap, Accuracy };
std::string_view to_string(TerminatedBy t);

struct CompileReport {
  BraidWord word;
  double distance = 1.0;     // quaternion distance of word_to_unitary(word) to the target
  std::size_t length = 0;
  std::size_t nodes_expanded = 0;
  int depth_reached = 0;     // brute-force levels completed + search iterations
  double wall_time_s = 0.0;
  TerminatedBy terminated_by = TerminatedBy::DepthCap;
};

/// gamma * (J - round(J))^2 / J, defined as 0 for J <= 1e-9.
double decimal_penalty(double J, double gamma);

/// lambda * G + J + decimal_penalty(J, gamma).
double evaluate_f(double G, double J, const SearchConfig& cfg);

/// Throws NonUnitaryInput, EmptyGateSet.
CompileReport search(const Unitary2& target, const CostToGo& heuristic, const GateSet& gates,
                     const SearchConfig& cfg);
CompileReport search(const Unitary2& target, const MLPNetwork& net, const GateSet& gates,
                     const SearchConfig& cfg);

/// search() with a required termination accuracy.
CompileReport compile_with_accuracy(const Unitary2& target, const CostToGo& heuristic,
                                    const GateSet& gates, const SearchConfig& cfg);

/// Report as JSON: word, distance, length, nodes_expanded, depth_reached,
/// wall_time_s, terminated_by and, when given, the search configuration.
std::string report_to_json(const CompileReport& report, const SearchConfig* cfg = nullptr);

}  // namespace fibbraid
