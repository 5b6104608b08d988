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

// Value-iteration training of the cost-to-go network.
//
// A policy network is regressed onto the Bellman targets
//
//   J'(s) = min_a [ g(a) + max(0, J_target(S(s, a))) ]
//
// with J = 0 inside the identity_eps ball around the identity. Training
// states come from scrambles of k random actions applied to the identity,
// k uniform on {1..M}, plus every word up to D_bf_data. Whenever the
// minibatch loss drops below delta the target network is refreshed from
// the policy and M grows by one.

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <vector>

#include "fibbraid/gateset.hpp"
#include "fibbraid/network.hpp"

namespace fibbraid {

enum class WalkMode {
  Uniform,          // every action equally likely at every step
  NonBacktracking,  // never follow an action by its inverse
};

struct TrainingConfig {
  NetworkSpec network = NetworkSpec::desk_scale();
  int M_init = 5;
  int M_cap = 40;
  double delta = 0.05;
  int D_bf_data = 3;
  int batch_size = 1000;   // states per optimizer step
  int pool_walks = 2000;   // scrambles per data refresh
  int refresh_every = 50;  // epochs between data refreshes
  int epochs = 1000;
  double lr = 1e-4;
  double identity_eps = 1e-4;
  std::uint64_t seed = 0;
  WalkMode walk_mode = WalkMode::Uniform;

  void validate() const;
};

struct TrainingSample {
  UnitQuaternion state;
  std::vector<UnitQuaternion> successors;  // one per gate-set entry, in entry order
  int depth = 0;                           // actions applied to reach `state`
};

struct TrainingBatch {
  std::vector<TrainingSample> samples;
  std::vector<int> walk_lengths;  // the k drawn for each scramble
};

/// Exhaustive words up to cfg.D_bf_data followed by cfg.pool_walks random
/// scrambles; every intermediate state of a scramble is kept. Deterministic
/// in `seed`.
TrainingBatch generate_training_batch(const TrainingConfig& cfg, int M, const GateSet& gates,
                                      std::uint64_t seed);

/// Bellman targets. `target_net` is evaluated in Eval mode.
std::vector<double> compute_targets(const MLPNetwork& target_net,
                                    std::span<const TrainingSample> samples, const GateSet& gates,
                                    double identity_eps);

/// Same rule with an arbitrary cost-to-go oracle for the successors.
std::vector<double> compute_targets(
    const std::function<std::vector<double>(std::span<const UnitQuaternion>)>& cost_to_go,
    std::span<const TrainingSample> samples, const GateSet& gates, double identity_eps);

struct TrainingLogRow {
  int epoch = 0;
  double loss = 0.0;
  int M = 0;
  double mean_target = 0.0;
};

/// CSV header `epoch,loss,M,mean_target`.
void write_log_header(std::ostream& out);
void write_log_row(std::ostream& out, const TrainingLogRow& row);
/// Parses a training log; throws ParseError.
std::vector<TrainingLogRow> read_log(std::istream& in);

class ValueTrainer {
 public:
  explicit ValueTrainer(TrainingConfig cfg, GateSet gates = fibonacci_gateset());
  /// Continues from a saved policy at the given epoch and scramble length.
  ValueTrainer(TrainingConfig cfg, const MLPNetwork& policy, int start_epoch, int M,
               GateSet gates = fibonacci_gateset());

  /// One optimizer step. Throws DivergenceDetected on a non-finite loss.
  TrainingLogRow step();

  /// Runs until cfg.epochs total epochs. The callback sees every log row.
  void run(const std::function<void(const TrainingLogRow&, const ValueTrainer&)>& on_epoch = {});

  const MLPNetwork& policy() const { return policy_; }
  const MLPNetwork& target() const { return target_; }
  int epoch() const { return epoch_; }
  int max_length() const { return M_; }
  const TrainingConfig& config() const { return cfg_; }

 private:
  void refresh_pool();

  TrainingConfig cfg_;
  GateSet gates_;
  MLPNetwork policy_;
  MLPNetwork target_;
  AdamOptimizer optimizer_;
  TrainingBatch pool_;
  std::mt19937_64 rng_;
  int epoch_ = 0;
  int M_ = 0;
  int pool_age_ = 0;
};

struct TrainingResult {
  MLPNetwork network;
  std::vector<TrainingLogRow> log;
};

/// Fresh run of cfg.epochs epochs; returns the policy network (Eval mode).
TrainingResult train(const TrainingConfig& cfg, const GateSet& gates = fibonacci_gateset());

}  // namespace fibbraid
