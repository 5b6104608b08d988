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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "fibbraid/baselines.hpp"
#include "fibbraid/errors.hpp"
#include "fibbraid/trainer.hpp"

namespace fibbraid {
namespace {

TrainingConfig tiny_config() {
  TrainingConfig cfg;
  cfg.network = NetworkSpec{4, 16, 8, 1, 8, 0.01, true};
  cfg.batch_size = 64;
  cfg.pool_walks = 100;
  cfg.epochs = 10;
  cfg.lr = 1e-3;
  return cfg;
}

bool contains_state(const TrainingBatch& b, const UnitQuaternion& q) {
  for (const auto& s : b.samples)
    if (quaternion_distance(s.state, q) < 1e-12) return true;
  return false;
}

TEST(BatchTest, LengthOneWalksAreGenerators) {
  const GateSet g = fibonacci_gateset();
  TrainingConfig cfg = tiny_config();
  const TrainingBatch b = generate_training_batch(cfg, 1, g, 3);
  for (const auto& s : b.samples) {
    if (s.depth == 0) {
      EXPECT_LT(quaternion_distance(s.state, UnitQuaternion()), 1e-15);  // identity anchor
      continue;
    }
    bool generator = false;
    for (const auto& e : g.entries()) generator |= quaternion_distance(s.state, e.quaternion) < 1e-12;
    EXPECT_TRUE(generator);
  }
}

// Count walk steps that undo the previous step (state returns to the one
// two steps back).
int immediate_returns(const TrainingBatch& b) {
  int n = 0;
  for (std::size_t i = 2; i < b.samples.size(); ++i) {
    const auto& s = b.samples[i];
    if (s.depth < 2 || b.samples[i - 1].depth != s.depth - 1) continue;
    const UnitQuaternion back = s.depth == 2 ? UnitQuaternion() : b.samples[i - 2].state;
    n += quaternion_distance(s.state, back) < 1e-12;
  }
  return n;
}

TEST(BatchTest, NonBacktrackingWalksNeverUndoAStep) {
  const GateSet g = fibonacci_gateset();
  TrainingConfig cfg = tiny_config();
  cfg.D_bf_data = 0;
  cfg.pool_walks = 300;
  EXPECT_GT(immediate_returns(generate_training_batch(cfg, 12, g, 4)), 100);
  cfg.walk_mode = WalkMode::NonBacktracking;
  EXPECT_EQ(immediate_returns(generate_training_batch(cfg, 12, g, 4)), 0);
}

TEST(BatchTest, BruteForcePrefixIsComplete) {
  const GateSet g = fibonacci_gateset();
  TrainingConfig cfg = tiny_config();
  cfg.D_bf_data = 2;
  const TrainingBatch b = generate_training_batch(cfg, 5, g, 4);
  int words = 0;
  for (const Action a : kAllActions) {
    EXPECT_TRUE(contains_state(b, word_to_quaternion(BraidWord{{a}}, g)));
    ++words;
    for (const Action c : kAllActions) {
      EXPECT_TRUE(contains_state(b, word_to_quaternion(BraidWord{{a, c}}, g)));
      ++words;
    }
  }
  EXPECT_EQ(words, 20);
}

TEST(BatchTest, SuccessorsMatchApplyAction) {
  const GateSet g = fibonacci_gateset();
  const TrainingBatch b = generate_training_batch(tiny_config(), 4, g, 5);
  for (std::size_t i = 0; i < b.samples.size(); i += 7) {
    const auto& s = b.samples[i];
    ASSERT_EQ(s.successors.size(), 4u);
    for (std::size_t a = 0; a < 4; ++a)
      EXPECT_LT(quaternion_distance(s.successors[a], apply_action(s.state, g.entries()[a].action, g)), 1e-14);
  }
}

TEST(BatchTest, DeterministicPerSeed) {
  const GateSet g = fibonacci_gateset();
  const auto a = generate_training_batch(tiny_config(), 6, g, 9);
  const auto b = generate_training_batch(tiny_config(), 6, g, 9);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) EXPECT_EQ(a.samples[i].state, b.samples[i].state);
  EXPECT_EQ(a.walk_lengths, b.walk_lengths);
}

// Pearson chi-square against uniform on {1..M}; 4 degrees of freedom,
// critical value 13.277 at p = 0.01.
TEST(BatchTest, WalkLengthsAreUniform) {
  TrainingConfig cfg = tiny_config();
  cfg.pool_walks = 10000;
  const int M = 5;
  const auto b = generate_training_batch(cfg, M, fibonacci_gateset(), 11);
  std::vector<int> hist(M + 1, 0);
  for (int k : b.walk_lengths) {
    ASSERT_GE(k, 1);
    ASSERT_LE(k, M);
    ++hist[k];
  }
  const double expect = 10000.0 / M;
  double chi2 = 0;
  for (int k = 1; k <= M; ++k) chi2 += (hist[k] - expect) * (hist[k] - expect) / expect;
  EXPECT_LT(chi2, 13.277);
}

TEST(TargetTest, BellmanArithmetic) {
  const GateSet g = fibonacci_gateset();
  const UnitQuaternion q = unitary_to_quaternion(random_su2(3));
  TrainingSample s{q, {}, 1};
  for (const auto& e : g.entries()) s.successors.push_back(apply_action(q, e.action, g));
  const std::vector<double> j{2, 3, 3, 4};
  auto oracle = [&](std::span<const UnitQuaternion> states) {
    std::vector<double> out;
    for (std::size_t i = 0; i < states.size(); ++i) out.push_back(j[i % 4]);
    return out;
  };
  EXPECT_EQ(compute_targets(oracle, std::span(&s, 1), g, 1e-4)[0], 3.0);

  // Negative estimates are clamped before the minimum.
  auto negative = [](std::span<const UnitQuaternion> states) { return std::vector<double>(states.size(), -5.0); };
  EXPECT_EQ(compute_targets(negative, std::span(&s, 1), g, 1e-4)[0], 1.0);
}

TEST(TargetTest, IdentityAndGeneratorWithExactOracle) {
  const GateSet g = fibonacci_gateset();
  const BfsTable table = BfsTable::build(8, g);
  const BfsCostToGo exact(table);
  auto j = [&](std::span<const UnitQuaternion> s) { return exact.evaluate(s); };

  TrainingSample id{UnitQuaternion(), {}, 0};
  for (const auto& e : g.entries()) id.successors.push_back(e.quaternion);
  EXPECT_EQ(compute_targets(j, std::span(&id, 1), g, 1e-4)[0], 0.0);

  const UnitQuaternion s1 = g.entry(parse_action("s1")).quaternion;
  TrainingSample gen{s1, {}, 1};
  for (const auto& e : g.entries()) gen.successors.push_back(apply_action(s1, e.action, g));
  EXPECT_EQ(compute_targets(j, std::span(&gen, 1), g, 1e-4)[0], 1.0);
}

// With unit costs the Bellman update maps exact BFS distance to itself.
TEST(TargetTest, BfsDistanceIsAFixedPoint) {
  const GateSet g = fibonacci_gateset();
  const BfsTable table = BfsTable::build(7, g);
  const BfsCostToGo exact(table);
  auto j = [&](std::span<const UnitQuaternion> s) { return exact.evaluate(s); };
  TrainingConfig cfg = tiny_config();
  cfg.pool_walks = 300;
  const auto batch = generate_training_batch(cfg, 6, g, 21);
  const auto targets = compute_targets(j, batch.samples, g, 1e-4);
  for (std::size_t i = 0; i < batch.samples.size(); ++i) {
    const auto d = bfs_distance(batch.samples[i].state, table);
    ASSERT_TRUE(d.has_value());
    EXPECT_EQ(targets[i], static_cast<double>(*d));
  }
}

TEST(TrainerTest, InfiniteThresholdRaisesLengthEveryEpoch) {
  TrainingConfig cfg = tiny_config();
  cfg.delta = std::numeric_limits<double>::infinity();
  cfg.M_cap = 9;
  ValueTrainer t(cfg);
  for (int e = 0; e < 6; ++e) {
    const auto row = t.step();
    EXPECT_EQ(row.M, std::min(5 + e, 9));
    EXPECT_EQ(t.target().parameters(), t.policy().parameters());
  }
  EXPECT_EQ(t.max_length(), 9);
}

TEST(TrainerTest, ZeroEpochsReturnsInitialNetwork) {
  TrainingConfig cfg = tiny_config();
  cfg.epochs = 0;
  const TrainingResult r = train(cfg);
  EXPECT_TRUE(r.log.empty());
  EXPECT_EQ(r.network.parameters(), ValueTrainer(cfg).policy().parameters());
}

TEST(TrainerTest, LossDecreasesOnShortRun) {
  TrainingConfig cfg = tiny_config();
  cfg.epochs = 300;
  cfg.delta = 1e-9;  // keep M fixed
  const TrainingResult r = train(cfg);
  ASSERT_EQ(r.log.size(), 300u);
  double first = 0, last = 0;
  for (int i = 0; i < 20; ++i) {
    first += r.log[i].loss;
    last += r.log[280 + i].loss;
  }
  EXPECT_LT(last, first);
  for (const auto& row : r.log) EXPECT_EQ(row.M, 5);
}

TEST(TrainerTest, ResumeContinuesEpochAndLength) {
  TrainingConfig cfg = tiny_config();
  ValueTrainer first(cfg);
  for (int i = 0; i < 3; ++i) first.step();
  cfg.epochs = 5;
  ValueTrainer resumed(cfg, first.policy(), first.epoch(), 7);
  EXPECT_EQ(resumed.epoch(), 3);
  EXPECT_EQ(resumed.max_length(), 7);
  EXPECT_EQ(resumed.policy().parameters(), first.policy().parameters());
  resumed.run();
  EXPECT_EQ(resumed.epoch(), 5);
}

TEST(LogTest, RoundTrip) {
  std::stringstream ss;
  write_log_header(ss);
  write_log_row(ss, {1, 0.5, 5, 1.25});
  write_log_row(ss, {2, 0.03125, 6, 2.5});
  const auto rows = read_log(ss);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].epoch, 2);
  EXPECT_EQ(rows[1].loss, 0.03125);
  EXPECT_EQ(rows[1].M, 6);
  std::stringstream bad("epoch,loss\n1,2\n");
  EXPECT_THROW(read_log(bad), ParseError);
}

}  // namespace
}  // namespace fibbraid
