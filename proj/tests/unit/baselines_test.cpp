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

#include <algorithm>
#include <filesystem>
#include <random>
#include <set>

#include "fibbraid/baselines.hpp"
#include "fibbraid/errors.hpp"
#include "oracle.hpp"

namespace fibbraid {
namespace {

const GateSet& gates() {
  static const GateSet g = fibonacci_gateset();
  return g;
}

BraidWord random_reduced_word(std::mt19937_64& rng, int len) {
  std::uniform_int_distribution<int> tok(0, 3);
  BraidWord w;
  while (static_cast<int>(w.size()) < len) {
    const Action a = Action::from_index(tok(rng));
    if (!w.tokens.empty() && w.tokens.back() == a.inverted()) continue;
    w.tokens.push_back(a);
  }
  return w;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

TEST(BruteForceTest, GeneratorTarget) {
  const CompileReport r = bruteforce_compile(gates().unitary(parse_action("s2")), 4, std::nullopt, gates());
  EXPECT_EQ(r.word.to_string(), "s2");
  EXPECT_LT(r.distance, 1e-12);
}

TEST(BruteForceTest, BraidRelationTarget) {
  const Unitary2 t = word_to_unitary(BraidWord::parse("s1 s2 s1"), gates());
  const CompileReport r = bruteforce_compile(t, 5, std::nullopt, gates());
  EXPECT_EQ(r.length, 3u);
  EXPECT_LT(r.distance, 1e-10);
  EXPECT_LT(unitary_distance(word_to_unitary(r.word, gates()), t), 1e-10);
  EXPECT_LT(unitary_distance(word_to_unitary(BraidWord::parse("s2 s1 s2"), gates()), t), 1e-10);
}

TEST(BruteForceTest, DepthGuard) {
  EXPECT_THROW(bruteforce_compile(Unitary2::identity(), 17, std::nullopt, gates()), DepthGuardExceeded);
}

TEST(BruteForceTest, RecoversGeneratingWords) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const int k = 1 + t % 6;
    const BraidWord w = random_reduced_word(rng, k);
    const CompileReport r = bruteforce_compile(word_to_unitary(w, gates()), 7, std::nullopt, gates());
    EXPECT_LT(r.distance, 1e-10);
    EXPECT_LE(static_cast<int>(r.length), k);
  }
}

TEST(BruteForceTest, PrunedAndUnprunedAgree) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Unitary2 t = random_su2(s);
    const auto a = bruteforce_compile(t, 7, std::nullopt, gates(), Pruning::InverseAdjacent);
    const auto b = bruteforce_compile(t, 7, std::nullopt, gates(), Pruning::None);
    EXPECT_NEAR(a.distance, b.distance, 1e-12);
    EXPECT_EQ(a.length, b.length);
  }
}

// The best distance over the enumeration equals the minimum of the trace
// oracle over every reduced word.
TEST(BruteForceTest, MatchesOracleEnumeration) {
  std::vector<std::vector<std::string>> words;
  for (int len = 0; len <= 6; ++len) oracle::reduced_words(len, words);
  for (std::uint64_t s = 0; s < 3; ++s) {
    const Unitary2 t = random_su2(50 + s);
    double best = 1.0;
    for (const auto& w : words) best = std::min(best, oracle::trace_distance(oracle::word(w), oracle::from(t)));
    EXPECT_NEAR(bruteforce_compile(t, 6, std::nullopt, gates()).distance, best, 1e-7);
  }
}

TEST(BruteForceTest, AccuracyGoalStopsEarly) {
  const Unitary2 t = random_su2(9);
  const CompileReport loose = bruteforce_compile(t, 10, 0.5, gates());
  EXPECT_LT(loose.distance, 0.5);
  EXPECT_EQ(loose.terminated_by, TerminatedBy::Accuracy);
  EXPECT_LE(loose.length, 3u);
}

TEST(BfsTableTest, DistancesAndLevels) {
  const BfsTable t = BfsTable::build(6, gates());
  EXPECT_EQ(bfs_distance(UnitQuaternion(), t), 0);
  EXPECT_EQ(bfs_distance(gates().entry(parse_action("s1")).quaternion, t), 1);

  // Oracle level sizes: distinct projective states first reached at each length.
  std::vector<std::vector<std::string>> words;
  std::vector<oracle::M2> seen;
  std::vector<std::size_t> levels;
  for (int len = 0; len <= 6; ++len) {
    words.clear();
    oracle::reduced_words(len, words);
    std::size_t fresh = 0;
    for (const auto& w : words) {
      const oracle::M2 m = oracle::word(w);
      bool dup = false;
      for (const auto& s : seen)
        if (oracle::trace_distance(s, m) < 1e-7) {
          dup = true;
          break;
        }
      if (!dup) {
        seen.push_back(m);
        ++fresh;
      }
    }
    levels.push_back(fresh);
  }
  EXPECT_EQ(t.level_sizes(), levels);
  EXPECT_EQ(t.size(), seen.size());

  std::size_t n = 0;
  t.for_each([&](const BraidWord& w, const UnitQuaternion& s) {
    ++n;
    EXPECT_LT(quaternion_distance(word_to_quaternion(w, gates()), s), 1e-12);
    EXPECT_EQ(bfs_distance(s, t), static_cast<int>(w.size()));
  });
  EXPECT_EQ(n, t.size());
}

TEST(BfsTableTest, RandomProductsAreCovered) {
  const BfsTable t = BfsTable::build(7, gates());
  std::mt19937_64 rng(8);
  for (int i = 0; i < 50; ++i) {
    const BraidWord w = random_reduced_word(rng, 5);
    const auto d = bfs_distance(word_to_quaternion(w, gates()), t);
    ASSERT_TRUE(d.has_value());
    EXPECT_LE(*d, 5);
    EXPECT_EQ(*d, static_cast<int>(bruteforce_compile(word_to_unitary(w, gates()), 5, 1e-10, gates()).length));
  }
  EXPECT_FALSE(bfs_distance(unitary_to_quaternion(random_su2(1)), t).has_value());
}

TEST(BfsTableTest, SaveLoadRoundTrip) {
  const BfsTable t = BfsTable::build(5, gates());
  const auto path = std::filesystem::temp_directory_path() / "fibbraid_bfs_test.json";
  t.save(path);
  const BfsTable back = BfsTable::load(path, gates());
  EXPECT_EQ(back.size(), t.size());
  EXPECT_EQ(back.max_depth(), 5);
  EXPECT_EQ(back.level_sizes(), t.level_sizes());
  t.for_each([&](const BraidWord& w, const UnitQuaternion& s) { EXPECT_EQ(bfs_distance(s, back), int(w.size())); });
  std::filesystem::remove(path);
}

TEST(BfsCostToGoTest, UncoveredStatesScoreDepthPlusOne) {
  const BfsTable t = BfsTable::build(3, gates());
  const BfsCostToGo h(t);
  const std::vector<UnitQuaternion> s{UnitQuaternion(), unitary_to_quaternion(random_su2(4))};
  EXPECT_EQ(h.evaluate(s), (std::vector<double>{0.0, 4.0}));
}

TEST(SkTest, BaseNetInvariants) {
  const SkBaseNet base = sk_build_base(6, gates());
  EXPECT_GT(base.size(), 0u);
  EXPECT_EQ(base.lengths[0], 0);  // identity
  std::set<std::string> words;
  for (std::size_t i = 0; i < base.size(); ++i) words.insert(base.word(i).to_string());
  for (std::size_t i = 0; i < base.size(); ++i) {
    // Closed under inversion up to the state: the inverse state is present.
    const UnitQuaternion inv = word_to_quaternion(invert_word(base.word(i)), gates());
    EXPECT_LT(quaternion_distance(Quat(base.states[base.nearest(inv.raw())]), inv.raw()), 1e-9);
  }
  EXPECT_GT(base.covering_radius, 0.0);
  EXPECT_LT(base.covering_radius, 1.0);
}

TEST(SkTest, LevelZeroReturnsBaseWord) {
  const SkBaseNet base = sk_build_base(6, gates());
  const BraidWord w = BraidWord::parse("s1 s2 s2 s1i");
  const CompileReport r = sk_compile(word_to_unitary(w, gates()), 0, base, gates());
  EXPECT_LT(r.distance, 1e-9);
  EXPECT_LE(r.length, w.size());
}

TEST(GroupCommutatorTest, Identity) {
  const GroupCommutator gc = gc_decompose(Unitary2::identity());
  EXPECT_LT(unitary_distance(gc.V, Unitary2::identity()), 1e-12);
  EXPECT_LT(unitary_distance(gc.W, Unitary2::identity()), 1e-12);
}

TEST(GroupCommutatorTest, RecompositionAndBalance) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0, 1);
  for (double angle : {0.1, 1e-3, 0.5, 1.0, 2.0, 3.0}) {
    for (int t = 0; t < 20; ++t) {
      const Unitary2 u = axis_rotation({n(rng), n(rng), n(rng)}, angle);
      EXPECT_NEAR(rotation_angle(u), angle, 1e-9);
      const GroupCommutator gc = gc_decompose(u);
      const Unitary2 rec = gc.V * gc.W * gc.V.adjoint() * gc.W.adjoint();
      EXPECT_LT(unitary_distance(rec, u), 1e-8);
      EXPECT_NEAR(rotation_angle(gc.V), rotation_angle(gc.W), 1e-8);
    }
  }
}

TEST(SkTest, AccuracyImprovesWithLevel) {
  const SkBaseNet base = sk_build_base(10, gates());
  std::array<std::vector<double>, 3> dist;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Unitary2 t = random_su2(900 + s);
    for (int level = 0; level < 3; ++level) {
      const CompileReport r = sk_compile(t, level, base, gates());
      EXPECT_NEAR(quaternion_distance(word_to_quaternion(r.word, gates()), unitary_to_quaternion(t)), r.distance,
                  1e-10);
      dist[level].push_back(r.distance);
    }
  }
  EXPECT_LT(median(dist[1]), median(dist[0]));
  EXPECT_LT(median(dist[2]), median(dist[1]));
}

}  // namespace
}  // namespace fibbraid
