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

#include <filesystem>
#include <fstream>

#include "fibbraid/config.hpp"
#include "fibbraid/errors.hpp"

namespace fibbraid {
namespace {

TEST(KeyValueTest, ParsesCommentsAndWhitespace) {
  const KeyValues kv = parse_key_values("# header\n  epochs = 12  \n\nlr=0.001 # trailing\n");
  EXPECT_EQ(kv.at("epochs"), "12");
  EXPECT_EQ(kv.at("lr"), "0.001");
  EXPECT_THROW(parse_key_values("epochs 12\n"), ParseError);
  EXPECT_THROW(parse_key_values("a = 1\na = 2\n"), ParseError);
}

TEST(TrainConfigTest, FieldsAndErrors) {
  const TrainRunConfig rc = train_run_config(parse_key_values(
      "hidden1 = 32\nhidden2 = 16\nres_width = 16\nn_res_blocks = 1\nepochs = 0\nseed = 5\n"
      "use_batchnorm = false\noutput_dir = out\ncheckpoint_every = 7\ndelta = 0.1\n"));
  EXPECT_EQ(rc.training.network.hidden1, 32);
  EXPECT_FALSE(rc.training.network.use_batchnorm);
  EXPECT_EQ(rc.training.epochs, 0);
  EXPECT_EQ(rc.training.seed, 5u);
  EXPECT_EQ(rc.training.delta, 0.1);
  EXPECT_EQ(rc.output_dir, "out");
  EXPECT_EQ(rc.checkpoint_every, 7);
  EXPECT_FALSE(rc.resume.has_value());
  EXPECT_EQ(rc.training.walk_mode, WalkMode::Uniform);
  EXPECT_EQ(train_run_config(parse_key_values("walk_mode = nonbacktracking\n")).training.walk_mode,
            WalkMode::NonBacktracking);
  EXPECT_THROW(train_run_config(parse_key_values("walk_mode = lazy\n")), ParseError);
  EXPECT_THROW(train_run_config(parse_key_values("bogus = 1\n")), ParseError);
  EXPECT_THROW(train_run_config(parse_key_values("epochs = ten\n")), ParseError);
}

TEST(SearchConfigParseTest, Fields) {
  const SearchConfig c = search_config(parse_key_values("lambda = 0.5\ngamma = 0\nD_max = 7\nepsilon_T = 1e-3\n"));
  EXPECT_EQ(c.lambda, 0.5);
  EXPECT_EQ(c.gamma, 0.0);
  EXPECT_EQ(c.D_max, 7);
  EXPECT_EQ(c.epsilon_T, 1e-3);
  EXPECT_THROW(search_config(parse_key_values("Dmax = 7\n")), ParseError);
}

TEST(TargetParseTest, Forms) {
  EXPECT_EQ(parse_target("H").matrix(), named_gate("H").matrix());
  EXPECT_EQ(parse_target("random:4").matrix(), random_su2(4).matrix());
  const GateSet g = fibonacci_gateset();
  EXPECT_EQ(parse_target("word:s1 s2i").matrix(), word_to_unitary(BraidWord::parse("s1 s2i"), g).matrix());
  const Unitary2 m = parse_target(R"({"matrix": [[[0,0],[1,0]],[[1,0],[0,0]]]})");
  EXPECT_EQ(m.matrix(), named_gate("X").matrix());
  EXPECT_THROW(parse_target("nonsense-target"), ParseError);
  EXPECT_THROW(parse_target(R"({"matrix": [[[1,0],[1,0]],[[0,0],[1,0]]]})"), NonUnitaryInput);
  EXPECT_THROW(parse_target(R"({"matrix": [[1,2]]})"), ParseError);

  const auto path = std::filesystem::temp_directory_path() / "fibbraid_target.json";
  std::ofstream(path) << R"({"matrix": [[[1,0],[0,0]],[[0,0],[-1,0]]]})";
  EXPECT_EQ(parse_target(path.string()).matrix(), named_gate("Z").matrix());
  std::filesystem::remove(path);
}

TEST(TargetParseTest, TwoQubitForms) {
  EXPECT_EQ(parse_target4("CNOT").matrix(), cnot_matrix(0, 1));
  EXPECT_EQ(parse_target4("random:2").matrix(), random_su4(2).matrix());
  EXPECT_THROW(parse_target4("XYZ"), ParseError);
}

}  // namespace
}  // namespace fibbraid
