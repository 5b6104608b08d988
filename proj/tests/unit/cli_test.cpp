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
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>

#include "fibbraid/checkpoint.hpp"
#include "fibbraid/trainer.hpp"

namespace fibbraid {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
};

std::vector<TrainingLogRow> log_rows(const fs::path& p) {
  std::ifstream in(p);
  return read_log(in);
}

CliRun fibc(const std::string& args) {
  const std::string cmd = std::string(FIBC_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / "fibbraid_cli";
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    std::ofstream(dir_ / "tiny.cfg") << "hidden1 = 16\nhidden2 = 8\nres_width = 8\nn_res_blocks = 1\n"
                                        "batch_size = 32\npool_walks = 16\nepochs = 0\n"
                                     << "output_dir = " << (dir_ / "run").string() << "\n";
    ASSERT_EQ(fibc("train " + (dir_ / "tiny.cfg").string()).code, 0);
    ckpt_ = (dir_ / "run" / "latest.json").string();
  }
  static inline fs::path dir_;
  static inline std::string ckpt_;
};

TEST_F(CliTest, ZeroEpochTrainingWritesLoadableCheckpoint) {
  EXPECT_NO_THROW(load_checkpoint(ckpt_));
}

TEST_F(CliTest, MissingConfigIsInputError) {
  EXPECT_EQ(fibc("train " + (dir_ / "absent.cfg").string()).code, 2);
  std::ofstream(dir_ / "bad.cfg") << "no_such_key = 1\n";
  EXPECT_EQ(fibc("train " + (dir_ / "bad.cfg").string()).code, 2);
}

TEST_F(CliTest, UnknownSubcommandIsInputError) {
  EXPECT_EQ(fibc("frobnicate").code, 2);
}

TEST_F(CliTest, CompileIdentityGivesEmptyWord) {
  const CliRun r = fibc("compile --target I --checkpoint " + ckpt_);
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["word"], "");
  EXPECT_EQ(j["length"], 0);
}

TEST_F(CliTest, CompileErrors) {
  EXPECT_EQ(fibc("compile --target not-a-gate --checkpoint " + ckpt_).code, 2);
  EXPECT_EQ(fibc("compile --target H --checkpoint " + (dir_ / "missing.json").string()).code, 2);
  EXPECT_EQ(fibc("compile --target '{\"matrix\": [[[1,0],[1,0]],[[0,0],[1,0]]]}' --checkpoint " + ckpt_).code, 2);
}

TEST_F(CliTest, CompileIsDeterministic) {
  const std::string args = "compile --target random --seed 11 --dmax 5 --checkpoint " + ckpt_;
  auto a = nlohmann::json::parse(fibc(args).out);
  auto b = nlohmann::json::parse(fibc(args).out);
  a.erase("wall_time_s");
  b.erase("wall_time_s");
  EXPECT_EQ(a, b);
}

TEST_F(CliTest, Compile2CnotExactSlotsWithFixture) {
  const std::string fx = std::string(FIBBRAID_SOURCE_DIR) + "/fixtures/cix_synthetic.json";
  const CliRun r = fibc("compile2 --target CNOT --exact-slots --fixture " + fx + " --checkpoint " + ckpt_);
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_LT(j["error"].get<double>(), 1e-8);
  EXPECT_EQ(j["total_length"], 3 * 140);
}

TEST_F(CliTest, Compile2RejectsBadFixture) {
  std::ofstream(dir_ / "fx.json") << "{\"word\": []}";
  EXPECT_EQ(fibc("compile2 --target CNOT --fixture " + (dir_ / "fx.json").string() + " --checkpoint " + ckpt_).code,
            2);
}

TEST_F(CliTest, BenchScalingWritesCsvAndSamples) {
  const std::string out = (dir_ / "s.csv").string();
  ASSERT_EQ(fibc("bench scaling --n 2 --eps 0.2 --dmax 5 --threads 1 --out " + out + " --checkpoint " + ckpt_).code,
            0);
  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "epsilon_T,eps_bar,L_bar,D_bar,t_bar,R,L_p25,L_p75,n");
  EXPECT_TRUE(fs::exists(out + ".samples"));
  EXPECT_TRUE(fs::exists(out + ".meta.json"));
  EXPECT_EQ(fibc("bench nope --checkpoint " + ckpt_).code, 2);
  EXPECT_EQ(fibc("bench scaling --checkpoint " + (dir_ / "missing.json").string()).code, 2);
}

TEST_F(CliTest, ResumeContinuesFromCheckpoint) {
  const fs::path run = dir_ / "resume";
  std::ofstream(dir_ / "r1.cfg") << "hidden1 = 16\nhidden2 = 8\nres_width = 8\nn_res_blocks = 1\n"
                                    "batch_size = 16\npool_walks = 8\nepochs = 4\ncheckpoint_every = 2\n"
                                 << "output_dir = " << run.string() << "\n";
  ASSERT_EQ(fibc("train " + (dir_ / "r1.cfg").string()).code, 0);
  const auto full = log_rows(run / "log.csv");
  ASSERT_EQ(full.size(), 4u);

  std::ofstream(dir_ / "r2.cfg") << "hidden1 = 16\nhidden2 = 8\nres_width = 8\nn_res_blocks = 1\n"
                                    "batch_size = 16\npool_walks = 8\nepochs = 6\ncheckpoint_every = 2\n"
                                 << "output_dir = " << run.string() << "\n"
                                 << "resume = " << (run / "ckpt_000002.json").string() << "\n";
  ASSERT_EQ(fibc("train " + (dir_ / "r2.cfg").string()).code, 0);
  const auto resumed = log_rows(run / "log.csv");
  ASSERT_EQ(resumed.size(), 6u);
  EXPECT_EQ(resumed[0].loss, full[0].loss);
  EXPECT_EQ(resumed[1].loss, full[1].loss);
  EXPECT_EQ(resumed.back().epoch, 6);
  EXPECT_TRUE(fs::exists(run / "ckpt_000006.json"));
}

}  // namespace
}  // namespace fibbraid
