// Copyright 2026 The MEL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "mel/core/equilibrium.h"
#include "mel/core/game.h"
#include "mel/core/generators.h"
#include "mel/core/io.h"
#include "mel/core/policy.h"
#include "mel/core/rng.h"
#include "mel/gcircuit/circuit.h"
#include "mel/gcircuit/io.h"

#ifndef MEL_CLI_PATH
#error "MEL_CLI_PATH must name the mel binary"
#endif

namespace mel {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           ("mel_cli_" + std::to_string(getpid()) + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const {
    return (dir_ / name).string();
  }

  // Exit status of the binary with `args`; output is discarded.
  int Run(const std::string& args) const {
    const std::string cmd =
        std::string(MEL_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static std::string Slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

TEST_F(CliTest, GenIsDeterministicAndValid) {
  const std::string args =
      "gen --family uniform --states 3 --players 2 --actions 2 --horizon 3 "
      "--seed 7 --out ";
  ASSERT_EQ(Run(args + Path("a.json")), 0);
  ASSERT_EQ(Run(args + Path("b.json")), 0);
  EXPECT_EQ(Slurp(Path("a.json")), Slurp(Path("b.json")));
  const LoadedGame loaded = GameFromJson(ReadJsonFile(Path("a.json")));
  ASSERT_TRUE(loaded.finite());
  const FiniteHorizonGame& g = loaded.finite_game();
  EXPECT_EQ(g.num_states(), 3);
  EXPECT_EQ(g.horizon(), 3);
  EXPECT_EQ(g.num_joint_actions(), 4);
  EXPECT_TRUE(ValidateGame(g).empty());
}

TEST_F(CliTest, GenTurnBasedHasValidAnnotation) {
  ASSERT_EQ(Run("gen --family turn-based --states 4 --players 2 --actions 2 "
                "--gamma 0.9 --seed 3 --out " +
                Path("t.json")),
            0);
  const LoadedGame loaded = GameFromJson(ReadJsonFile(Path("t.json")));
  ASSERT_FALSE(loaded.finite());
  ASSERT_TRUE(loaded.annotation.has_value());
  EXPECT_TRUE(
      CheckTurnBased(loaded.discounted_game(), *loaded.annotation).empty());
}

TEST_F(CliTest, LearnIsReproducible) {
  ASSERT_EQ(Run("gen --family uniform --states 2 --players 2 --actions 2 "
                "--horizon 2 --seed 1 --out " +
                Path("g.json")),
            0);
  const std::string learn = "learn --game " + Path("g.json") +
                            " --seed 5 --epsilon 0.5 --cj 1e-6 --cn 1e-4 ";
  ASSERT_EQ(Run(learn + "--policy-out " + Path("p1.json") + " --metrics-out " +
                Path("m1.json")),
            0);
  ASSERT_EQ(Run(learn + "--policy-out " + Path("p2.json") + " --metrics-out " +
                Path("m2.json")),
            0);
  EXPECT_EQ(Slurp(Path("p1.json")), Slurp(Path("p2.json")));
  const nlohmann::json metrics = ReadJsonFile(Path("m1.json"));
  EXPECT_LE(metrics["stages"].get<int>(), 2 * 2);
  EXPECT_GT(metrics["episodes"].get<int64_t>(), 0);
}

TEST_F(CliTest, MissingGameIsInputError) {
  EXPECT_EQ(Run("learn --game " + Path("nope.json") + " --policy-out " +
                Path("p.json")),
            2);
  EXPECT_EQ(Run("verify --game " + Path("nope.json") + " --policy " +
                Path("p.json")),
            2);
  EXPECT_EQ(Run("frobnicate"), 2);
}

TEST_F(CliTest, VerifyExitCodes) {
  Rng rng(11);
  const FiniteHorizonGame game =
      RandomFiniteGame(GameFamily::kUniform, 3, {2, 2}, 2, rng);
  WriteJsonFile(Path("g.json"), GameToJson(game));
  const NonstationaryJointPolicy cce = BackwardInductionCce(game, 1e-6);
  WriteJsonFile(Path("cce.json"), PolicyToJson(cce, game.joint_space()));
  EXPECT_EQ(Run("verify --game " + Path("g.json") + " --policy " +
                Path("cce.json") + " --tolerance 1e-6 --out " +
                Path("r.json")),
            0);

  // Both players earn 1 exactly when they play action 1, so the profile
  // (0, 0) is dominated.
  FiniteHorizonGame bad(1, {2, 2}, 1);
  for (int a = 0; a < 4; ++a) {
    bad.set_transition(0, 0, a, {{0, 1.0}});
    for (int i = 0; i < 2; ++i) {
      bad.set_reward(i, 0, 0, a,
                     bad.joint_space().ActionOf(a, i) == 1 ? 1.0 : 0.0);
    }
  }
  WriteJsonFile(Path("bad.json"), GameToJson(bad));
  NonstationaryJointPolicy pure(1, 1);
  pure.set_cell(0, 0, {{0, 1.0}});
  WriteJsonFile(Path("pure.json"), PolicyToJson(pure, bad.joint_space()));
  EXPECT_EQ(Run("verify --game " + Path("bad.json") + " --policy " +
                Path("pure.json") + " --out " + Path("r2.json")),
            1);
  const nlohmann::json report = ReadJsonFile(Path("r2.json"));
  EXPECT_NEAR(report["max_gap"].get<double>(), 1.0, 1e-12);

  // A nonstationary policy has no perfect gap in a discounted game.
  ASSERT_EQ(Run("gen --family uniform --states 1 --players 2 --actions 2 "
                "--gamma 0.5 --seed 1 --out " +
                Path("d.json")),
            0);
  EXPECT_EQ(Run("verify --game " + Path("d.json") + " --policy " +
                Path("pure.json") + " --mode perfect"),
            2);
}

TEST_F(CliTest, CircuitCommands) {
  GeneralizedCircuit c;
  const int a = c.AddNode("a");
  const int b = c.AddNode("b");
  c.Assign(1, a);
  c.AddGate({GateKind::kEq, {}, {a}, b});
  WriteJsonFile(Path("c.json"), CircuitToJson(c));
  ASSERT_EQ(Run("compile-circuit --in " + Path("c.json") +
                " --epsilon 0.0625 --out " + Path("g.json")),
            0);
  const nlohmann::json doc = ReadJsonFile(Path("g.json"));
  EXPECT_TRUE(doc.contains("meta"));
  const LoadedGame loaded = GameFromJson(doc);
  ASSERT_TRUE(loaded.annotation.has_value());
  EXPECT_TRUE(
      CheckTurnBased(loaded.discounted_game(), *loaded.annotation).empty());

  WriteJsonFile(Path("good.json"), {{"a", 1.0}, {"b", 0.97}});
  WriteJsonFile(Path("bad.json"), {{"a", 1.0}, {"b", 0.5}});
  EXPECT_EQ(Run("check-circuit --circuit " + Path("c.json") +
                " --assignment " + Path("good.json") + " --epsilon 0.05"),
            0);
  EXPECT_EQ(Run("check-circuit --circuit " + Path("c.json") +
                " --assignment " + Path("bad.json") + " --epsilon 0.05"),
            1);
}

TEST_F(CliTest, BenchWritesFixedHeader) {
  WriteJsonFile(Path("suite.json"), {{"games", 1},
                                     {"seeds", 1},
                                     {"epsilon", 0.5},
                                     {"c_j", {1e-6}},
                                     {"c_n", 1e-4}});
  ASSERT_EQ(Run("bench --suite " + Path("suite.json") + " --threads 2 --out " +
                Path("b.csv")),
            0);
  const std::string csv = Slurp(Path("b.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "game-id,seed,episodes,exact-gap");
  ASSERT_EQ(Run("bench --suite " + Path("suite.json") + " --threads 1 --out " +
                Path("c.csv")),
            0);
  EXPECT_EQ(csv, Slurp(Path("c.csv")));
}

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
  const std::string cmd = "MEL_OUTPUT_DIR=" + Path("env") + " " +
                          std::string(MEL_CLI_PATH) +
                          " gen --states 2 --players 2 --actions 2 "
                          "--horizon 1 --seed 1 --out x.json > /dev/null 2>&1";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(fs::exists(Path("env/x.json")));
}

}  // namespace
}  // namespace mel
