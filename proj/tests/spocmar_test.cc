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

#include <cmath>
#include <cstdint>
#include <vector>

#include "gtest/gtest.h"
#include "mel/core/dp.h"
#include "mel/core/equilibrium.h"
#include "mel/core/errors.h"
#include "mel/core/generators.h"
#include "mel/core/rng.h"
#include "mel/spocmar/learner.h"
#include "mel/spocmar/params.h"
#include "mel/spocmar/shared_randomness.h"
#include "oracles.h"

namespace mel {
namespace {

FiniteHorizonGame SmallFinite(uint64_t seed, int S = 3, int H = 2,
                              std::vector<int> actions = {2, 2}) {
  Rng rng(seed);
  return RandomFiniteGame(GameFamily::kUniform, S, actions, H, rng);
}

// Two players, two states, one step; each player earns 1 for action 0
// regardless of the other, so action 0 is dominant.
FiniteHorizonGame DominantGame() {
  FiniteHorizonGame game(2, {2, 2}, 1);
  const JointActionSpace& space = game.joint_space();
  for (int s = 0; s < 2; ++s) {
    for (int a = 0; a < space.size(); ++a) {
      game.set_transition(0, s, a, {{0, 0.5}, {1, 0.5}});
      for (int i = 0; i < 2; ++i) {
        game.set_reward(i, 0, s, a, space.ActionOf(a, i) == 0 ? 1.0 : 0.0);
      }
    }
  }
  return game;
}

LearnerParams FastParams(const FiniteHorizonGame& game, double c_j,
                         double c_n) {
  int max_actions = 1;
  for (int n : game.action_counts()) max_actions = std::max(max_actions, n);
  return DefaultParams(game.num_players(), game.num_states(), game.horizon(),
                       max_actions, 0.5, 0.1, c_j, c_n);
}

TEST(ParamsTest, ClosedForms) {
  const int S = 3, H = 2, A = 3;
  const double eps = 0.1, delta = 0.05, c_j = 2.0, c_n = 0.5;
  const LearnerParams p = DefaultParams(2, S, H, A, eps, delta, c_j, c_n);
  const double iota = std::log(S * H * A / (eps * delta));
  EXPECT_DOUBLE_EQ(p.iota, iota);
  EXPECT_DOUBLE_EQ(p.p, eps / (16.0 * S * H * H));
  EXPECT_DOUBLE_EQ(p.j, c_j * std::pow(H, 6) * iota * iota * A / (eps * eps));
  EXPECT_DOUBLE_EQ(p.k, 8.0 * p.j / p.p);
  EXPECT_DOUBLE_EQ(p.eps_val, eps / (4.0 * H));
  EXPECT_DOUBLE_EQ(p.eps_reg, eps / (8.0 * H));
  EXPECT_DOUBLE_EQ(p.eps_tvd, p.p / 2.0);
  EXPECT_DOUBLE_EQ(p.n_visit, c_n * S * iota / (p.eps_tvd * p.eps_tvd));
  EXPECT_EQ(p.max_stages, S * H);
  EXPECT_EQ(p.EpisodesPerPolicy(), static_cast<int64_t>(std::ceil(p.k)));
  EXPECT_GE(static_cast<double>(p.VisitSamples()), p.n_visit * (1 - 1e-12));
}

TEST(ParamsTest, RejectsBadInputs) {
  EXPECT_THROW(DefaultParams(0, 1, 1, 1, 0.1, 0.1), InputError);
  EXPECT_THROW(DefaultParams(1, 1, 1, 1, 0.0, 0.1), InputError);
  EXPECT_THROW(DefaultParams(1, 1, 1, 1, 0.1, 1.0), InputError);
  EXPECT_THROW(DefaultParams(1, 1, 1, 1, 0.1, 0.1, -1.0), InputError);
  EXPECT_THROW(DefaultParams(1, 1, 1, 1, 0.1, 0.1, 1.0, 0.0), InputError);
  LearnerParams p = DefaultParams(1, 1, 1, 1, 0.1, 0.1);
  p.max_stages = 0;
  EXPECT_THROW(ValidateParams(p), InputError);
}

TEST(SharedReaderTest, SameStreamSameSequence) {
  SharedReader a(SharedRandomness(77));
  SharedReader b(SharedRandomness(77));
  for (int k = 0; k < 500; ++k) {
    const int n = 1 + k % 9;
    EXPECT_EQ(a.UniformIndex(n), b.UniformIndex(n));
  }
  EXPECT_EQ(a.bits_consumed(), b.bits_consumed());
}

TEST(SharedReaderTest, SingletonConsumesNoBits) {
  SharedReader r(SharedRandomness(1));
  for (int k = 0; k < 10; ++k) EXPECT_EQ(r.UniformIndex(1), 0);
  EXPECT_EQ(r.bits_consumed(), 0);
  EXPECT_THROW(r.UniformIndex(0), InputError);
}

TEST(SharedReaderTest, UniformIndexIsUniform) {
  for (int n : {2, 3, 5, 6, 7}) {
    SharedReader r(SharedRandomness(1000 + n));
    const int draws = 60000;
    std::vector<int> counts(n, 0);
    for (int k = 0; k < draws; ++k) ++counts[r.UniformIndex(n)];
    const double expected = static_cast<double>(draws) / n;
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
    // 99.99th percentile of chi-square with at most 6 degrees of freedom.
    EXPECT_LT(chi2, 27.9) << "n = " << n;
    const double bits_per_draw = static_cast<double>(r.bits_consumed()) / draws;
    EXPECT_LE(bits_per_draw, std::log2(n) + 2.0) << "n = " << n;
  }
}

TEST(LossTest, BanditLossAndClamp) {
  EXPECT_DOUBLE_EQ(BanditLoss(4, 1, false, 0.7, 2.0), 0.25);
  EXPECT_DOUBLE_EQ(BanditLoss(4, 1, true, 0.5, 1.5), (4 - 0.5 - 1.5) / 4.0);
  int64_t clamped = 0;
  EXPECT_DOUBLE_EQ(ClampLoss(0.3, &clamped), 0.3);
  EXPECT_EQ(clamped, 0);
  EXPECT_DOUBLE_EQ(ClampLoss(1.2, &clamped), 1.0);
  EXPECT_DOUBLE_EQ(ClampLoss(-0.1, &clamped), 0.0);
  EXPECT_EQ(clamped, 2);
}

TEST(LossTest, VbarEntry) {
  const std::vector<double> targets = {1.0, 2.0, 0.0};
  EXPECT_DOUBLE_EQ(VbarEntry(3, 0, true, targets), 1.0);
  EXPECT_DOUBLE_EQ(VbarEntry(3, 1, false, targets), 2.0);
  EXPECT_DOUBLE_EQ(VbarEntry(3, 2, true, {}), 1.0);
  const std::vector<double> too_big = {5.0};
  EXPECT_THROW(VbarEntry(3, 1, true, too_big), SolverError);
}

TEST(RestrictTest, HidesOtherPlayers) {
  const JointActionSpace space({2, 3});
  Trajectory t;
  t.states = {0, 2};
  t.actions = {space.Encode(std::vector<int>{1, 2}),
               space.Encode(std::vector<int>{0, 1})};
  t.rewards = {{0.1, 0.2}, {0.3, 0.4}};
  const AgentObservation o0 = Restrict(t, space, 0);
  const AgentObservation o1 = Restrict(t, space, 1);
  EXPECT_EQ(o0.states, t.states);
  EXPECT_EQ(o0.actions, (std::vector<int>{1, 0}));
  EXPECT_EQ(o1.actions, (std::vector<int>{2, 1}));
  EXPECT_EQ(o0.rewards, (std::vector<double>{0.1, 0.3}));
  EXPECT_EQ(o1.rewards, (std::vector<double>{0.2, 0.4}));
}

TEST(EstVisitTest, MatchesExactVisitation) {
  const FiniteHorizonGame game = SmallFinite(5, 3, 3);
  Rng policy_rng(9);
  const NonstationaryJointPolicy policy = RandomNonstationaryPolicy(
      game.joint_space(), game.horizon(), game.num_states(), policy_rng);
  const auto exact = oracle::ForwardVisitation(game, policy);
  GameOracle env(game, 11);
  Rng rng(12);
  const int64_t n = 200000;
  const auto est = EstVisit(env, policy, n, rng);
  EXPECT_EQ(env.episodes(), n);
  for (int h = 0; h < game.horizon(); ++h) {
    double l1 = 0.0;
    for (int s = 0; s < game.num_states(); ++s) {
      l1 += std::abs(est[h][s] - exact[h][s]);
    }
    EXPECT_LT(l1, 0.02) << "h = " << h;
  }
}

TEST(AgentViewTest, DesynchronizedReadersAreDetected) {
  const FiniteHorizonGame game = SmallFinite(1);
  const LearnerParams params = FastParams(game, 1e-6, 1e-4);
  const SharedRandomness shared(3);
  std::vector<AgentView> agents;
  for (int i = 0; i < 2; ++i) {
    agents.emplace_back(i, game.joint_space(), game.num_states(),
                        game.horizon(), params, 10 + i, shared);
  }
  EXPECT_NO_THROW(CheckSynchronized(agents));
  agents[1].mutable_reader().Skip(1);
  EXPECT_THROW(CheckSynchronized(agents), SolverError);
}

TEST(AgentViewTest, StagesMustBeConsecutive) {
  const FiniteHorizonGame game = SmallFinite(1);
  const LearnerParams params = FastParams(game, 1e-6, 1e-4);
  AgentView agent(0, game.joint_space(), game.num_states(), game.horizon(),
                  params, 1, SharedRandomness(2));
  EXPECT_THROW(agent.BeginStage(1), UsageError);
  agent.BeginStage(0);
  EXPECT_EQ(agent.num_stages(), 1);
}

TEST(SpocmarTest, DeterministicForFixedSeed) {
  const FiniteHorizonGame game = SmallFinite(21);
  const LearnerParams params = FastParams(game, 1e-6, 1e-4);
  const SpocmarResult a = RunSpocmar(game, params, 5);
  const SpocmarResult b = RunSpocmar(game, params, 5);
  ASSERT_EQ(a.stages.size(), b.stages.size());
  EXPECT_EQ(a.episodes, b.episodes);
  for (int h = 0; h < game.horizon(); ++h) {
    for (int s = 0; s < game.num_states(); ++s) {
      EXPECT_EQ(a.policy.Distribution(h, s, game.num_joint_actions()),
                b.policy.Distribution(h, s, game.num_joint_actions()));
    }
  }
}

TEST(SpocmarTest, RunInvariants) {
  for (uint64_t seed = 0; seed < 4; ++seed) {
    const FiniteHorizonGame game = SmallFinite(100 + seed);
    const LearnerParams params = FastParams(game, 1e-6, 1e-4);
    const SpocmarResult r = RunSpocmar(game, params, seed);
    const int S = game.num_states(), H = game.horizon();
    EXPECT_LE(static_cast<int>(r.stages.size()), S * H);
    EXPECT_TRUE(ValidatePolicy(r.policy, game.joint_space(), H, S).empty());
    // V grows by the pairs each stage adds; the last stage of a terminated
    // run adds none.
    int size = 0;
    for (const StageRecord& st : r.stages) {
      size += static_cast<int>(st.added.size());
      EXPECT_EQ(st.visited_size, size);
      for (const auto& [h, s] : st.added) {
        EXPECT_GE(st.visitation[h][s], params.p);
      }
    }
    if (r.terminated) {
      EXPECT_TRUE(r.stages.back().added.empty());
    }
    for (int i = 0; i < game.num_players(); ++i) {
      for (int h = 0; h < H; ++h) {
        for (int s = 0; s < S; ++s) {
          EXPECT_LE(std::abs(r.vbar(i, h, s)), H - h + 1e-9);
        }
      }
    }
  }
}

TEST(SpocmarTest, DecentralizedPolicyMatchesJointRecords) {
  const FiniteHorizonGame game = SmallFinite(33);
  const LearnerParams params = FastParams(game, 1e-6, 1e-4);
  GameOracle env(game, 1);
  const DecentralizedResult run = DecentralizedRun(env, params, 8);
  const JointActionSpace& space = game.joint_space();
  const std::vector<std::vector<int>> joint =
      JointRecords(space, run.fragments);
  const NonstationaryJointPolicy rebuilt =
      NonstationaryJointPolicy::FromRecords(space, game.horizon(),
                                            game.num_states(), joint);
  for (int h = 0; h < game.horizon(); ++h) {
    for (int s = 0; s < game.num_states(); ++s) {
      const auto x = rebuilt.Distribution(h, s, space.size());
      const auto y = run.summary.policy.Distribution(h, s, space.size());
      for (int a = 0; a < space.size(); ++a) EXPECT_NEAR(x[a], y[a], 1e-12);
    }
  }

  // Each agent indexing its own records with the shared stream reproduces
  // the centralized draw from the joint records.
  const SharedRandomness shared(99);
  JointSampler sampler(space, run.fragments, shared);
  SharedReader central(shared);
  for (int k = 0; k < 300; ++k) {
    const int h = k % game.horizon();
    const int s = (k / game.horizon()) % game.num_states();
    const int decentralized = sampler.Sample(h, s);
    const int centralized = SampleCentralized(
        space, joint[static_cast<size_t>(h) * game.num_states() + s], central);
    EXPECT_EQ(decentralized, centralized);
  }
  for (const SharedReader& r : sampler.readers()) {
    EXPECT_EQ(r.bits_consumed(), central.bits_consumed());
  }
}

TEST(SpocmarTest, BudgetBelowFirstStageIsUsageError) {
  const FiniteHorizonGame game = SmallFinite(2);
  LearnerParams params = FastParams(game, 1e-6, 1e-4);
  params.episode_budget = 10;
  EXPECT_THROW(RunSpocmar(game, params, 0), UsageError);
}

TEST(SpocmarTest, LearnsDominantActions) {
  const FiniteHorizonGame game = DominantGame();
  const LearnerParams params = FastParams(game, 0.05, 1e-2);
  const SpocmarResult r = RunSpocmar(game, params, 3);
  const std::vector<double> gaps =
      EquilibriumGaps(game, r.policy, GapMode::kCceAtMu);
  for (double g : gaps) EXPECT_LT(g, 0.1);
}

}  // namespace
}  // namespace mel
