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

#ifndef MEL_SPOCMAR_LEARNER_H_
#define MEL_SPOCMAR_LEARNER_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mel/bandit/exp3ix.h"
#include "mel/core/dp.h"
#include "mel/core/game.h"
#include "mel/core/policy.h"
#include "mel/core/rng.h"
#include "mel/core/simulate.h"
#include "mel/core/transforms.h"
#include "mel/spocmar/params.h"
#include "mel/spocmar/shared_randomness.h"

namespace mel {

// Sampling-only access to a finite-horizon game. The learner sees the sizes
// and sampled trajectories, never the tables.
class GameOracle {
 public:
  // `game` must outlive the oracle. Transitions draw from a private stream.
  GameOracle(const FiniteHorizonGame& game, uint64_t seed);

  int num_players() const { return game_.num_players(); }
  int num_states() const { return game_.num_states(); }
  int horizon() const { return game_.horizon(); }
  const JointActionSpace& joint_space() const { return game_.joint_space(); }

  // Runs one episode; `choose(h, s)` returns the flat joint action.
  Trajectory Run(const std::function<int(int h, int s)>& choose);

  int64_t episodes() const { return episodes_; }

 private:
  const FiniteHorizonGame& game_;
  Rng rng_;
  int64_t episodes_ = 0;
};

// Empirical state distributions d_hat[h][s] over n episodes.
std::vector<std::vector<double>> EstVisit(
    GameOracle& oracle, const std::function<int(int h, int s)>& choose,
    int64_t n);
std::vector<std::vector<double>> EstVisit(
    GameOracle& oracle, const NonstationaryJointPolicy& policy, int64_t n,
    Rng& rng);

// Episode policy pi-bar: follow `cover_stage` (or uniform play when it is
// negative) before `bandit_step`, query the bandits at `bandit_step`, play
// uniformly afterwards. A negative `bandit_step` follows the cover stage at
// every step.
struct EpisodePlan {
  int bandit_step = -1;
  int cover_stage = -1;
};
EpisodePlan ComposeBarPolicy(int cover_stage, int h);
EpisodePlan FollowStage(int stage);

// Raw bandit loss at 0-based step h: (H - r - next_vbar) / H when (h, s) is
// well visited, else h / H. The raw value may leave [0, 1].
double BanditLoss(int horizon, int h, bool visited, double reward,
                  double next_vbar);
// Clamps into [0, 1], counting every clamp in *clamp_count.
double ClampLoss(double loss, int64_t* clamp_count);

// V_bar_{i,h}(s) at 0-based step h: the mean of `targets` (each r + V_bar
// at the successor) when (h, s) is well visited and was sampled, else
// H - h. Throws SolverError when the result leaves [-(H - h), H - h].
double VbarEntry(int horizon, int h, bool visited,
                 std::span<const double> targets);

// One agent's restricted view of a trajectory.
struct AgentObservation {
  std::vector<int> states;
  std::vector<int> actions;
  std::vector<double> rewards;
};
AgentObservation Restrict(const Trajectory& trajectory,
                          const JointActionSpace& space, int player);

// A single agent of the decentralized learner. It holds its own action
// records per stage, bandits, value estimates, private randomness and a
// reader of the public random string. It never sees other players' actions
// or rewards.
class AgentView {
 public:
  AgentView(int player, const JointActionSpace& space, int num_states,
            int horizon, const LearnerParams& params, uint64_t private_seed,
            SharedRandomness shared);

  int player() const { return player_; }

  // Opens storage for the records of a new stage.
  void BeginStage(int stage);
  // Fresh bandits for step h at every state, each with horizon T0.
  void BeginStep(int h, int64_t bandit_horizon);

  // Own action at (h, s) under the plan.
  int Act(const EpisodePlan& plan, int h, int s);

  // Bandit update and record keeping after an episode of the step-h loop.
  void ObserveEpisode(const AgentObservation& observation, int h,
                      const VisitedSet& visited);
  // Computes V_bar_{i,h} from the episodes of the step-h loop.
  void FinishStep(int h, const VisitedSet& visited);

  double vbar(int h, int s) const {
    return vbar_[static_cast<size_t>(h) * num_states_ + s];
  }
  // Own actions recorded at (h, s) during `stage`, in episode order.
  const std::vector<int>& records(int stage, int h, int s) const {
    return records_[stage][static_cast<size_t>(h) * num_states_ + s];
  }
  int num_stages() const { return static_cast<int>(records_.size()); }
  const std::vector<Exp3Ix>& bandits() const { return bandits_; }
  int64_t clamped_losses() const { return clamped_; }
  int64_t mixture_steps() const { return mixture_steps_; }
  const SharedReader& reader() const { return reader_; }
  SharedReader& mutable_reader() { return reader_; }

 private:
  int FollowStageAction(int stage, int h, int s);

  int player_;
  JointActionSpace space_;
  int num_states_;
  int horizon_;
  double delta_;
  Rng rng_;
  SharedReader reader_;
  std::vector<Exp3Ix> bandits_;
  std::vector<double> vbar_;  // (H + 1) x S, row H is zero.
  std::vector<std::vector<std::vector<int>>> records_;  // [stage][h * S + s]
  std::vector<std::vector<double>> targets_;            // [s], current step
  int64_t clamped_ = 0;
  int64_t mixture_steps_ = 0;
};

// Throws SolverError unless all readers consumed the same number of bits.
void CheckSynchronized(const std::vector<AgentView>& agents);

struct StageRecord {
  int stage = 0;
  std::vector<std::vector<double>> visitation;  // d_hat[h][s]
  std::vector<std::pair<int, int>> added;       // pairs entering V
  int visited_size = 0;                         // |V| after the stage
  int64_t episodes = 0;                         // learning plus EstVisit
  int64_t clamped_losses = 0;                   // summed over agents
  int64_t shared_bits = 0;                      // per agent, this stage
  int64_t mixture_steps = 0;                    // per agent, this stage
  // pi-tilde of the stage, assembled from the agents' records after the
  // fact for diagnostics. The learner itself never forms it.
  NonstationaryJointPolicy policy;
};

struct SpocmarResult {
  NonstationaryJointPolicy policy;  // pi-hat
  int output_stage = -1;
  VisitedSet visited;
  std::vector<int> cover;  // cover stage per h * S + s, -1 when unset
  std::vector<StageRecord> stages;
  int64_t episodes = 0;
  int64_t clamped_losses = 0;
  // False when the stage cap or the episode budget ended the run before
  // the termination test passed.
  bool terminated = false;
  std::string diagnostic;
  FiniteValueTable vbar;  // V_bar of the output stage, indexed (i, h, s)
};

// Per-agent slice of the output policy: own actions per (h, s) in record
// order. Index j of every fragment belongs to the same recorded episode.
struct PolicyFragment {
  int player = 0;
  int horizon = 0;
  int num_states = 0;
  std::vector<std::vector<int>> records;  // [h * S + s]
};

// Samples pi-hat without communication: each agent draws j uniform on
// [J_{h,s}] from its own reader of the public string and plays its j-th
// recorded action. Cells with J = 0 use a public uniform joint index.
class JointSampler {
 public:
  JointSampler(JointActionSpace space, std::vector<PolicyFragment> fragments,
               SharedRandomness shared);
  int Sample(int h, int s);
  const std::vector<SharedReader>& readers() const { return readers_; }

 private:
  JointActionSpace space_;
  std::vector<PolicyFragment> fragments_;
  std::vector<SharedReader> readers_;
};

// The same draw made centrally from the joint records with one reader.
int SampleCentralized(const JointActionSpace& space,
                      const std::vector<int>& joint_records,
                      SharedReader& reader);

struct DecentralizedResult {
  SpocmarResult summary;
  std::vector<PolicyFragment> fragments;
};

// Runs the learner with m agent views in lockstep. Streams: the oracle
// draws transitions on its own; the public string and each agent's private
// generator derive from `seed`.
DecentralizedResult DecentralizedRun(GameOracle& oracle,
                                     const LearnerParams& params,
                                     uint64_t seed);

SpocmarResult RunSpocmar(GameOracle& oracle, const LearnerParams& params,
                         uint64_t seed);
// Convenience form that builds the oracle with stream DeriveSeed(seed, 0).
SpocmarResult RunSpocmar(const FiniteHorizonGame& game,
                         const LearnerParams& params, uint64_t seed);

// Joint records [h * S + s] zipped from the fragments.
std::vector<std::vector<int>> JointRecords(
    const JointActionSpace& space,
    const std::vector<PolicyFragment>& fragments);

}  // namespace mel

#endif  // MEL_SPOCMAR_LEARNER_H_
