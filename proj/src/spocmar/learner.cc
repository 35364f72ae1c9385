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

#include "mel/spocmar/learner.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "mel/core/errors.h"

namespace mel {
namespace {

constexpr double kBoundSlack = 1e-9;

NonstationaryJointPolicy AssembleStagePolicy(
    const JointActionSpace& space, const std::vector<AgentView>& agents,
    int stage, int horizon, int num_states) {
  std::vector<PolicyFragment> fragments;
  for (const AgentView& agent : agents) {
    PolicyFragment fragment{agent.player(), horizon, num_states, {}};
    for (int h = 0; h < horizon; ++h) {
      for (int s = 0; s < num_states; ++s) {
        fragment.records.push_back(agent.records(stage, h, s));
      }
    }
    fragments.push_back(std::move(fragment));
  }
  return NonstationaryJointPolicy::FromRecords(space, horizon, num_states,
                                               JointRecords(space, fragments));
}

}  // namespace

GameOracle::GameOracle(const FiniteHorizonGame& game, uint64_t seed)
    : game_(game), rng_(seed) {
  RequireValid(game);
}

Trajectory GameOracle::Run(const std::function<int(int h, int s)>& choose) {
  const int H = game_.horizon();
  Trajectory t;
  t.states.reserve(H);
  t.actions.reserve(H);
  t.rewards.reserve(H);
  int s = rng_.Categorical(game_.mu());
  for (int h = 0; h < H; ++h) {
    const int a = choose(h, s);
    if (a < 0 || a >= game_.num_joint_actions()) {
      throw UsageError("joint action out of range");
    }
    std::vector<double> r(game_.num_players());
    for (int i = 0; i < game_.num_players(); ++i) {
      r[i] = game_.reward(i, h, s, a);
    }
    t.states.push_back(s);
    t.actions.push_back(a);
    t.rewards.push_back(std::move(r));
    if (h + 1 < H) s = SampleNext(game_.transition(h, s, a), rng_);
  }
  ++episodes_;
  return t;
}

std::vector<std::vector<double>> EstVisit(
    GameOracle& oracle, const std::function<int(int h, int s)>& choose,
    int64_t n) {
  if (n < 1) throw InputError("EstVisit needs at least one episode");
  const int H = oracle.horizon();
  const int S = oracle.num_states();
  std::vector<std::vector<int64_t>> counts(H, std::vector<int64_t>(S, 0));
  for (int64_t k = 0; k < n; ++k) {
    const Trajectory t = oracle.Run(choose);
    for (int h = 0; h < H; ++h) ++counts[h][t.states[h]];
  }
  std::vector<std::vector<double>> d(H, std::vector<double>(S));
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      d[h][s] = static_cast<double>(counts[h][s]) / static_cast<double>(n);
    }
  }
  return d;
}

std::vector<std::vector<double>> EstVisit(
    GameOracle& oracle, const NonstationaryJointPolicy& policy, int64_t n,
    Rng& rng) {
  return EstVisit(
      oracle,
      [&](int h, int s) { return SampleProfile(policy.cell(h, s), rng); }, n);
}

EpisodePlan ComposeBarPolicy(int cover_stage, int h) {
  return EpisodePlan{h, cover_stage};
}

EpisodePlan FollowStage(int stage) { return EpisodePlan{-1, stage}; }

double BanditLoss(int horizon, int h, bool visited, double reward,
                  double next_vbar) {
  const double H = horizon;
  if (!visited) return static_cast<double>(h) / H;
  return (H - reward - next_vbar) / H;
}

double ClampLoss(double loss, int64_t* clamp_count) {
  if (loss >= 0.0 && loss <= 1.0) return loss;
  ++*clamp_count;
  return std::clamp(loss, 0.0, 1.0);
}

double VbarEntry(int horizon, int h, bool visited,
                 std::span<const double> targets) {
  const double cap = horizon - h;
  if (!visited || targets.empty()) return cap;
  double total = 0.0;
  for (double x : targets) total += x;
  const double v = total / static_cast<double>(targets.size());
  if (std::abs(v) > cap + kBoundSlack) {
    throw SolverError("value estimate " + std::to_string(v) +
                      " leaves its bound at step " + std::to_string(h));
  }
  return v;
}

AgentObservation Restrict(const Trajectory& trajectory,
                          const JointActionSpace& space, int player) {
  AgentObservation obs;
  obs.states = trajectory.states;
  obs.actions.reserve(trajectory.actions.size());
  obs.rewards.reserve(trajectory.rewards.size());
  for (size_t h = 0; h < trajectory.actions.size(); ++h) {
    obs.actions.push_back(space.ActionOf(trajectory.actions[h], player));
    obs.rewards.push_back(trajectory.rewards[h][player]);
  }
  return obs;
}

AgentView::AgentView(int player, const JointActionSpace& space, int num_states,
                     int horizon, const LearnerParams& params,
                     uint64_t private_seed, SharedRandomness shared)
    : player_(player),
      space_(space),
      num_states_(num_states),
      horizon_(horizon),
      delta_(params.delta),
      rng_(private_seed),
      reader_(shared),
      vbar_(static_cast<size_t>(horizon + 1) * num_states, 0.0),
      targets_(num_states) {}

void AgentView::BeginStage(int stage) {
  if (stage != num_stages()) throw UsageError("stages must be consecutive");
  records_.emplace_back(static_cast<size_t>(horizon_) * num_states_);
}

void AgentView::BeginStep(int h, int64_t bandit_horizon) {
  (void)h;
  bandits_.assign(num_states_, Exp3Ix::Init(space_.num_actions(player_),
                                            bandit_horizon, delta_));
  for (std::vector<double>& t : targets_) t.clear();
}

int AgentView::FollowStageAction(int stage, int h, int s) {
  ++mixture_steps_;
  const std::vector<int>& recs = records(stage, h, s);
  if (recs.empty()) {
    return space_.ActionOf(reader_.UniformIndex(space_.size()), player_);
  }
  return recs[reader_.UniformIndex(static_cast<int>(recs.size()))];
}

int AgentView::Act(const EpisodePlan& plan, int h, int s) {
  if (h == plan.bandit_step) return bandits_[s].Sample(rng_).arm;
  const bool after_bandit = plan.bandit_step >= 0 && h > plan.bandit_step;
  if (after_bandit || plan.cover_stage < 0) {
    return rng_.UniformInt(space_.num_actions(player_));
  }
  return FollowStageAction(plan.cover_stage, h, s);
}

void AgentView::ObserveEpisode(const AgentObservation& observation, int h,
                               const VisitedSet& visited) {
  const int s = observation.states[h];
  const int a = observation.actions[h];
  const double r = observation.rewards[h];
  const double next =
      h + 1 < horizon_ ? vbar(h + 1, observation.states[h + 1]) : 0.0;
  const double loss = ClampLoss(
      BanditLoss(horizon_, h, visited.contains(h, s), r, next), &clamped_);
  bandits_[s].Update(a, loss);
  records_.back()[static_cast<size_t>(h) * num_states_ + s].push_back(a);
  targets_[s].push_back(r + next);
}

void AgentView::FinishStep(int h, const VisitedSet& visited) {
  for (int s = 0; s < num_states_; ++s) {
    vbar_[static_cast<size_t>(h) * num_states_ + s] =
        VbarEntry(horizon_, h, visited.contains(h, s), targets_[s]);
    targets_[s].clear();
  }
}

void CheckSynchronized(const std::vector<AgentView>& agents) {
  for (const AgentView& agent : agents) {
    if (agent.reader().bits_consumed() !=
        agents.front().reader().bits_consumed()) {
      throw SolverError(
          "shared randomness desynchronized: agent " +
          std::to_string(agent.player()) + " consumed " +
          std::to_string(agent.reader().bits_consumed()) +
          " bits, agent 0 consumed " +
          std::to_string(agents.front().reader().bits_consumed()));
    }
  }
}

JointSampler::JointSampler(JointActionSpace space,
                           std::vector<PolicyFragment> fragments,
                           SharedRandomness shared)
    : space_(std::move(space)), fragments_(std::move(fragments)) {
  if (static_cast<int>(fragments_.size()) != space_.num_players()) {
    throw InputError("one fragment per player is required");
  }
  readers_.assign(fragments_.size(), SharedReader(shared));
}

int JointSampler::Sample(int h, int s) {
  std::vector<int> profile(fragments_.size());
  for (size_t i = 0; i < fragments_.size(); ++i) {
    const PolicyFragment& f = fragments_[i];
    const std::vector<int>& recs =
        f.records[static_cast<size_t>(h) * f.num_states + s];
    if (recs.empty()) {
      profile[i] = space_.ActionOf(readers_[i].UniformIndex(space_.size()),
                                   static_cast<int>(i));
    } else {
      profile[i] =
          recs[readers_[i].UniformIndex(static_cast<int>(recs.size()))];
    }
  }
  return space_.Encode(profile);
}

int SampleCentralized(const JointActionSpace& space,
                      const std::vector<int>& joint_records,
                      SharedReader& reader) {
  if (joint_records.empty()) return reader.UniformIndex(space.size());
  return joint_records[reader.UniformIndex(
      static_cast<int>(joint_records.size()))];
}

std::vector<std::vector<int>> JointRecords(
    const JointActionSpace& space,
    const std::vector<PolicyFragment>& fragments) {
  if (static_cast<int>(fragments.size()) != space.num_players()) {
    throw InputError("one fragment per player is required");
  }
  const size_t cells = fragments.front().records.size();
  std::vector<std::vector<int>> joint(cells);
  std::vector<int> profile(fragments.size());
  for (size_t c = 0; c < cells; ++c) {
    const size_t n = fragments.front().records[c].size();
    for (const PolicyFragment& f : fragments) {
      if (f.records[c].size() != n) {
        throw InputError("fragments disagree on a record count");
      }
    }
    for (size_t j = 0; j < n; ++j) {
      for (size_t i = 0; i < fragments.size(); ++i) {
        profile[i] = fragments[i].records[c][j];
      }
      joint[c].push_back(space.Encode(profile));
    }
  }
  return joint;
}

DecentralizedResult DecentralizedRun(GameOracle& oracle,
                                     const LearnerParams& params,
                                     uint64_t seed) {
  ValidateParams(params);
  const JointActionSpace& space = oracle.joint_space();
  const int m = oracle.num_players();
  const int S = oracle.num_states();
  const int H = oracle.horizon();
  const int64_t K = params.EpisodesPerPolicy();
  const int64_t N = params.VisitSamples();

  const SharedRandomness shared(DeriveSeed(seed, 1));
  std::vector<AgentView> agents;
  for (int i = 0; i < m; ++i) {
    agents.emplace_back(i, space, S, H, params, DeriveSeed(seed, 2 + i),
                        shared);
  }

  // Common knowledge: V, the cover map and the stage count. All of it is
  // computed from visited states only.
  SpocmarResult result;
  result.visited = VisitedSet(H, S);
  result.cover.assign(static_cast<size_t>(H) * S, -1);

  std::vector<int> profile(m);
  auto chooser = [&](const EpisodePlan& plan) {
    return [&, plan](int h, int s) {
      for (int i = 0; i < m; ++i) profile[i] = agents[i].Act(plan, h, s);
      return space.Encode(profile);
    };
  };

  for (int q = 0; q < params.max_stages; ++q) {
    std::vector<std::vector<int>> cover_sets(H);
    int64_t cost = N;
    for (int h = 0; h < H; ++h) {
      std::set<int> distinct;
      for (int s = 0; s < S; ++s) {
        const int c = result.cover[static_cast<size_t>(h) * S + s];
        if (c >= 0) distinct.insert(c);
      }
      cover_sets[h].assign(distinct.begin(), distinct.end());
      cost += static_cast<int64_t>(cover_sets[h].size() + 1) * K;
    }
    if (params.episode_budget > 0 &&
        result.episodes + cost > params.episode_budget) {
      if (result.output_stage < 0) {
        throw UsageError(
            "episode budget of " + std::to_string(params.episode_budget) +
            " is below the first stage cost of " + std::to_string(cost));
      }
      result.diagnostic =
          "episode budget exhausted before stage " + std::to_string(q);
      break;
    }

    StageRecord record;
    record.stage = q;
    const int64_t bits_before = agents.front().reader().bits_consumed();
    const int64_t steps_before = agents.front().mixture_steps();
    int64_t clamped_before = 0;
    for (const AgentView& agent : agents) {
      clamped_before += agent.clamped_losses();
    }

    for (AgentView& agent : agents) agent.BeginStage(q);
    for (int h = H - 1; h >= 0; --h) {
      const int64_t bandit_horizon =
          static_cast<int64_t>(cover_sets[h].size() + 1) * K;
      for (AgentView& agent : agents) agent.BeginStep(h, bandit_horizon);
      std::vector<EpisodePlan> plans;
      for (int c : cover_sets[h]) plans.push_back(ComposeBarPolicy(c, h));
      plans.push_back(ComposeBarPolicy(-1, h));
      for (const EpisodePlan& plan : plans) {
        const auto choose = chooser(plan);
        for (int64_t k = 0; k < K; ++k) {
          const Trajectory t = oracle.Run(choose);
          for (int i = 0; i < m; ++i) {
            agents[i].ObserveEpisode(Restrict(t, space, i), h, result.visited);
          }
        }
      }
      for (AgentView& agent : agents) agent.FinishStep(h, result.visited);
    }

    record.visitation = EstVisit(oracle, chooser(FollowStage(q)), N);
    CheckSynchronized(agents);

    for (int h = 0; h < H; ++h) {
      for (int s = 0; s < S; ++s) {
        if (record.visitation[h][s] >= params.p &&
            !result.visited.contains(h, s)) {
          result.cover[static_cast<size_t>(h) * S + s] = q;
          result.visited.insert(h, s);
          record.added.emplace_back(h, s);
        }
      }
    }
    record.visited_size = result.visited.size();
    record.episodes = cost;
    for (const AgentView& agent : agents) {
      record.clamped_losses += agent.clamped_losses();
    }
    record.clamped_losses -= clamped_before;
    record.shared_bits = agents.front().reader().bits_consumed() - bits_before;
    record.mixture_steps = agents.front().mixture_steps() - steps_before;
    record.policy = AssembleStagePolicy(space, agents, q, H, S);

    result.episodes += cost;
    result.clamped_losses += record.clamped_losses;
    result.output_stage = q;
    const bool done = record.added.empty();
    result.stages.push_back(std::move(record));
    if (done) {
      result.terminated = true;
      break;
    }
  }
  if (!result.terminated && result.diagnostic.empty()) {
    result.diagnostic =
        "stage cap of " + std::to_string(params.max_stages) + " reached";
  }

  const int q_hat = result.output_stage;
  DecentralizedResult out;
  for (const AgentView& agent : agents) {
    PolicyFragment fragment{agent.player(), H, S, {}};
    for (int h = 0; h < H; ++h) {
      for (int s = 0; s < S; ++s) {
        fragment.records.push_back(agent.records(q_hat, h, s));
      }
    }
    out.fragments.push_back(std::move(fragment));
  }
  result.policy = result.stages.back().policy;
  result.vbar = FiniteValueTable(m, H, S);
  for (int i = 0; i < m; ++i) {
    for (int h = 0; h < H; ++h) {
      for (int s = 0; s < S; ++s) result.vbar(i, h, s) = agents[i].vbar(h, s);
    }
  }
  out.summary = std::move(result);
  return out;
}

SpocmarResult RunSpocmar(GameOracle& oracle, const LearnerParams& params,
                         uint64_t seed) {
  return DecentralizedRun(oracle, params, seed).summary;
}

SpocmarResult RunSpocmar(const FiniteHorizonGame& game,
                         const LearnerParams& params, uint64_t seed) {
  GameOracle oracle(game, DeriveSeed(seed, 0));
  return RunSpocmar(oracle, params, seed);
}

}  // namespace mel
