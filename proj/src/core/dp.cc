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

#include "mel/core/dp.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "mel/core/errors.h"
#include "mel/core/linear.h"

namespace mel {
namespace {

// Action-value comparisons within this margin count as ties.
constexpr double kTieTol = 1e-12;

// Accumulates sparse rows into a dense scratch buffer.
class RowAccumulator {
 public:
  explicit RowAccumulator(int num_states) : dense_(num_states, 0.0) {}

  void Add(const TransitionRow& row, double weight) {
    for (const Transition& t : row) {
      if (dense_[t.next] == 0.0) touched_.push_back(t.next);
      dense_[t.next] += weight * t.prob;
    }
  }

  TransitionRow Take() {
    TransitionRow row;
    row.reserve(touched_.size());
    for (int s : touched_) {
      if (dense_[s] != 0.0) row.push_back({s, dense_[s]});
      dense_[s] = 0.0;
    }
    touched_.clear();
    return row;
  }

 private:
  std::vector<double> dense_;
  std::vector<int> touched_;
};

double RowExpect(const TransitionRow& row, const double* values) {
  double acc = 0.0;
  for (const Transition& t : row) acc += t.prob * values[t.next];
  return acc;
}

// Index of the best entry; ties within kTieTol go to the lowest index.
int ArgMaxLowest(const std::vector<double>& q) {
  const double best = *std::max_element(q.begin(), q.end());
  for (int b = 0; b < static_cast<int>(q.size()); ++b) {
    if (q[b] >= best - kTieTol) return b;
  }
  return 0;
}

// One step of backward induction for player i. `next` points at the S
// continuation values; `scale` multiplies rewards and `discount` the
// continuation (1 and 1 for finite games).
template <typename RewardFn, typename RowFn>
void BackupBestResponse(const JointActionSpace& space,
                        const std::vector<WeightedProfile>& cell, int player,
                        RewardFn reward, RowFn row, const double* next,
                        double scale, double discount, int* action,
                        double* value) {
  std::vector<double> q(space.num_actions(player), 0.0);
  for (int b = 0; b < space.num_actions(player); ++b) {
    double acc = 0.0;
    for (const WeightedProfile& wp : cell) {
      const int a = space.Replace(wp.joint, player, b);
      acc += wp.weight *
             (scale * reward(a) + discount * RowExpect(row(a), next));
    }
    q[b] = acc;
  }
  *action = ArgMaxLowest(q);
  *value = q[*action];
}

void RequireDiscountedInputs(const DiscountedGame& game,
                             const StationaryPolicy& policy) {
  RequireValidPolicy(policy, game.joint_space(), game.num_states());
}

}  // namespace

double FiniteValueTable::Expect(int i, int h,
                                std::span<const double> dist) const {
  double acc = 0.0;
  for (int s = 0; s < num_states_; ++s) acc += dist[s] * (*this)(i, h, s);
  return acc;
}

double DiscountedEvaluation::Expect(int i, std::span<const double> dist) const {
  double acc = 0.0;
  for (int s = 0; s < num_states; ++s) acc += dist[s] * v[i][s];
  return acc;
}

double FiniteBestResponse::Expect(int h, std::span<const double> dist) const {
  double acc = 0.0;
  for (int s = 0; s < num_states; ++s) acc += dist[s] * value(h, s);
  return acc;
}

double StationaryBestResponse::Expect(std::span<const double> dist) const {
  double acc = 0.0;
  for (size_t s = 0; s < values.size(); ++s) acc += dist[s] * values[s];
  return acc;
}

FiniteValueTable ExactValue(const FiniteHorizonGame& game,
                            const NonstationaryJointPolicy& policy) {
  RequireValidPolicy(policy, game.joint_space(), game.horizon(),
                     game.num_states());
  const int m = game.num_players();
  const int H = game.horizon();
  const int S = game.num_states();
  FiniteValueTable v(m, H, S);
  std::vector<double> next(S);
  for (int h = H - 1; h >= 0; --h) {
    for (int i = 0; i < m; ++i) {
      for (int s = 0; s < S; ++s) next[s] = v(i, h + 1, s);
      for (int s = 0; s < S; ++s) {
        double acc = 0.0;
        for (const WeightedProfile& wp : policy.cell(h, s)) {
          acc += wp.weight * (game.reward(i, h, s, wp.joint) +
                              RowExpect(game.transition(h, s, wp.joint),
                                        next.data()));
        }
        v(i, h, s) = acc;
      }
    }
  }
  return v;
}

std::vector<TransitionRow> InducedChain(const DiscountedGame& game,
                                        const StationaryPolicy& policy) {
  const int S = game.num_states();
  std::vector<TransitionRow> chain(S);
  RowAccumulator acc(S);
  for (int s = 0; s < S; ++s) {
    const std::vector<double>& dist = policy.at(s);
    for (int a = 0; a < game.num_joint_actions(); ++a) {
      if (dist[a] > 0.0) acc.Add(game.transition(s, a), dist[a]);
    }
    chain[s] = acc.Take();
  }
  return chain;
}

DiscountedEvaluation ExactValue(const DiscountedGame& game,
                                const StationaryPolicy& policy) {
  RequireDiscountedInputs(game, policy);
  const int m = game.num_players();
  const int S = game.num_states();
  const int A = game.num_joint_actions();
  const double gamma = game.gamma();
  std::vector<std::vector<double>> rhs(m, std::vector<double>(S, 0.0));
  for (int i = 0; i < m; ++i) {
    for (int s = 0; s < S; ++s) {
      double acc = 0.0;
      const std::vector<double>& dist = policy.at(s);
      for (int a = 0; a < A; ++a) {
        if (dist[a] > 0.0) acc += dist[a] * game.reward(i, s, a);
      }
      rhs[i][s] = (1.0 - gamma) * acc;
    }
  }
  DiscountedEvaluation eval;
  eval.num_states = S;
  eval.num_joint = A;
  eval.v = SolveDiscountedChain(InducedChain(game, policy), rhs, gamma,
                                UseDirectSolve(game));
  eval.q.assign(m, std::vector<double>(static_cast<size_t>(S) * A, 0.0));
  for (int i = 0; i < m; ++i) {
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        eval.q[i][static_cast<size_t>(s) * A + a] =
            (1.0 - gamma) * game.reward(i, s, a) +
            gamma * RowExpect(game.transition(s, a), eval.v[i].data());
      }
    }
  }
  return eval;
}

FiniteValueTable ExactValue(const DiscountedGame& game,
                            const NonstationaryJointPolicy& policy) {
  const int H = policy.horizon();
  const int S = game.num_states();
  const int m = game.num_players();
  RequireValidPolicy(policy, game.joint_space(), H, S);
  const DiscountedEvaluation tail =
      ExactValue(game, StationaryPolicy::Uniform(game.joint_space(), S));
  const double gamma = game.gamma();
  FiniteValueTable v(m, H, S);
  for (int i = 0; i < m; ++i) {
    for (int s = 0; s < S; ++s) v(i, H, s) = tail.v[i][s];
  }
  std::vector<double> next(S);
  for (int h = H - 1; h >= 0; --h) {
    for (int i = 0; i < m; ++i) {
      for (int s = 0; s < S; ++s) next[s] = v(i, h + 1, s);
      for (int s = 0; s < S; ++s) {
        double acc = 0.0;
        for (const WeightedProfile& wp : policy.cell(h, s)) {
          acc += wp.weight *
                 ((1.0 - gamma) * game.reward(i, s, wp.joint) +
                  gamma * RowExpect(game.transition(s, wp.joint), next.data()));
        }
        v(i, h, s) = acc;
      }
    }
  }
  return v;
}

FiniteBestResponse BestResponse(const FiniteHorizonGame& game,
                                const NonstationaryJointPolicy& policy,
                                int player) {
  RequireValidPolicy(policy, game.joint_space(), game.horizon(),
                     game.num_states());
  if (player < 0 || player >= game.num_players()) {
    throw InputError("player out of range");
  }
  const int H = game.horizon();
  const int S = game.num_states();
  FiniteBestResponse br;
  br.horizon = H;
  br.num_states = S;
  br.actions.assign(static_cast<size_t>(H) * S, 0);
  br.values.assign(static_cast<size_t>(H + 1) * S, 0.0);
  for (int h = H - 1; h >= 0; --h) {
    const double* next = br.values.data() + static_cast<size_t>(h + 1) * S;
    for (int s = 0; s < S; ++s) {
      BackupBestResponse(
          game.joint_space(), policy.cell(h, s), player,
          [&](int a) { return game.reward(player, h, s, a); },
          [&](int a) -> const TransitionRow& {
            return game.transition(h, s, a);
          },
          next, 1.0, 1.0, &br.actions[h * S + s], &br.values[h * S + s]);
    }
  }
  return br;
}

StationaryBestResponse BestResponse(const DiscountedGame& game,
                                    const StationaryPolicy& policy,
                                    int player) {
  RequireDiscountedInputs(game, policy);
  if (player < 0 || player >= game.num_players()) {
    throw InputError("player out of range");
  }
  const JointActionSpace& space = game.joint_space();
  const int S = game.num_states();
  const int B = space.num_actions(player);
  const double gamma = game.gamma();

  // Single-agent MDP against pi_{-i}.
  std::vector<double> reward(static_cast<size_t>(S) * B, 0.0);
  std::vector<TransitionRow> rows(static_cast<size_t>(S) * B);
  RowAccumulator acc(S);
  for (int s = 0; s < S; ++s) {
    const std::vector<double>& dist = policy.at(s);
    for (int b = 0; b < B; ++b) {
      double r = 0.0;
      for (int a = 0; a < space.size(); ++a) {
        if (dist[a] <= 0.0) continue;
        const int dev = space.Replace(a, player, b);
        r += dist[a] * game.reward(player, s, dev);
        acc.Add(game.transition(s, dev), dist[a]);
      }
      reward[s * B + b] = (1.0 - gamma) * r;
      rows[s * B + b] = acc.Take();
    }
  }

  // Policy iteration; switch only on strict improvement to avoid cycling.
  StationaryBestResponse br;
  br.actions.assign(S, 0);
  const bool direct = UseDirectSolve(game);
  std::vector<double> q(B);
  for (int iter = 0;; ++iter) {
    if (iter > 10000) throw SolverError("policy iteration did not converge");
    std::vector<TransitionRow> chain(S);
    std::vector<std::vector<double>> rhs(1, std::vector<double>(S));
    for (int s = 0; s < S; ++s) {
      chain[s] = rows[s * B + br.actions[s]];
      rhs[0][s] = reward[s * B + br.actions[s]];
    }
    br.values = SolveDiscountedChain(chain, rhs, gamma, direct)[0];
    bool changed = false;
    for (int s = 0; s < S; ++s) {
      for (int b = 0; b < B; ++b) {
        q[b] = reward[s * B + b] +
               gamma * RowExpect(rows[s * B + b], br.values.data());
      }
      const int best = ArgMaxLowest(q);
      if (q[best] > q[br.actions[s]] + kTieTol) {
        br.actions[s] = best;
        changed = true;
      }
    }
    if (!changed) break;
  }
  // Canonical tie-breaking on the converged values.
  for (int s = 0; s < S; ++s) {
    for (int b = 0; b < B; ++b) {
      q[b] = reward[s * B + b] +
             gamma * RowExpect(rows[s * B + b], br.values.data());
    }
    br.actions[s] = ArgMaxLowest(q);
  }
  return br;
}

FiniteBestResponse BestResponse(const DiscountedGame& game,
                                const NonstationaryJointPolicy& policy,
                                int player) {
  const int H = policy.horizon();
  const int S = game.num_states();
  RequireValidPolicy(policy, game.joint_space(), H, S);
  const StationaryBestResponse tail = BestResponse(
      game, StationaryPolicy::Uniform(game.joint_space(), S), player);
  const double gamma = game.gamma();
  FiniteBestResponse br;
  br.horizon = H;
  br.num_states = S;
  br.actions.assign(static_cast<size_t>(H) * S, 0);
  br.values.assign(static_cast<size_t>(H + 1) * S, 0.0);
  br.tail_actions = tail.actions;
  std::copy(tail.values.begin(), tail.values.end(),
            br.values.begin() + static_cast<size_t>(H) * S);
  for (int h = H - 1; h >= 0; --h) {
    const double* next = br.values.data() + static_cast<size_t>(h + 1) * S;
    for (int s = 0; s < S; ++s) {
      BackupBestResponse(
          game.joint_space(), policy.cell(h, s), player,
          [&](int a) { return game.reward(player, s, a); },
          [&](int a) -> const TransitionRow& { return game.transition(s, a); },
          next, 1.0 - gamma, gamma, &br.actions[h * S + s],
          &br.values[h * S + s]);
    }
  }
  return br;
}

NonstationaryJointPolicy Deviate(const JointActionSpace& space,
                                 const NonstationaryJointPolicy& policy,
                                 int player, const std::vector<int>& actions) {
  const int H = policy.horizon();
  const int S = policy.num_states();
  NonstationaryJointPolicy out(H, S);
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      std::vector<WeightedProfile> mixture;
      std::unordered_map<int, size_t> slot;
      for (const WeightedProfile& wp : policy.cell(h, s)) {
        const int a = space.Replace(wp.joint, player, actions[h * S + s]);
        auto [it, inserted] = slot.emplace(a, mixture.size());
        if (inserted) mixture.push_back({a, 0.0});
        mixture[it->second].weight += wp.weight;
      }
      out.set_cell(h, s, std::move(mixture));
    }
  }
  return out;
}

StationaryPolicy Deviate(const JointActionSpace& space,
                         const StationaryPolicy& policy, int player,
                         const std::vector<int>& actions) {
  StationaryPolicy out(policy.num_states(), space.size());
  for (int s = 0; s < policy.num_states(); ++s) {
    for (int a = 0; a < space.size(); ++a) {
      out.mutable_at(s)[space.Replace(a, player, actions[s])] +=
          policy.at(s)[a];
    }
  }
  return out;
}

std::vector<std::vector<double>> StateVisitation(
    const FiniteHorizonGame& game, const NonstationaryJointPolicy& policy) {
  RequireValidPolicy(policy, game.joint_space(), game.horizon(),
                     game.num_states());
  const int H = game.horizon();
  const int S = game.num_states();
  std::vector<std::vector<double>> d(H, std::vector<double>(S, 0.0));
  d[0] = game.mu();
  for (int h = 0; h + 1 < H; ++h) {
    for (int s = 0; s < S; ++s) {
      if (d[h][s] == 0.0) continue;
      for (const WeightedProfile& wp : policy.cell(h, s)) {
        for (const Transition& t : game.transition(h, s, wp.joint)) {
          d[h + 1][t.next] += d[h][s] * wp.weight * t.prob;
        }
      }
    }
  }
  return d;
}

std::vector<double> StateVisitation(const DiscountedGame& game,
                                    const StationaryPolicy& policy,
                                    std::span<const double> start) {
  RequireDiscountedInputs(game, policy);
  const int S = game.num_states();
  const double gamma = game.gamma();
  const std::vector<TransitionRow> chain = InducedChain(game, policy);
  std::vector<double> current(start.begin(), start.end());
  std::vector<double> d(S, 0.0);
  std::vector<double> next(S);
  double weight = 1.0 - gamma;  // (1 - gamma) gamma^h
  double residual = 1.0;        // gamma^h, the mass not yet accounted for
  while (true) {
    for (int s = 0; s < S; ++s) d[s] += weight * current[s];
    residual *= gamma;
    if (residual < 1e-12) break;
    weight *= gamma;
    std::fill(next.begin(), next.end(), 0.0);
    for (int s = 0; s < S; ++s) {
      if (current[s] == 0.0) continue;
      for (const Transition& t : chain[s]) next[t.next] += current[s] * t.prob;
    }
    current.swap(next);
  }
  return d;
}

std::vector<double> StateVisitation(const DiscountedGame& game,
                                    const StationaryPolicy& policy,
                                    int start) {
  std::vector<double> dist(game.num_states(), 0.0);
  dist.at(start) = 1.0;
  return StateVisitation(game, policy, dist);
}

}  // namespace mel
