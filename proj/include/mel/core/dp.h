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

#ifndef MEL_CORE_DP_H_
#define MEL_CORE_DP_H_

#include <span>
#include <vector>

#include "mel/core/game.h"
#include "mel/core/policy.h"

namespace mel {

// V_{i,h}(s) for steps h = 0, ..., H. Row H holds the continuation value:
// zero in a finite-horizon game, the uniform-play value in the discounted
// wrapper.
class FiniteValueTable {
 public:
  FiniteValueTable() = default;
  FiniteValueTable(int num_players, int horizon, int num_states)
      : num_players_(num_players),
        horizon_(horizon),
        num_states_(num_states),
        data_(static_cast<size_t>(num_players) * (horizon + 1) * num_states,
              0.0) {}

  int num_players() const { return num_players_; }
  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }

  double operator()(int i, int h, int s) const { return data_[Index(i, h, s)]; }
  double& operator()(int i, int h, int s) { return data_[Index(i, h, s)]; }

  // E_{s ~ dist} V_{i,h}(s).
  double Expect(int i, int h, std::span<const double> dist) const;

 private:
  size_t Index(int i, int h, int s) const {
    return (static_cast<size_t>(i) * (horizon_ + 1) + h) * num_states_ + s;
  }

  int num_players_ = 0;
  int horizon_ = 0;
  int num_states_ = 0;
  std::vector<double> data_;
};

// Normalized discounted values V_i(s) and joint-action values Q_i(s, a).
struct DiscountedEvaluation {
  int num_states = 0;
  int num_joint = 0;
  std::vector<std::vector<double>> v;  // v[i][s]
  std::vector<std::vector<double>> q;  // q[i][s * num_joint + a]

  double Q(int i, int s, int a) const {
    return q[i][static_cast<size_t>(s) * num_joint + a];
  }
  double Expect(int i, std::span<const double> dist) const;
};

// Backward recursion V_{i,h}(s) = sum_a pi_h(a|s) [r + sum_s' P V_{i,h+1}].
FiniteValueTable ExactValue(const FiniteHorizonGame& game,
                            const NonstationaryJointPolicy& policy);

// V = (1 - gamma) r_pi + gamma P_pi V and
// Q(s, a) = (1 - gamma) r(s, a) + gamma E_{s'} V(s').
DiscountedEvaluation ExactValue(const DiscountedGame& game,
                                const StationaryPolicy& policy);

// Nonstationary policy in a discounted game: steps 0..H-1 follow the policy,
// every later step is uniform play. Entries are normalized discounted values.
FiniteValueTable ExactValue(const DiscountedGame& game,
                            const NonstationaryJointPolicy& policy);

// Deterministic best response of one player and its value table.
struct FiniteBestResponse {
  int horizon = 0;
  int num_states = 0;
  std::vector<int> actions;      // actions[h * S + s], h < H
  std::vector<double> values;    // values[h * S + s], h <= H
  std::vector<int> tail_actions;  // stationary play after H (discounted only)

  int action(int h, int s) const { return actions[h * num_states + s]; }
  double value(int h, int s) const { return values[h * num_states + s]; }
  double Expect(int h, std::span<const double> dist) const;
};

struct StationaryBestResponse {
  std::vector<int> actions;    // actions[s]
  std::vector<double> values;  // normalized V^{dagger}(s)

  double Expect(std::span<const double> dist) const;
};

// Single-agent dynamic programming against the marginal pi_{-i}. Ties go to
// the lowest action index.
FiniteBestResponse BestResponse(const FiniteHorizonGame& game,
                                const NonstationaryJointPolicy& policy,
                                int player);
StationaryBestResponse BestResponse(const DiscountedGame& game,
                                    const StationaryPolicy& policy, int player);
FiniteBestResponse BestResponse(const DiscountedGame& game,
                                const NonstationaryJointPolicy& policy,
                                int player);

// The joint policy pi_i' x pi_{-i}: every profile in each cell has player's
// action replaced by actions[h * S + s].
NonstationaryJointPolicy Deviate(const JointActionSpace& space,
                                 const NonstationaryJointPolicy& policy,
                                 int player, const std::vector<int>& actions);
StationaryPolicy Deviate(const JointActionSpace& space,
                         const StationaryPolicy& policy, int player,
                         const std::vector<int>& actions);

// d_h(s) = Pr[s_h = s] from s_0 ~ mu, indexed [h][s].
std::vector<std::vector<double>> StateVisitation(
    const FiniteHorizonGame& game, const NonstationaryJointPolicy& policy);

// d(s') = (1 - gamma) sum_h gamma^h Pr[s_h = s' | s_0 ~ start], propagated
// forward until the remaining mass falls below 1e-12.
std::vector<double> StateVisitation(const DiscountedGame& game,
                                    const StationaryPolicy& policy,
                                    std::span<const double> start);
std::vector<double> StateVisitation(const DiscountedGame& game,
                                    const StationaryPolicy& policy, int start);

// Markov chain P_pi(s'|s) = sum_a pi(a|s) P(s'|s, a).
std::vector<TransitionRow> InducedChain(const DiscountedGame& game,
                                        const StationaryPolicy& policy);

}  // namespace mel

#endif  // MEL_CORE_DP_H_
