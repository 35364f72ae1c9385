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

#include "mel/core/simulate.h"

#include "mel/core/errors.h"

namespace mel {

int SampleNext(const TransitionRow& row, Rng& rng) {
  if (row.empty()) throw InputError("cannot sample from an empty row");
  const double u = rng.Uniform();
  double acc = 0.0;
  for (const Transition& t : row) {
    acc += t.prob;
    if (u < acc) return t.next;
  }
  return row.back().next;
}

int SampleProfile(const std::vector<WeightedProfile>& mixture, Rng& rng) {
  if (mixture.empty()) throw InputError("cannot sample an empty mixture");
  if (mixture.size() == 1) return mixture[0].joint;
  const double u = rng.Uniform();
  double acc = 0.0;
  for (const WeightedProfile& wp : mixture) {
    acc += wp.weight;
    if (u < acc) return wp.joint;
  }
  return mixture.back().joint;
}

Trajectory SampleTrajectory(const FiniteHorizonGame& game,
                            const NonstationaryJointPolicy& policy, Rng& rng) {
  const int H = game.horizon();
  const int m = game.num_players();
  Trajectory traj;
  traj.states.reserve(H);
  traj.actions.reserve(H);
  traj.rewards.reserve(H);
  int s = rng.Categorical(game.mu());
  for (int h = 0; h < H; ++h) {
    const int a = SampleProfile(policy.cell(h, s), rng);
    std::vector<double> r(m);
    for (int i = 0; i < m; ++i) r[i] = game.reward(i, h, s, a);
    traj.states.push_back(s);
    traj.actions.push_back(a);
    traj.rewards.push_back(std::move(r));
    if (h + 1 < H) s = SampleNext(game.transition(h, s, a), rng);
  }
  return traj;
}

}  // namespace mel
