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

#ifndef MEL_CORE_SIMULATE_H_
#define MEL_CORE_SIMULATE_H_

#include <vector>

#include "mel/core/game.h"
#include "mel/core/policy.h"
#include "mel/core/rng.h"

namespace mel {

// One episode: entry h holds (s_h, a_h, r_h) for h = 0, ..., H - 1.
struct Trajectory {
  std::vector<int> states;
  std::vector<int> actions;
  std::vector<std::vector<double>> rewards;  // rewards[h][i]
};

// Draws a successor state from a transition row.
int SampleNext(const TransitionRow& row, Rng& rng);

// Draws one joint action from a mixture cell.
int SampleProfile(const std::vector<WeightedProfile>& mixture, Rng& rng);

// s_0 ~ mu, a_h from the policy cell at (h, s_h), s_{h+1} ~ P_h(.|s_h, a_h).
Trajectory SampleTrajectory(const FiniteHorizonGame& game,
                            const NonstationaryJointPolicy& policy, Rng& rng);

}  // namespace mel

#endif  // MEL_CORE_SIMULATE_H_
