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

#ifndef MEL_CORE_GENERATORS_H_
#define MEL_CORE_GENERATORS_H_

#include <string>
#include <string_view>
#include <vector>

#include "mel/core/game.h"
#include "mel/core/policy.h"
#include "mel/core/rng.h"

namespace mel {

// uniform:    dense random rows and rewards.
// chain:      states in a line; each joint action advances with a random
//             probability and otherwise returns to state 0; mu = state 0.
// turn-based: a random controller per state whose action alone determines
//             rows and rewards.
enum class GameFamily { kUniform, kChain, kTurnBased };

GameFamily ParseGameFamily(std::string_view name);
std::string GameFamilyName(GameFamily family);

// Dirichlet(1, ..., 1) sample.
std::vector<double> RandomDistribution(int n, Rng& rng);

// `annotation` receives the controller map for the turn-based family.
FiniteHorizonGame RandomFiniteGame(GameFamily family, int num_states,
                                   const std::vector<int>& action_counts,
                                   int horizon, Rng& rng,
                                   TurnBasedAnnotation* annotation = nullptr);
DiscountedGame RandomDiscountedGame(GameFamily family, int num_states,
                                    const std::vector<int>& action_counts,
                                    double gamma, Rng& rng,
                                    TurnBasedAnnotation* annotation = nullptr);

// Each cell mixes between one and three distinct random profiles.
NonstationaryJointPolicy RandomNonstationaryPolicy(
    const JointActionSpace& space, int horizon, int num_states, Rng& rng);
StationaryPolicy RandomStationaryPolicy(const JointActionSpace& space,
                                        int num_states, Rng& rng);
ProductPolicy RandomProductPolicy(const JointActionSpace& space,
                                  int num_states, Rng& rng);

}  // namespace mel

#endif  // MEL_CORE_GENERATORS_H_
