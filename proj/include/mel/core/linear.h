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

#ifndef MEL_CORE_LINEAR_H_
#define MEL_CORE_LINEAR_H_

#include <vector>

#include "mel/core/game.h"

namespace mel {

// Problems with S * prod_i A_i at most this size are solved directly.
inline constexpr long long kDirectSolveLimit = 10000;

// Iterative solves stop once the sup-norm change falls below this value.
inline constexpr double kIterativeResidual = 1e-12;

bool UseDirectSolve(const DiscountedGame& game);

// Solves v = rhs[k] + gamma * P v for each right-hand side, where P is the
// Markov chain given by sparse rows. Uses an LU factorization when `direct`
// holds, else fixed-point iteration to kIterativeResidual.
std::vector<std::vector<double>> SolveDiscountedChain(
    const std::vector<TransitionRow>& chain,
    const std::vector<std::vector<double>>& rhs, double gamma, bool direct);

}  // namespace mel

#endif  // MEL_CORE_LINEAR_H_
