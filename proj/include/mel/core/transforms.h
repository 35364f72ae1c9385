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

#ifndef MEL_CORE_TRANSFORMS_H_
#define MEL_CORE_TRANSFORMS_H_

#include <utility>
#include <vector>

#include "mel/core/game.h"

namespace mel {

// H = ceil(ln(1/eps) / (1 - gamma)), at least 1. Requires 0 < eps < 1.
int TruncationHorizon(double gamma, double eps);

// Finite-horizon game with r_{i,h} = gamma^h r_i (0-based h) and the
// discounted game's transitions at every step.
FiniteHorizonGame DiscountedToFinite(const DiscountedGame& game, double eps);

// Subset of [H] x states.
class VisitedSet {
 public:
  VisitedSet() = default;
  VisitedSet(int horizon, int num_states)
      : horizon_(horizon),
        num_states_(num_states),
        flags_(static_cast<size_t>(horizon) * num_states, 0) {}

  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  bool contains(int h, int s) const {
    return flags_[static_cast<size_t>(h) * num_states_ + s] != 0;
  }
  // Returns true if the pair was not yet present.
  bool insert(int h, int s);
  int size() const { return size_; }
  std::vector<std::pair<int, int>> pairs() const;

  static VisitedSet All(int horizon, int num_states);

 private:
  int horizon_ = 0;
  int num_states_ = 0;
  std::vector<char> flags_;
  int size_ = 0;
};

// Game with an extra absorbing state (index S) paying 1 to every player.
// Pairs outside `visited` pay 1 under every action and move to that state;
// pairs inside keep the original tables.
FiniteHorizonGame BuildOptimisticGame(const FiniteHorizonGame& game,
                                      const VisitedSet& visited);

}  // namespace mel

#endif  // MEL_CORE_TRANSFORMS_H_
