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

#include "mel/core/transforms.h"

#include <cmath>

#include "mel/core/errors.h"

namespace mel {

int TruncationHorizon(double gamma, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InputError("eps must lie in (0, 1)");
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw InputError("discount must lie in [0, 1)");
  }
  const double x = std::log(1.0 / eps) / (1.0 - gamma);
  // Snap values within rounding of an integer, e.g. ln(e^2) / 0.5.
  const double nearest = std::round(x);
  const double h = std::abs(x - nearest) <= 1e-9 * std::max(1.0, x)
                       ? nearest
                       : std::ceil(x);
  return std::max(1, static_cast<int>(h));
}

FiniteHorizonGame DiscountedToFinite(const DiscountedGame& game, double eps) {
  const int H = TruncationHorizon(game.gamma(), eps);
  const int S = game.num_states();
  const int A = game.num_joint_actions();
  FiniteHorizonGame out(S, game.action_counts(), H);
  double scale = 1.0;  // gamma^h
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        out.set_transition(h, s, a, game.transition(s, a));
        for (int i = 0; i < game.num_players(); ++i) {
          out.set_reward(i, h, s, a, scale * game.reward(i, s, a));
        }
      }
    }
    scale *= game.gamma();
  }
  out.set_mu(game.mu());
  return out;
}

bool VisitedSet::insert(int h, int s) {
  if (h < 0 || h >= horizon_ || s < 0 || s >= num_states_) {
    throw InputError("visited pair out of range");
  }
  char& flag = flags_[static_cast<size_t>(h) * num_states_ + s];
  if (flag) return false;
  flag = 1;
  ++size_;
  return true;
}

std::vector<std::pair<int, int>> VisitedSet::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int h = 0; h < horizon_; ++h) {
    for (int s = 0; s < num_states_; ++s) {
      if (contains(h, s)) out.emplace_back(h, s);
    }
  }
  return out;
}

VisitedSet VisitedSet::All(int horizon, int num_states) {
  VisitedSet set(horizon, num_states);
  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < num_states; ++s) set.insert(h, s);
  }
  return set;
}

FiniteHorizonGame BuildOptimisticGame(const FiniteHorizonGame& game,
                                      const VisitedSet& visited) {
  const int H = game.horizon();
  const int S = game.num_states();
  const int A = game.num_joint_actions();
  const int m = game.num_players();
  if (visited.horizon() != H || visited.num_states() != S) {
    throw InputError("visited set shape does not match the game");
  }
  const int absorbing = S;
  FiniteHorizonGame out(S + 1, game.action_counts(), H);
  const TransitionRow to_absorbing = {{absorbing, 1.0}};
  for (int h = 0; h < H; ++h) {
    for (int a = 0; a < A; ++a) {
      for (int s = 0; s < S; ++s) {
        if (visited.contains(h, s)) {
          out.set_transition(h, s, a, game.transition(h, s, a));
          for (int i = 0; i < m; ++i) {
            out.set_reward(i, h, s, a, game.reward(i, h, s, a));
          }
        } else {
          out.set_transition(h, s, a, to_absorbing);
          for (int i = 0; i < m; ++i) out.set_reward(i, h, s, a, 1.0);
        }
      }
      out.set_transition(h, absorbing, a, to_absorbing);
      for (int i = 0; i < m; ++i) out.set_reward(i, h, absorbing, a, 1.0);
    }
  }
  std::vector<double> mu = game.mu();
  mu.push_back(0.0);
  out.set_mu(std::move(mu));
  return out;
}

}  // namespace mel
