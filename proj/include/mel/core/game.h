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

#ifndef MEL_CORE_GAME_H_
#define MEL_CORE_GAME_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mel/core/joint_action.h"

namespace mel {

struct Transition {
  int next;
  double prob;
};

// Sparse next-state distribution. Entries are kept in insertion order; zero
// probabilities are not stored.
using TransitionRow = std::vector<Transition>;

TransitionRow DenseToRow(std::span<const double> probs);
std::vector<double> RowToDense(const TransitionRow& row, int num_states);

// Storage shared by the finite-horizon and discounted games. A finite game
// has one table layer per step; a discounted game has a single layer.
class GameTables {
 public:
  int num_players() const { return space_.num_players(); }
  int num_states() const { return num_states_; }
  int num_joint_actions() const { return space_.size(); }
  const JointActionSpace& joint_space() const { return space_; }
  const std::vector<int>& action_counts() const {
    return space_.action_counts();
  }

  const std::vector<double>& mu() const { return mu_; }
  void set_mu(std::vector<double> mu);

 protected:
  GameTables(int num_states, std::vector<int> action_counts, int layers);

  size_t RowIndex(int layer, int s, int a) const {
    return (static_cast<size_t>(layer) * num_states_ + s) * space_.size() + a;
  }
  size_t RewardIndex(int i, int layer, int s, int a) const {
    return ((static_cast<size_t>(i) * layers_ + layer) * num_states_ + s) *
               space_.size() +
           a;
  }
  void CheckIndex(int layer, int s, int a) const;

  JointActionSpace space_;
  int num_states_;
  int layers_;
  std::vector<TransitionRow> transitions_;
  std::vector<double> rewards_;
  std::vector<double> mu_;
};

// Episodic game with steps h = 0, ..., H - 1 (0-based).
class FiniteHorizonGame : public GameTables {
 public:
  // Rewards start at zero, transition rows empty and mu uniform.
  FiniteHorizonGame(int num_states, std::vector<int> action_counts,
                    int horizon);

  int horizon() const { return layers_; }

  const TransitionRow& transition(int h, int s, int a) const {
    return transitions_[RowIndex(h, s, a)];
  }
  void set_transition(int h, int s, int a, TransitionRow row);

  double reward(int i, int h, int s, int a) const {
    return rewards_[RewardIndex(i, h, s, a)];
  }
  void set_reward(int i, int h, int s, int a, double value);
};

// Infinite-horizon game with discount gamma in [0, 1). Values carry the
// (1 - gamma) normalization, so they lie in [-1, 1].
class DiscountedGame : public GameTables {
 public:
  DiscountedGame(int num_states, std::vector<int> action_counts,
                 double gamma);

  double gamma() const { return gamma_; }
  void set_gamma(double gamma) { gamma_ = gamma; }

  const TransitionRow& transition(int s, int a) const {
    return transitions_[RowIndex(0, s, a)];
  }
  void set_transition(int s, int a, TransitionRow row);

  double reward(int i, int s, int a) const {
    return rewards_[RewardIndex(i, 0, s, a)];
  }
  void set_reward(int i, int s, int a, double value);

 private:
  double gamma_;
};

// Per-state controller of a turn-based game.
struct TurnBasedAnnotation {
  std::vector<int> controller;
  std::optional<int> sink;
};

// Empty iff every table invariant holds: rows are nonnegative and sum to 1
// within 1e-9, rewards lie in [-1, 1], mu is a distribution, and the discount
// lies in [0, 1).
std::vector<std::string> ValidateGame(const FiniteHorizonGame& game);
std::vector<std::string> ValidateGame(const DiscountedGame& game);

// Empty iff joint actions agreeing on the controller's action induce
// identical rows and reward vectors, and the sink (if any) is absorbing with
// zero reward.
std::vector<std::string> CheckTurnBased(const DiscountedGame& game,
                                        const TurnBasedAnnotation& annotation);
std::vector<std::string> CheckTurnBased(const FiniteHorizonGame& game,
                                        const TurnBasedAnnotation& annotation);

// Throws InputError carrying the first violations when the game is invalid.
void RequireValid(const FiniteHorizonGame& game);
void RequireValid(const DiscountedGame& game);

}  // namespace mel

#endif  // MEL_CORE_GAME_H_
