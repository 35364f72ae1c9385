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

#include "mel/core/game.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mel/core/errors.h"

namespace mel {
namespace {

constexpr double kStochasticTol = 1e-9;

std::string Where(int h, int s, int a) {
  std::ostringstream out;
  out << "(h=" << h << ", s=" << s << ", a=" << a << ")";
  return out.str();
}

void CheckRow(const TransitionRow& row, int num_states,
              const std::string& where, std::vector<std::string>* out) {
  double total = 0.0;
  for (const Transition& t : row) {
    if (t.next < 0 || t.next >= num_states) {
      out->push_back("transition row " + where + " targets state " +
                     std::to_string(t.next) + " out of range");
      return;
    }
    if (!(t.prob >= 0.0) || !std::isfinite(t.prob)) {
      out->push_back("transition row " + where + " has a negative entry");
      return;
    }
    total += t.prob;
  }
  if (std::abs(total - 1.0) > kStochasticTol) {
    std::ostringstream msg;
    msg << "transition row " << where << " sums to " << total;
    out->push_back(msg.str());
  }
}

void CheckReward(double r, const std::string& where,
                 std::vector<std::string>* out) {
  if (!(r >= -1.0 && r <= 1.0)) {
    std::ostringstream msg;
    msg << "reward " << where << " = " << r << " outside [-1, 1]";
    out->push_back(msg.str());
  }
}

void CheckMu(const std::vector<double>& mu, int num_states,
             std::vector<std::string>* out) {
  if (static_cast<int>(mu.size()) != num_states) {
    out->push_back("initial distribution has wrong length");
    return;
  }
  double total = 0.0;
  for (double p : mu) {
    if (!(p >= 0.0)) {
      out->push_back("initial distribution has a negative entry");
      return;
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kStochasticTol) {
    std::ostringstream msg;
    msg << "initial distribution sums to " << total;
    out->push_back(msg.str());
  }
}

TransitionRow Sorted(TransitionRow row) {
  std::sort(row.begin(), row.end(),
            [](const Transition& x, const Transition& y) {
              return x.next < y.next;
            });
  return row;
}

bool RowsEqual(const TransitionRow& x, const TransitionRow& y) {
  if (x.size() != y.size()) return false;
  const TransitionRow sx = Sorted(x);
  const TransitionRow sy = Sorted(y);
  for (size_t k = 0; k < sx.size(); ++k) {
    if (sx[k].next != sy[k].next || sx[k].prob != sy[k].prob) return false;
  }
  return true;
}

// Shared turn-based check over one table layer. `row` and `reward` read the
// layer; `layer_name` prefixes the messages.
template <typename RowFn, typename RewardFn>
void CheckTurnBasedLayer(const JointActionSpace& space, int num_states,
                         const TurnBasedAnnotation& annotation, RowFn row,
                         RewardFn reward, int layer,
                         std::vector<std::string>* out) {
  for (int s = 0; s < num_states; ++s) {
    const int c = annotation.controller[s];
    // Reference joint action: controller's action, every other player at 0.
    for (int a = 0; a < space.size(); ++a) {
      int ref = 0;
      ref = space.Replace(ref, c, space.ActionOf(a, c));
      if (ref == a) continue;
      bool same = RowsEqual(row(s, a), row(s, ref));
      for (int i = 0; same && i < space.num_players(); ++i) {
        same = reward(i, s, a) == reward(i, s, ref);
      }
      if (!same) {
        out->push_back("state " + std::to_string(s) +
                       " depends on a non-controller action at " +
                       Where(layer, s, a));
        break;
      }
    }
  }
}

void CheckAnnotationShape(const TurnBasedAnnotation& annotation,
                          int num_states, int num_players,
                          std::vector<std::string>* out) {
  if (static_cast<int>(annotation.controller.size()) != num_states) {
    out->push_back("controller map has wrong length");
    return;
  }
  for (int c : annotation.controller) {
    if (c < 0 || c >= num_players) {
      out->push_back("controller index out of range");
      return;
    }
  }
  if (annotation.sink && (*annotation.sink < 0 ||
                          *annotation.sink >= num_states)) {
    out->push_back("sink index out of range");
  }
}

}  // namespace

TransitionRow DenseToRow(std::span<const double> probs) {
  TransitionRow row;
  for (int k = 0; k < static_cast<int>(probs.size()); ++k) {
    if (probs[k] != 0.0) row.push_back({k, probs[k]});
  }
  return row;
}

std::vector<double> RowToDense(const TransitionRow& row, int num_states) {
  std::vector<double> dense(num_states, 0.0);
  for (const Transition& t : row) dense[t.next] += t.prob;
  return dense;
}

GameTables::GameTables(int num_states, std::vector<int> action_counts,
                       int layers)
    : space_(std::move(action_counts)),
      num_states_(num_states),
      layers_(layers) {
  if (num_states < 1) throw InputError("a game needs at least one state");
  if (layers < 1) throw InputError("horizon must be positive");
  transitions_.resize(static_cast<size_t>(layers) * num_states * space_.size());
  rewards_.assign(transitions_.size() * space_.num_players(), 0.0);
  mu_.assign(num_states, 1.0 / num_states);
}

void GameTables::set_mu(std::vector<double> mu) {
  if (static_cast<int>(mu.size()) != num_states_) {
    throw InputError("initial distribution has wrong length");
  }
  mu_ = std::move(mu);
}

void GameTables::CheckIndex(int layer, int s, int a) const {
  if (layer < 0 || layer >= layers_ || s < 0 || s >= num_states_ || a < 0 ||
      a >= space_.size()) {
    throw InputError("table index out of range " + Where(layer, s, a));
  }
}

FiniteHorizonGame::FiniteHorizonGame(int num_states,
                                     std::vector<int> action_counts,
                                     int horizon)
    : GameTables(num_states, std::move(action_counts), horizon) {}

void FiniteHorizonGame::set_transition(int h, int s, int a,
                                       TransitionRow row) {
  CheckIndex(h, s, a);
  transitions_[RowIndex(h, s, a)] = std::move(row);
}

void FiniteHorizonGame::set_reward(int i, int h, int s, int a, double value) {
  CheckIndex(h, s, a);
  if (i < 0 || i >= num_players()) throw InputError("player out of range");
  rewards_[RewardIndex(i, h, s, a)] = value;
}

DiscountedGame::DiscountedGame(int num_states, std::vector<int> action_counts,
                               double gamma)
    : GameTables(num_states, std::move(action_counts), 1), gamma_(gamma) {}

void DiscountedGame::set_transition(int s, int a, TransitionRow row) {
  CheckIndex(0, s, a);
  transitions_[RowIndex(0, s, a)] = std::move(row);
}

void DiscountedGame::set_reward(int i, int s, int a, double value) {
  CheckIndex(0, s, a);
  if (i < 0 || i >= num_players()) throw InputError("player out of range");
  rewards_[RewardIndex(i, 0, s, a)] = value;
}

std::vector<std::string> ValidateGame(const FiniteHorizonGame& game) {
  std::vector<std::string> out;
  const int S = game.num_states();
  const int A = game.num_joint_actions();
  for (int h = 0; h < game.horizon(); ++h) {
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        CheckRow(game.transition(h, s, a), S, Where(h, s, a), &out);
        for (int i = 0; i < game.num_players(); ++i) {
          CheckReward(game.reward(i, h, s, a),
                      "(i=" + std::to_string(i) + ") " + Where(h, s, a), &out);
        }
      }
    }
  }
  CheckMu(game.mu(), S, &out);
  return out;
}

std::vector<std::string> ValidateGame(const DiscountedGame& game) {
  std::vector<std::string> out;
  const int S = game.num_states();
  const int A = game.num_joint_actions();
  if (!(game.gamma() >= 0.0 && game.gamma() < 1.0)) {
    out.push_back("discount outside [0, 1)");
  }
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      CheckRow(game.transition(s, a), S, Where(0, s, a), &out);
      for (int i = 0; i < game.num_players(); ++i) {
        CheckReward(game.reward(i, s, a),
                    "(i=" + std::to_string(i) + ") " + Where(0, s, a), &out);
      }
    }
  }
  CheckMu(game.mu(), S, &out);
  return out;
}

std::vector<std::string> CheckTurnBased(const DiscountedGame& game,
                                        const TurnBasedAnnotation& annotation) {
  std::vector<std::string> out;
  CheckAnnotationShape(annotation, game.num_states(), game.num_players(), &out);
  if (!out.empty()) return out;
  CheckTurnBasedLayer(
      game.joint_space(), game.num_states(), annotation,
      [&](int s, int a) -> const TransitionRow& {
        return game.transition(s, a);
      },
      [&](int i, int s, int a) { return game.reward(i, s, a); }, 0, &out);
  if (annotation.sink) {
    const int z = *annotation.sink;
    for (int a = 0; a < game.num_joint_actions(); ++a) {
      const TransitionRow& row = game.transition(z, a);
      if (row.size() != 1 || row[0].next != z || row[0].prob != 1.0) {
        out.push_back("sink is not absorbing");
        break;
      }
      for (int i = 0; i < game.num_players(); ++i) {
        if (game.reward(i, z, a) != 0.0) {
          out.push_back("sink has nonzero reward");
          return out;
        }
      }
    }
  }
  return out;
}

std::vector<std::string> CheckTurnBased(const FiniteHorizonGame& game,
                                        const TurnBasedAnnotation& annotation) {
  std::vector<std::string> out;
  CheckAnnotationShape(annotation, game.num_states(), game.num_players(), &out);
  if (!out.empty()) return out;
  for (int h = 0; h < game.horizon(); ++h) {
    CheckTurnBasedLayer(
        game.joint_space(), game.num_states(), annotation,
        [&](int s, int a) -> const TransitionRow& {
          return game.transition(h, s, a);
        },
        [&](int i, int s, int a) { return game.reward(i, h, s, a); }, h, &out);
  }
  return out;
}

namespace {

void ThrowIfAny(const std::vector<std::string>& violations) {
  if (violations.empty()) return;
  std::string msg = "invalid game: " + violations.front();
  if (violations.size() > 1) {
    msg += " (and " + std::to_string(violations.size() - 1) + " more)";
  }
  throw InputError(msg);
}

}  // namespace

void RequireValid(const FiniteHorizonGame& game) {
  ThrowIfAny(ValidateGame(game));
}

void RequireValid(const DiscountedGame& game) {
  ThrowIfAny(ValidateGame(game));
}

}  // namespace mel
