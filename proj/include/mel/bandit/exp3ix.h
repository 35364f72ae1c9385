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

#ifndef MEL_BANDIT_EXP3IX_H_
#define MEL_BANDIT_EXP3IX_H_

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "mel/core/rng.h"

namespace mel {

struct BanditDraw {
  int arm;
  double prob;  // Probability the arm had when it was drawn.
};

// Exp3 with implicit exploration (Exp3-IX). Arm probabilities are the
// softmax of the log-weights -eta * L_b, where L_b accumulates the estimates
// loss / (p_b + ix) of the arm b pulled in each round.
//
// Invariants: round() <= horizon_cap(); cumulative estimates are finite and
// nonnegative; the log-weights have maximum exactly 0 after every update.
class Exp3Ix {
 public:
  Exp3Ix() = default;
  // Explicit rates. Requires num_arms >= 1, horizon_cap >= 1, eta >= 0 and
  // ix >= 0.
  Exp3Ix(int num_arms, int64_t horizon_cap, double delta, double eta,
         double ix);

  // Rates eta = sqrt(2 ln B / (B T0)) and ix = eta / 2. The first
  // distribution is uniform.
  static Exp3Ix Init(int num_arms, int64_t horizon_cap, double delta);

  int num_arms() const { return static_cast<int>(log_weights_.size()); }
  int64_t round() const { return round_; }
  int64_t horizon_cap() const { return horizon_cap_; }
  double delta() const { return delta_; }
  double eta() const { return eta_; }
  double ix() const { return ix_; }
  const std::vector<double>& log_weights() const { return log_weights_; }
  const std::vector<double>& cumulative_estimates() const {
    return cumulative_;
  }

  // Current sampling distribution.
  std::vector<double> Probabilities() const;

  // Draws an arm. Throws UsageError when round() == horizon_cap() or a
  // previous draw is still awaiting its update.
  BanditDraw Sample(Rng& rng);

  // Feeds back the loss of the last sampled arm. Throws UsageError when the
  // arm differs from that draw or loss lies outside [0, 1].
  void Update(int arm, double loss);

  // The importance-weighted implicit-exploration estimate of one round.
  static double Estimate(double loss, double prob, double ix) {
    return loss / (prob + ix);
  }

  nlohmann::json ToJson() const;
  static Exp3Ix FromJson(const nlohmann::json& doc);

 private:
  int64_t horizon_cap_ = 1;
  double delta_ = 0.0;
  double eta_ = 0.0;
  double ix_ = 0.0;
  int64_t round_ = 0;
  std::vector<double> log_weights_;
  std::vector<double> cumulative_;
  int pending_arm_ = -1;
  double pending_prob_ = 0.0;
};

}  // namespace mel

#endif  // MEL_BANDIT_EXP3IX_H_
