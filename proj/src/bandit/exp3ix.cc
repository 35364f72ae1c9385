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

#include "mel/bandit/exp3ix.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "mel/core/errors.h"

namespace mel {

Exp3Ix::Exp3Ix(int num_arms, int64_t horizon_cap, double delta, double eta,
               double ix)
    : horizon_cap_(horizon_cap),
      delta_(delta),
      eta_(eta),
      ix_(ix),
      log_weights_(std::max(num_arms, 0), 0.0),
      cumulative_(std::max(num_arms, 0), 0.0) {
  if (num_arms < 1) throw InputError("a bandit needs at least one arm");
  if (horizon_cap < 1) throw InputError("bandit horizon must be positive");
  if (!(eta >= 0.0) || !(ix >= 0.0)) {
    throw InputError("bandit rates must be nonnegative");
  }
}

Exp3Ix Exp3Ix::Init(int num_arms, int64_t horizon_cap, double delta) {
  if (num_arms < 1) throw InputError("a bandit needs at least one arm");
  if (horizon_cap < 1) throw InputError("bandit horizon must be positive");
  const double eta = std::sqrt(2.0 * std::log(static_cast<double>(num_arms)) /
                               (static_cast<double>(num_arms) * horizon_cap));
  return Exp3Ix(num_arms, horizon_cap, delta, eta, eta / 2.0);
}

std::vector<double> Exp3Ix::Probabilities() const {
  // Log-weights are normalized to max 0, so every exponent is <= 0 and the
  // largest term is exactly 1.
  std::vector<double> p(log_weights_.size());
  double total = 0.0;
  for (size_t b = 0; b < p.size(); ++b) {
    p[b] = std::exp(log_weights_[b]);
    total += p[b];
  }
  for (double& x : p) x /= total;
  return p;
}

BanditDraw Exp3Ix::Sample(Rng& rng) {
  if (round_ >= horizon_cap_) {
    throw UsageError("bandit sampled beyond its horizon of " +
                     std::to_string(horizon_cap_) + " rounds");
  }
  if (pending_arm_ >= 0) {
    throw UsageError("bandit sampled twice without an update");
  }
  const std::vector<double> p = Probabilities();
  const int arm = num_arms() == 1 ? 0 : rng.Categorical(p);
  pending_arm_ = arm;
  pending_prob_ = p[arm];
  return {arm, p[arm]};
}

void Exp3Ix::Update(int arm, double loss) {
  if (pending_arm_ < 0 || arm != pending_arm_) {
    throw UsageError("bandit update does not match the last sampled arm");
  }
  if (!(loss >= 0.0 && loss <= 1.0)) {
    throw UsageError("bandit loss " + std::to_string(loss) +
                     " outside [0, 1]");
  }
  const double estimate = Estimate(loss, pending_prob_, ix_);
  cumulative_[arm] += estimate;
  log_weights_[arm] -= eta_ * estimate;
  const double top =
      *std::max_element(log_weights_.begin(), log_weights_.end());
  for (double& w : log_weights_) w -= top;
  pending_arm_ = -1;
  ++round_;
}

nlohmann::json Exp3Ix::ToJson() const {
  return {{"arms", num_arms()},          {"round", round_},
          {"horizon_cap", horizon_cap_}, {"delta", delta_},
          {"eta", eta_},                 {"ix", ix_},
          {"log_weights", log_weights_}, {"cumulative", cumulative_}};
}

Exp3Ix Exp3Ix::FromJson(const nlohmann::json& doc) {
  try {
    Exp3Ix state(doc.at("arms").get<int>(),
                 doc.at("horizon_cap").get<int64_t>(),
                 doc.at("delta").get<double>(), doc.at("eta").get<double>(),
                 doc.at("ix").get<double>());
    state.round_ = doc.at("round").get<int64_t>();
    state.log_weights_ = doc.at("log_weights").get<std::vector<double>>();
    state.cumulative_ = doc.at("cumulative").get<std::vector<double>>();
    if (static_cast<int>(state.log_weights_.size()) != doc.at("arms") ||
        state.cumulative_.size() != state.log_weights_.size() ||
        state.round_ < 0 || state.round_ > state.horizon_cap_) {
      throw InputError("inconsistent bandit state");
    }
    return state;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed bandit state: ") + e.what());
  }
}

}  // namespace mel
