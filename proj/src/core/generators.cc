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

#include "mel/core/generators.h"

#include <algorithm>
#include <cmath>

#include "mel/core/errors.h"

namespace mel {
namespace {

double RandomReward(Rng& rng) { return 2.0 * rng.Uniform() - 1.0; }

// Fills one table layer. `set_row(s, a, row)` and `set_reward(i, s, a, r)`
// write into the target game.
template <typename SetRow, typename SetReward>
void FillLayer(GameFamily family, const JointActionSpace& space, int num_states,
               const std::vector<int>& controller, Rng& rng, SetRow set_row,
               SetReward set_reward) {
  const int m = space.num_players();
  for (int s = 0; s < num_states; ++s) {
    if (family == GameFamily::kTurnBased) {
      const int c = controller[s];
      for (int b = 0; b < space.num_actions(c); ++b) {
        const TransitionRow row =
            DenseToRow(RandomDistribution(num_states, rng));
        std::vector<double> rewards(m);
        for (int i = 0; i < m; ++i) rewards[i] = RandomReward(rng);
        for (int a = 0; a < space.size(); ++a) {
          if (space.ActionOf(a, c) != b) continue;
          set_row(s, a, row);
          for (int i = 0; i < m; ++i) set_reward(i, s, a, rewards[i]);
        }
      }
      continue;
    }
    for (int a = 0; a < space.size(); ++a) {
      if (family == GameFamily::kUniform) {
        set_row(s, a, DenseToRow(RandomDistribution(num_states, rng)));
      } else {
        const double advance = rng.Uniform();
        const int next = std::min(s + 1, num_states - 1);
        std::vector<double> dense(num_states, 0.0);
        dense[next] += advance;
        dense[0] += 1.0 - advance;
        set_row(s, a, DenseToRow(dense));
      }
      for (int i = 0; i < m; ++i) set_reward(i, s, a, RandomReward(rng));
    }
  }
}

std::vector<int> RandomControllers(int num_states, int num_players, Rng& rng) {
  std::vector<int> controller(num_states);
  for (int& c : controller) c = rng.UniformInt(num_players);
  return controller;
}

std::vector<double> InitialDistribution(GameFamily family, int num_states,
                                        Rng& rng) {
  if (family == GameFamily::kChain) {
    std::vector<double> mu(num_states, 0.0);
    mu[0] = 1.0;
    return mu;
  }
  return RandomDistribution(num_states, rng);
}

}  // namespace

GameFamily ParseGameFamily(std::string_view name) {
  if (name == "uniform") return GameFamily::kUniform;
  if (name == "chain") return GameFamily::kChain;
  if (name == "turn-based") return GameFamily::kTurnBased;
  throw InputError("unknown game family: " + std::string(name));
}

std::string GameFamilyName(GameFamily family) {
  switch (family) {
    case GameFamily::kUniform:
      return "uniform";
    case GameFamily::kChain:
      return "chain";
    case GameFamily::kTurnBased:
      return "turn-based";
  }
  return "unknown";
}

std::vector<double> RandomDistribution(int n, Rng& rng) {
  std::vector<double> p(n);
  double total = 0.0;
  for (double& x : p) {
    x = -std::log(1.0 - rng.Uniform());
    total += x;
  }
  for (double& x : p) x /= total;
  return p;
}

FiniteHorizonGame RandomFiniteGame(GameFamily family, int num_states,
                                   const std::vector<int>& action_counts,
                                   int horizon, Rng& rng,
                                   TurnBasedAnnotation* annotation) {
  FiniteHorizonGame game(num_states, action_counts, horizon);
  std::vector<int> controller;
  if (family == GameFamily::kTurnBased) {
    controller = RandomControllers(num_states, game.num_players(), rng);
    if (annotation != nullptr) annotation->controller = controller;
  }
  for (int h = 0; h < horizon; ++h) {
    FillLayer(
        family, game.joint_space(), num_states, controller, rng,
        [&](int s, int a, const TransitionRow& row) {
          game.set_transition(h, s, a, row);
        },
        [&](int i, int s, int a, double r) { game.set_reward(i, h, s, a, r); });
  }
  game.set_mu(InitialDistribution(family, num_states, rng));
  return game;
}

DiscountedGame RandomDiscountedGame(GameFamily family, int num_states,
                                    const std::vector<int>& action_counts,
                                    double gamma, Rng& rng,
                                    TurnBasedAnnotation* annotation) {
  DiscountedGame game(num_states, action_counts, gamma);
  std::vector<int> controller;
  if (family == GameFamily::kTurnBased) {
    controller = RandomControllers(num_states, game.num_players(), rng);
    if (annotation != nullptr) annotation->controller = controller;
  }
  FillLayer(
      family, game.joint_space(), num_states, controller, rng,
      [&](int s, int a, const TransitionRow& row) {
        game.set_transition(s, a, row);
      },
      [&](int i, int s, int a, double r) { game.set_reward(i, s, a, r); });
  game.set_mu(InitialDistribution(family, num_states, rng));
  return game;
}

NonstationaryJointPolicy RandomNonstationaryPolicy(
    const JointActionSpace& space, int horizon, int num_states, Rng& rng) {
  NonstationaryJointPolicy policy(horizon, num_states);
  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < num_states; ++s) {
      const int k = 1 + rng.UniformInt(std::min(3, space.size()));
      std::vector<int> profiles;
      while (static_cast<int>(profiles.size()) < k) {
        const int a = rng.UniformInt(space.size());
        if (std::find(profiles.begin(), profiles.end(), a) == profiles.end()) {
          profiles.push_back(a);
        }
      }
      const std::vector<double> w = RandomDistribution(k, rng);
      std::vector<WeightedProfile> mixture;
      for (int j = 0; j < k; ++j) mixture.push_back({profiles[j], w[j]});
      policy.set_cell(h, s, std::move(mixture));
    }
  }
  return policy;
}

StationaryPolicy RandomStationaryPolicy(const JointActionSpace& space,
                                        int num_states, Rng& rng) {
  StationaryPolicy policy(num_states, space.size());
  for (int s = 0; s < num_states; ++s) {
    policy.mutable_at(s) = RandomDistribution(space.size(), rng);
  }
  return policy;
}

ProductPolicy RandomProductPolicy(const JointActionSpace& space, int num_states,
                                  Rng& rng) {
  ProductPolicy policy(space, num_states);
  for (int i = 0; i < space.num_players(); ++i) {
    for (int s = 0; s < num_states; ++s) {
      policy.mutable_at(i, s) = RandomDistribution(space.num_actions(i), rng);
    }
  }
  return policy;
}

}  // namespace mel
