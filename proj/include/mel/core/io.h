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

#ifndef MEL_CORE_IO_H_
#define MEL_CORE_IO_H_

#include <optional>
#include <string>
#include <variant>

#include "json.hpp"
#include "mel/core/game.h"
#include "mel/core/policy.h"

namespace mel {

// Game document:
//   {"players": m, "states": S, "actions": [A_1, ...],
//    "horizon": H | "gamma": g, "mu": [...],
//    "transitions": [h][s][a] (finite) or [s][a] (discounted),
//    "rewards": [i][h][s][a] (finite) or [i][s][a] (discounted),
//    optional "controller": [...], "sink": z, "meta": {...}}
// Each transition entry is a dense probability vector, or the sparse form
// {"next": [...], "prob": [...]} which is written when S exceeds 64.
nlohmann::json GameToJson(const FiniteHorizonGame& game,
                          const TurnBasedAnnotation* annotation = nullptr);
nlohmann::json GameToJson(const DiscountedGame& game,
                          const TurnBasedAnnotation* annotation = nullptr);

struct LoadedGame {
  std::variant<FiniteHorizonGame, DiscountedGame> game;
  std::optional<TurnBasedAnnotation> annotation;
  nlohmann::json meta;

  bool finite() const { return game.index() == 0; }
  const FiniteHorizonGame& finite_game() const {
    return std::get<FiniteHorizonGame>(game);
  }
  const DiscountedGame& discounted_game() const {
    return std::get<DiscountedGame>(game);
  }
  const JointActionSpace& joint_space() const;
  int num_states() const;
};

// Throws InputError on structural problems. Table invariants are not checked
// here; see ValidateGame.
LoadedGame GameFromJson(const nlohmann::json& doc);

// Policy documents:
//   {"type": "nonstationary", "horizon": H, "states": S,
//    "cells": [h][s] = {"profiles": [[a_1, ..., a_m], ...],
//                       "weights": [...], "recorded": J}}
//   {"type": "stationary", "states": S, "distributions": [s][a]}
//   {"type": "stationary", "controller_probabilities": [p_s, ...]}
nlohmann::json PolicyToJson(const NonstationaryJointPolicy& policy,
                            const JointActionSpace& space);
nlohmann::json PolicyToJson(const StationaryPolicy& policy);

using AnyPolicy = std::variant<NonstationaryJointPolicy, StationaryPolicy>;

// The controller-probability form needs the game's annotation.
AnyPolicy PolicyFromJson(const nlohmann::json& doc,
                         const JointActionSpace& space,
                         const TurnBasedAnnotation* annotation = nullptr);

nlohmann::json ReadJsonFile(const std::string& path);
void WriteJsonFile(const std::string& path, const nlohmann::json& doc);

}  // namespace mel

#endif  // MEL_CORE_IO_H_
