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

#include "mel/core/io.h"

#include <fstream>
#include <sstream>

#include "mel/core/errors.h"

namespace mel {
namespace {

using nlohmann::json;

constexpr int kDenseRowLimit = 64;

json RowToJson(const TransitionRow& row, int num_states) {
  if (num_states <= kDenseRowLimit) return RowToDense(row, num_states);
  json next = json::array();
  json prob = json::array();
  for (const Transition& t : row) {
    next.push_back(t.next);
    prob.push_back(t.prob);
  }
  return json{{"next", next}, {"prob", prob}};
}

TransitionRow RowFromJson(const json& doc, int num_states) {
  if (doc.is_array()) {
    if (static_cast<int>(doc.size()) != num_states) {
      throw InputError("transition vector has wrong length");
    }
    return DenseToRow(doc.get<std::vector<double>>());
  }
  const std::vector<int> next = doc.at("next").get<std::vector<int>>();
  const std::vector<double> prob = doc.at("prob").get<std::vector<double>>();
  if (next.size() != prob.size()) {
    throw InputError("sparse transition arrays differ in length");
  }
  TransitionRow row;
  for (size_t k = 0; k < next.size(); ++k) {
    if (next[k] < 0 || next[k] >= num_states) {
      throw InputError("sparse transition target out of range");
    }
    row.push_back({next[k], prob[k]});
  }
  return row;
}

void RequireSize(const json& doc, size_t n, const char* what) {
  if (!doc.is_array() || doc.size() != n) {
    throw InputError(std::string(what) + " has wrong shape");
  }
}

void WriteAnnotation(const TurnBasedAnnotation* annotation, json* doc) {
  if (annotation == nullptr) return;
  (*doc)["controller"] = annotation->controller;
  if (annotation->sink) (*doc)["sink"] = *annotation->sink;
}

}  // namespace

json GameToJson(const FiniteHorizonGame& game,
                const TurnBasedAnnotation* annotation) {
  const int H = game.horizon();
  const int S = game.num_states();
  const int A = game.num_joint_actions();
  json doc;
  doc["players"] = game.num_players();
  doc["states"] = S;
  doc["actions"] = game.action_counts();
  doc["horizon"] = H;
  doc["mu"] = game.mu();
  json transitions = json::array();
  for (int h = 0; h < H; ++h) {
    json layer = json::array();
    for (int s = 0; s < S; ++s) {
      json cell = json::array();
      for (int a = 0; a < A; ++a) {
        cell.push_back(RowToJson(game.transition(h, s, a), S));
      }
      layer.push_back(std::move(cell));
    }
    transitions.push_back(std::move(layer));
  }
  doc["transitions"] = std::move(transitions);
  json rewards = json::array();
  for (int i = 0; i < game.num_players(); ++i) {
    json per_player = json::array();
    for (int h = 0; h < H; ++h) {
      json layer = json::array();
      for (int s = 0; s < S; ++s) {
        std::vector<double> row(A);
        for (int a = 0; a < A; ++a) row[a] = game.reward(i, h, s, a);
        layer.push_back(row);
      }
      per_player.push_back(std::move(layer));
    }
    rewards.push_back(std::move(per_player));
  }
  doc["rewards"] = std::move(rewards);
  WriteAnnotation(annotation, &doc);
  return doc;
}

json GameToJson(const DiscountedGame& game,
                const TurnBasedAnnotation* annotation) {
  const int S = game.num_states();
  const int A = game.num_joint_actions();
  json doc;
  doc["players"] = game.num_players();
  doc["states"] = S;
  doc["actions"] = game.action_counts();
  doc["gamma"] = game.gamma();
  doc["mu"] = game.mu();
  json transitions = json::array();
  for (int s = 0; s < S; ++s) {
    json cell = json::array();
    for (int a = 0; a < A; ++a) {
      cell.push_back(RowToJson(game.transition(s, a), S));
    }
    transitions.push_back(std::move(cell));
  }
  doc["transitions"] = std::move(transitions);
  json rewards = json::array();
  for (int i = 0; i < game.num_players(); ++i) {
    json per_player = json::array();
    for (int s = 0; s < S; ++s) {
      std::vector<double> row(A);
      for (int a = 0; a < A; ++a) row[a] = game.reward(i, s, a);
      per_player.push_back(row);
    }
    rewards.push_back(std::move(per_player));
  }
  doc["rewards"] = std::move(rewards);
  WriteAnnotation(annotation, &doc);
  return doc;
}

const JointActionSpace& LoadedGame::joint_space() const {
  return finite() ? finite_game().joint_space()
                  : discounted_game().joint_space();
}

int LoadedGame::num_states() const {
  return finite() ? finite_game().num_states()
                  : discounted_game().num_states();
}

LoadedGame GameFromJson(const json& doc) {
  try {
    const int m = doc.at("players").get<int>();
    const int S = doc.at("states").get<int>();
    const std::vector<int> actions = doc.at("actions").get<std::vector<int>>();
    if (static_cast<int>(actions.size()) != m) {
      throw InputError("actions list length differs from player count");
    }
    if (doc.contains("horizon") == doc.contains("gamma")) {
      throw InputError("exactly one of horizon and gamma is required");
    }
    std::optional<TurnBasedAnnotation> annotation;
    if (doc.contains("controller")) {
      TurnBasedAnnotation ann;
      ann.controller = doc.at("controller").get<std::vector<int>>();
      if (doc.contains("sink")) ann.sink = doc.at("sink").get<int>();
      annotation = ann;
    }
    const json meta = doc.value("meta", json::object());
    const json& transitions = doc.at("transitions");
    const json& rewards = doc.at("rewards");
    RequireSize(rewards, m, "rewards");
    if (doc.contains("horizon")) {
      const int H = doc.at("horizon").get<int>();
      FiniteHorizonGame game(S, actions, H);
      const int A = game.num_joint_actions();
      RequireSize(transitions, H, "transitions");
      for (int h = 0; h < H; ++h) {
        RequireSize(transitions[h], S, "transitions");
        for (int s = 0; s < S; ++s) {
          RequireSize(transitions[h][s], A, "transitions");
          for (int a = 0; a < A; ++a) {
            game.set_transition(h, s, a, RowFromJson(transitions[h][s][a], S));
          }
        }
      }
      for (int i = 0; i < m; ++i) {
        RequireSize(rewards[i], H, "rewards");
        for (int h = 0; h < H; ++h) {
          RequireSize(rewards[i][h], S, "rewards");
          for (int s = 0; s < S; ++s) {
            RequireSize(rewards[i][h][s], A, "rewards");
            for (int a = 0; a < A; ++a) {
              game.set_reward(i, h, s, a, rewards[i][h][s][a].get<double>());
            }
          }
        }
      }
      game.set_mu(doc.at("mu").get<std::vector<double>>());
      return LoadedGame{std::move(game), annotation, meta};
    }
    DiscountedGame game(S, actions, doc.at("gamma").get<double>());
    const int A = game.num_joint_actions();
    RequireSize(transitions, S, "transitions");
    for (int s = 0; s < S; ++s) {
      RequireSize(transitions[s], A, "transitions");
      for (int a = 0; a < A; ++a) {
        game.set_transition(s, a, RowFromJson(transitions[s][a], S));
      }
    }
    for (int i = 0; i < m; ++i) {
      RequireSize(rewards[i], S, "rewards");
      for (int s = 0; s < S; ++s) {
        RequireSize(rewards[i][s], A, "rewards");
        for (int a = 0; a < A; ++a) {
          game.set_reward(i, s, a, rewards[i][s][a].get<double>());
        }
      }
    }
    game.set_mu(doc.at("mu").get<std::vector<double>>());
    return LoadedGame{std::move(game), annotation, meta};
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed game document: ") + e.what());
  }
}

json PolicyToJson(const NonstationaryJointPolicy& policy,
                  const JointActionSpace& space) {
  json doc;
  doc["type"] = "nonstationary";
  doc["horizon"] = policy.horizon();
  doc["states"] = policy.num_states();
  json cells = json::array();
  for (int h = 0; h < policy.horizon(); ++h) {
    json layer = json::array();
    for (int s = 0; s < policy.num_states(); ++s) {
      json profiles = json::array();
      json weights = json::array();
      for (const WeightedProfile& wp : policy.cell(h, s)) {
        profiles.push_back(space.Decode(wp.joint));
        weights.push_back(wp.weight);
      }
      layer.push_back({{"profiles", profiles},
                       {"weights", weights},
                       {"recorded", policy.recorded_count(h, s)}});
    }
    cells.push_back(std::move(layer));
  }
  doc["cells"] = std::move(cells);
  return doc;
}

json PolicyToJson(const StationaryPolicy& policy) {
  json doc;
  doc["type"] = "stationary";
  doc["states"] = policy.num_states();
  json dists = json::array();
  for (int s = 0; s < policy.num_states(); ++s) dists.push_back(policy.at(s));
  doc["distributions"] = std::move(dists);
  return doc;
}

AnyPolicy PolicyFromJson(const json& doc, const JointActionSpace& space,
                         const TurnBasedAnnotation* annotation) {
  try {
    const std::string type = doc.at("type").get<std::string>();
    if (type == "nonstationary") {
      const int H = doc.at("horizon").get<int>();
      const int S = doc.at("states").get<int>();
      NonstationaryJointPolicy policy(H, S);
      const json& cells = doc.at("cells");
      RequireSize(cells, H, "policy cells");
      for (int h = 0; h < H; ++h) {
        RequireSize(cells[h], S, "policy cells");
        for (int s = 0; s < S; ++s) {
          const json& cell = cells[h][s];
          const json& profiles = cell.at("profiles");
          const std::vector<double> weights =
              cell.at("weights").get<std::vector<double>>();
          if (profiles.size() != weights.size()) {
            throw InputError("profiles and weights differ in length");
          }
          std::vector<WeightedProfile> mixture;
          for (size_t k = 0; k < weights.size(); ++k) {
            mixture.push_back(
                {space.Encode(profiles[k].get<std::vector<int>>()),
                 weights[k]});
          }
          policy.set_cell(h, s, std::move(mixture),
                          cell.value("recorded", -1));
        }
      }
      return policy;
    }
    if (type == "stationary") {
      if (doc.contains("controller_probabilities")) {
        if (annotation == nullptr) {
          throw InputError("controller probabilities need a turn-based game");
        }
        const std::vector<double> p1 =
            doc.at("controller_probabilities").get<std::vector<double>>();
        return StationaryPolicy::FromControllerProbabilities(
            space, annotation->controller, p1);
      }
      const json& dists = doc.at("distributions");
      const int S = doc.value("states", static_cast<int>(dists.size()));
      RequireSize(dists, S, "distributions");
      StationaryPolicy policy(S, space.size());
      for (int s = 0; s < S; ++s) {
        RequireSize(dists[s], space.size(), "distribution");
        policy.mutable_at(s) = dists[s].get<std::vector<double>>();
      }
      return policy;
    }
    throw InputError("unknown policy type: " + type);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed policy document: ") + e.what());
  }
}

json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("cannot parse " + path + ": " + e.what());
  }
}

void WriteJsonFile(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << doc.dump(1) << "\n";
}

}  // namespace mel
