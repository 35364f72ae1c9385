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

#include "mel/gcircuit/io.h"

#include <string>

#include "mel/core/errors.h"
#include "mel/core/io.h"

namespace mel {

using nlohmann::json;

json CircuitToJson(const GeneralizedCircuit& circuit) {
  json gates = json::array();
  for (const Gate& gate : circuit.gates()) {
    json inputs = json::array();
    for (int v : gate.inputs) inputs.push_back(circuit.node_name(v));
    gates.push_back({{"kind", GateKindName(gate.kind)},
                     {"params", gate.params},
                     {"inputs", std::move(inputs)},
                     {"output", circuit.node_name(gate.output)}});
  }
  return json{{"nodes", circuit.nodes()}, {"gates", std::move(gates)}};
}

GeneralizedCircuit CircuitFromJson(const json& doc) {
  try {
    GeneralizedCircuit circuit;
    for (const json& name : doc.at("nodes")) {
      circuit.AddNode(name.get<std::string>());
    }
    for (const json& g : doc.at("gates")) {
      Gate gate{ParseGateKind(g.at("kind").get<std::string>()),
                g.value("params", std::vector<double>{}),
                {},
                circuit.NodeIndex(g.at("output").get<std::string>())};
      for (const json& name : g.value("inputs", json::array())) {
        gate.inputs.push_back(circuit.NodeIndex(name.get<std::string>()));
      }
      circuit.AddGate(std::move(gate));
    }
    return circuit;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed circuit document: ") + e.what());
  }
}

json NodeValuesToJson(const GeneralizedCircuit& circuit,
                      std::span<const double> values) {
  if (static_cast<int>(values.size()) != circuit.num_nodes()) {
    throw InputError("value list does not match the node count");
  }
  json doc = json::object();
  for (int v = 0; v < circuit.num_nodes(); ++v) {
    doc[circuit.node_name(v)] = values[v];
  }
  return doc;
}

std::vector<double> NodeValuesFromJson(const GeneralizedCircuit& circuit,
                                       const json& doc) {
  if (!doc.is_object()) throw InputError("node values must be an object");
  std::vector<double> values(circuit.num_nodes(), 0.0);
  std::vector<bool> seen(circuit.num_nodes(), false);
  try {
    for (const auto& [name, value] : doc.items()) {
      const int v = circuit.NodeIndex(name);
      values[v] = value.get<double>();
      seen[v] = true;
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed node values: ") + e.what());
  }
  for (int v = 0; v < circuit.num_nodes(); ++v) {
    if (!seen[v]) throw InputError("missing value for node " +
                                   circuit.node_name(v));
  }
  return values;
}

json CompiledGameToJson(const CompiledGame& compiled) {
  json doc = GameToJson(compiled.game, &compiled.annotation);
  json node_map = json::object();
  for (int v = 0; v < compiled.num_nodes; ++v) {
    node_map[compiled.state_names[v]] = v;
  }
  json helpers = json::array();
  json constants = json::array();
  for (int g = 0; g < static_cast<int>(compiled.gadgets.size()); ++g) {
    const GadgetEmbedding& emb = compiled.gadgets[g];
    const std::string kind = GateKindName(emb.kind);
    if (emb.helper >= 0) {
      helpers.push_back({{"gate", g}, {"kind", kind}, {"state", emb.helper}});
    }
    if (emb.kind == GateKind::kMulAdd) {
      constants.push_back({{"gate", g},
                           {"kind", kind},
                           {"alpha", emb.alpha},
                           {"psi", emb.psi},
                           {"beta", emb.beta}});
    } else if (emb.kind == GateKind::kLess) {
      constants.push_back({{"gate", g}, {"kind", kind}, {"beta", emb.beta}});
    }
  }
  doc["meta"] = {{"node_map", std::move(node_map)},
                 {"helper_map", std::move(helpers)},
                 {"constants", std::move(constants)},
                 {"sink", compiled.sink},
                 {"construction_gamma", compiled.gamma},
                 {"epsilon", compiled.epsilon},
                 {"eps_prime", compiled.eps_prime},
                 {"state_names", compiled.state_names}};
  return doc;
}

}  // namespace mel
