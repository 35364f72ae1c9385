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

#ifndef MEL_GCIRCUIT_IO_H_
#define MEL_GCIRCUIT_IO_H_

#include <span>
#include <vector>

#include "json.hpp"
#include "mel/gcircuit/circuit.h"
#include "mel/gcircuit/compile.h"

namespace mel {

// Circuit document:
//   {"nodes": [name, ...],
//    "gates": [{"kind": k, "params": [...], "inputs": [name, ...],
//               "output": name}, ...]}
// "params" and "inputs" may be omitted when empty. Throws InputError on
// unknown names or kinds. Gate ranges are checked by ValidateCircuit.
nlohmann::json CircuitToJson(const GeneralizedCircuit& circuit);
GeneralizedCircuit CircuitFromJson(const nlohmann::json& doc);

// Node-value documents (colorings and assignments): {name: value, ...}.
// Reading throws InputError when a node of the circuit has no value or a
// name is unknown.
nlohmann::json NodeValuesToJson(const GeneralizedCircuit& circuit,
                                std::span<const double> values);
std::vector<double> NodeValuesFromJson(const GeneralizedCircuit& circuit,
                                       const nlohmann::json& doc);

// The sg-core game document of the compiled game with a "meta" block:
//   {"node_map": {name: state}, "helper_map": [{"gate", "kind", "state"}],
//    "constants": [{"gate", "kind", "alpha", "psi", "beta"}],
//    "sink", "construction_gamma", "epsilon", "eps_prime", "state_names"}.
nlohmann::json CompiledGameToJson(const CompiledGame& compiled);

}  // namespace mel

#endif  // MEL_GCIRCUIT_IO_H_
