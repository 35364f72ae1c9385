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

#ifndef MEL_TESTS_CIRCUIT_UTIL_H_
#define MEL_TESTS_CIRCUIT_UTIL_H_

#include <algorithm>
#include <string>
#include <vector>

#include "mel/core/rng.h"
#include "mel/gcircuit/circuit.h"
#include "mel/gcircuit/coloring.h"

namespace mel::testing {

// Normalized circuit on nodes n0..n{G-1} where gate g outputs node g. Kinds
// are Assign, MulAdd and Less with probabilities 0.2, 0.4, 0.4; inputs are
// uniform over all nodes and MulAdd coefficients uniform on [-1, 1].
inline GeneralizedCircuit RandomNormalizedCircuit(int num_gates, Rng& rng) {
  GeneralizedCircuit c;
  for (int g = 0; g < num_gates; ++g) c.AddNode("n" + std::to_string(g));
  for (int g = 0; g < num_gates; ++g) {
    const double u = rng.Uniform();
    if (u < 0.2) {
      c.Assign(rng.UniformInt(2), g);
    } else if (u < 0.6) {
      const double xi = 2.0 * rng.Uniform() - 1.0;
      const double zeta = 2.0 * rng.Uniform() - 1.0;
      c.MulAdd(xi, zeta, rng.UniformInt(num_gates), rng.UniformInt(num_gates),
               g);
    } else {
      c.Less(rng.UniformInt(num_gates), rng.UniformInt(num_gates), g);
    }
  }
  return c;
}

// Fills the chain nodes of a colored circuit from the values of the original
// nodes, gate by gate in order. Every chain gate is satisfied at level eps
// but otherwise adversarial: MulAdd outputs are shifted by up to eps and
// unforced Less outputs are arbitrary. Original gates are not checked.
inline std::vector<double> AdversarialChainAssignment(
    const ColoredCircuit& colored, const std::vector<double>& original,
    double eps, Rng& rng) {
  std::vector<double> x(colored.circuit.num_nodes(), 0.0);
  std::copy(original.begin(), original.end(), x.begin());
  const auto& gates = colored.circuit.gates();
  for (int g = colored.num_original_gates; g < colored.circuit.num_gates();
       ++g) {
    const Gate& gate = gates[g];
    double& out = x[gate.output];
    switch (gate.kind) {
      case GateKind::kAssign:
        out = gate.params[0];
        break;
      case GateKind::kMulAdd: {
        const double exact = gate.params[0] * x[gate.inputs[0]] +
                             gate.params[1] * x[gate.inputs[1]];
        out = Clip01(exact + eps * (2.0 * rng.Uniform() - 1.0));
        break;
      }
      case GateKind::kLess: {
        const double v1 = x[gate.inputs[0]];
        const double v2 = x[gate.inputs[1]];
        if (v1 <= v2 - eps) {
          out = 1.0 - eps * rng.Uniform();
        } else if (v1 >= v2 + eps) {
          out = eps * rng.Uniform();
        } else {
          out = rng.Uniform();
        }
        break;
      }
      default:
        break;
    }
  }
  return x;
}

}  // namespace mel::testing

#endif  // MEL_TESTS_CIRCUIT_UTIL_H_
