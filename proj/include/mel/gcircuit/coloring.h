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

#ifndef MEL_GCIRCUIT_COLORING_H_
#define MEL_GCIRCUIT_COLORING_H_

#include <span>
#include <string>
#include <vector>

#include "mel/gcircuit/circuit.h"

namespace mel {

// Required ratio phi(input) / phi(output) under a MulAdd coefficient x:
// 2x when |x| >= 1/2, sign(x) otherwise, with sign(0) = +1.
double ColorRatio(double x);

struct ColoringCheck {
  bool valid = true;
  std::vector<bool> gate_valid;  // Per gate.
  std::vector<std::string> violations;
};

// Assign gates are always valid. Less(| v1, v2 | v3) needs phi(v1) = phi(v2).
// MulAdd(xi, zeta | v1, v2 | v3) needs phi(v1) = ColorRatio(xi) phi(v3) and
// phi(v2) = ColorRatio(zeta) phi(v3). Equalities allow a relative error of
// 1e-12. Throws InputError when phi has the wrong length or phi(v3) = 0 under
// a MulAdd gate, UsageError on extended gates.
ColoringCheck CheckColoring(const GeneralizedCircuit& circuit,
                            std::span<const double> phi);

// True iff every |phi(v)| lies in [1/4, 1/2].
bool ColoringInRange(std::span<const double> phi);

// Number n = 4 / eps' of comparison steps in one identity chain, where eps'
// is the smallest value >= sqrt(eps) with 4 / eps' a power of 2. Requires
// 0 < eps < 1.
int ChainLength(double eps);

// Nodes one identity chain adds besides its output: sigma, n sigma_k, n b_k
// and the n - 1 averaging nodes.
int ChainNodeCount(double eps);

struct ColoredCircuit {
  // Original nodes keep their indices and original gates keep their
  // positions; chain nodes and gates follow.
  GeneralizedCircuit circuit;
  std::vector<double> phi;
  int num_original_nodes = 0;
  int num_original_gates = 0;
  int chain_length = 0;
  // Output node a' of every chain, with the original node a it copies.
  std::vector<std::pair<int, int>> chains;  // {a, a'}
};

// Colors every original node 1/4. Each MulAdd(xi, zeta | v1, v2 | v3) is
// rewired to fresh inputs v1', v2' colored ColorRatio(xi) / 4 and
// ColorRatio(zeta) / 4; each fresh input a' is fed from its original a by an
// identity chain of ChainLength(eps) comparisons against multiples of eps'/4
// averaged by a binary tree. Chain nodes are named "g<gate>.in<slot>..."
// after the rewired gate. Throws InputError unless the circuit is normalized
// and 0 < eps < 1.
ColoredCircuit MakeValidColoring(const GeneralizedCircuit& circuit,
                                 double eps);

}  // namespace mel

#endif  // MEL_GCIRCUIT_COLORING_H_
