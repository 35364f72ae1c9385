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

#ifndef MEL_GCIRCUIT_COMPILE_H_
#define MEL_GCIRCUIT_COMPILE_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mel/core/game.h"
#include "mel/core/policy.h"
#include "mel/gcircuit/circuit.h"

namespace mel {

// Players of a compiled game. Actions are {0, 1} for both.
inline constexpr int kVertexPlayer = 0;  // Controls circuit nodes and sink.
inline constexpr int kHelperPlayer = 1;  // Controls helper states.

struct CompileOptions {
  // Target gate accuracy; must lie in (0, 1).
  double epsilon = 0.0;
  // Discount; defaults to epsilon^2.
  std::optional<double> gamma;
  // Unimprovability level; defaults to epsilon^4.
  std::optional<double> eps_prime;
};

// Per-gate gadget data. Unused fields hold 0; helper is -1 for Assign.
struct GadgetEmbedding {
  GateKind kind;
  int helper = -1;  // Helper state w_G.
  double alpha = 0.0;
  double psi = 0.0;
  double beta = 0.0;
};

// States 0..|V|-1 are the circuit nodes in order, then one helper state per
// MulAdd or Less gate in gate order, then the sink.
struct CompiledGame {
  DiscountedGame game{1, {2, 2}, 0.0};
  TurnBasedAnnotation annotation;
  int num_nodes = 0;
  int sink = 0;
  // Discount used to scale the rewards. The game's own discount differs
  // after RescaleToHalfDiscount.
  double gamma = 0.0;
  double epsilon = 0.0;
  double eps_prime = 0.0;
  std::vector<std::string> state_names;
  std::vector<GadgetEmbedding> gadgets;  // Per gate.
  // Gate that set the outgoing transitions of each state, or -1 when the
  // state kept the default move to the sink.
  std::vector<int> transition_writer;
};

// Builds the 2-player turn-based game: zero rewards and moves to the sink,
// then r_helper(v, 1) = phi(v) / (1 - gamma) for every node, then one gadget
// per gate (Assign, MulAdd with constants alpha, psi, beta derived from phi
// and the coefficients, Less with beta = phi(v1)). Throws InputError when the
// circuit is not normalized, the coloring is invalid, a reward leaves
// [-1, 1], or a MulAdd or Less gate is present and
// gamma min|phi| epsilon - 2 gamma^2 <= eps_prime. Throws
// SolverError if a state's transitions would be written twice.
CompiledGame Compile(const GeneralizedCircuit& circuit,
                     std::span<const double> phi,
                     const CompileOptions& options);

// Same states, actions and rewards with discount 1/2 and
// P'(s'|s, a) = 2 gamma P(s'|s, a) off the sink, the remaining mass on the
// sink. Unnormalized values coincide: V / (1 - gamma) = V' / (1/2). Throws
// InputError when gamma > 1/2 or the sink index is out of range.
DiscountedGame RescaleToHalfDiscount(const DiscountedGame& game, int sink);
CompiledGame RescaleToHalfDiscount(const CompiledGame& compiled);

// Gap max_b Q(s, b) - min over supported b of Q(s, b) of the controller of
// each state under the binary-action turn-based policy p1 (the probability
// that the controller plays 1). Q is the normalized action value.
std::vector<double> UnimprovableGaps(const DiscountedGame& game,
                                     const TurnBasedAnnotation& annotation,
                                     std::span<const double> p1);
double UnimprovableGap(const DiscountedGame& game,
                       const TurnBasedAnnotation& annotation,
                       std::span<const double> p1, int s);

// Probability that the controller of each state plays action 1.
std::vector<double> ControllerProbabilities(
    const DiscountedGame& game, const TurnBasedAnnotation& annotation,
    const StationaryPolicy& policy);

// The policy restricted to the circuit-node states.
std::vector<double> ExtractAssignment(const CompiledGame& compiled,
                                      std::span<const double> p1);
std::vector<double> ExtractAssignment(const CompiledGame& compiled,
                                      const StationaryPolicy& policy);

}  // namespace mel

#endif  // MEL_GCIRCUIT_COMPILE_H_
