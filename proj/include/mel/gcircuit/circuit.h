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

#ifndef MEL_GCIRCUIT_CIRCUIT_H_
#define MEL_GCIRCUIT_CIRCUIT_H_

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mel {

// Base kinds survive normalization; the rest are extended kinds that
// NormalizeCircuit rewrites into base gates.
enum class GateKind {
  kAssign,      // params {zeta in {0, 1}}; no inputs.
  kMulAdd,      // params {xi, zeta in [-1, 1]}; inputs {v1, v2}.
  kLess,        // no params; inputs {v1, v2}.
  kMul,         // params {zeta in [-2, 2]}; inputs {v1}.
  kEq,          // inputs {v1}.
  kPlus,        // inputs {v1, v2}.
  kMinus,       // inputs {v1, v2}.
  kOr,          // inputs {v1, v2}.
  kAnd,         // inputs {v1, v2}.
  kNot,         // inputs {v1}.
  kAssignReal,  // params {zeta in [0, 1]}; no inputs.
};

// Accepts assign, muladd, less, mul, eq, plus, minus, or, and, not,
// assign_real.
GateKind ParseGateKind(std::string_view name);
std::string GateKindName(GateKind kind);
bool IsBaseKind(GateKind kind);

struct Gate {
  GateKind kind;
  std::vector<double> params;
  std::vector<int> inputs;  // Node indices; v1 may equal v2.
  int output;               // Node index.
};

// Named nodes and gates over them. Node indices are positions in `nodes`.
class GeneralizedCircuit {
 public:
  GeneralizedCircuit() = default;

  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_gates() const { return static_cast<int>(gates_.size()); }
  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::string& node_name(int v) const { return nodes_[v]; }
  const std::vector<Gate>& gates() const { return gates_; }
  const Gate& gate(int g) const { return gates_[g]; }

  // Throws InputError on a duplicate name.
  int AddNode(const std::string& name);
  // Adds `base` or, if taken, `base` followed by the first free "~k" suffix.
  int AddFreshNode(const std::string& base);
  // Index of `name`, or -1.
  int FindNode(std::string_view name) const;
  // Throws InputError when `name` is unknown.
  int NodeIndex(std::string_view name) const;

  void AddGate(Gate gate) { gates_.push_back(std::move(gate)); }

  // Convenience builders for base gates.
  void Assign(double zeta, int out) {
    AddGate({GateKind::kAssign, {zeta}, {}, out});
  }
  void MulAdd(double xi, double zeta, int v1, int v2, int out) {
    AddGate({GateKind::kMulAdd, {xi, zeta}, {v1, v2}, out});
  }
  void Less(int v1, int v2, int out) {
    AddGate({GateKind::kLess, {}, {v1, v2}, out});
  }

 private:
  std::vector<std::string> nodes_;
  std::unordered_map<std::string, int> index_;
  std::vector<Gate> gates_;
};

// Empty iff every gate has the arity and parameter ranges of its kind, all
// node indices are in range, and no two gates share an output node.
std::vector<std::string> ValidateCircuit(const GeneralizedCircuit& circuit);

// True iff only base gates remain and every node is the output of exactly
// one gate.
bool IsNormalized(const GeneralizedCircuit& circuit);

// Rewrites extended gates into base gates and gives every node that is not
// the output of a gate an Assign(1) gate. Supplementary nodes are named
// "g<index>.u<k>" after the rewritten gate's index. Node indices of the input
// circuit are preserved. Throws InputError when ValidateCircuit fails.
GeneralizedCircuit NormalizeCircuit(const GeneralizedCircuit& circuit);

// max{min{x, 1}, 0}.
double Clip01(double x);

struct AssignmentCheck {
  std::vector<bool> satisfied;  // Per gate.
  int num_satisfied = 0;
  double fraction = 1.0;  // Satisfied gates over all gates; 1 when empty.
};

// Per-gate epsilon-satisfaction of a normalized circuit:
//  Assign(zeta || v):      pi(v) == zeta exactly.
//  MulAdd(xi, zeta | ...): |pi(v3) - Clip01(xi pi(v1) + zeta pi(v2))| <= eps.
//  Less(| v1, v2 | v3):    pi(v3) >= 1 - eps if pi(v1) <= pi(v2) - eps,
//                          pi(v3) <= eps if pi(v1) >= pi(v2) + eps,
//                          unconstrained otherwise.
// The MulAdd and Less output bounds allow 1e-12 of rounding slack. Throws
// InputError on a length mismatch or a value outside [0, 1], UsageError on
// extended gates.
AssignmentCheck CheckAssignment(const GeneralizedCircuit& circuit,
                                std::span<const double> assignment, double eps);

}  // namespace mel

#endif  // MEL_GCIRCUIT_CIRCUIT_H_
