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

#include "mel/gcircuit/circuit.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "mel/core/errors.h"

namespace mel {
namespace {

// Rounding slack for comparisons against eps.
constexpr double kSlack = 1e-12;

struct KindInfo {
  GateKind kind;
  const char* name;
  int num_params;
  int num_inputs;
  double lo;  // Parameter range, shared by all params of the kind.
  double hi;
};

constexpr std::array<KindInfo, 11> kKinds = {{
    {GateKind::kAssign, "assign", 1, 0, 0.0, 1.0},
    {GateKind::kMulAdd, "muladd", 2, 2, -1.0, 1.0},
    {GateKind::kLess, "less", 0, 2, 0.0, 0.0},
    {GateKind::kMul, "mul", 1, 1, -2.0, 2.0},
    {GateKind::kEq, "eq", 0, 1, 0.0, 0.0},
    {GateKind::kPlus, "plus", 0, 2, 0.0, 0.0},
    {GateKind::kMinus, "minus", 0, 2, 0.0, 0.0},
    {GateKind::kOr, "or", 0, 2, 0.0, 0.0},
    {GateKind::kAnd, "and", 0, 2, 0.0, 0.0},
    {GateKind::kNot, "not", 0, 1, 0.0, 0.0},
    {GateKind::kAssignReal, "assign_real", 1, 0, 0.0, 1.0},
}};

const KindInfo& Info(GateKind kind) {
  for (const KindInfo& info : kKinds) {
    if (info.kind == kind) return info;
  }
  throw InputError("unknown gate kind");
}

std::string GateLabel(int g, const Gate& gate) {
  return "gate " + std::to_string(g) + " (" + GateKindName(gate.kind) + ")";
}

}  // namespace

GateKind ParseGateKind(std::string_view name) {
  for (const KindInfo& info : kKinds) {
    if (name == info.name) return info.kind;
  }
  throw InputError("unknown gate kind: " + std::string(name));
}

std::string GateKindName(GateKind kind) { return Info(kind).name; }

bool IsBaseKind(GateKind kind) {
  return kind == GateKind::kAssign || kind == GateKind::kMulAdd ||
         kind == GateKind::kLess;
}

int GeneralizedCircuit::AddNode(const std::string& name) {
  if (index_.count(name)) throw InputError("duplicate node name: " + name);
  const int v = num_nodes();
  index_.emplace(name, v);
  nodes_.push_back(name);
  return v;
}

int GeneralizedCircuit::AddFreshNode(const std::string& base) {
  if (!index_.count(base)) return AddNode(base);
  for (int k = 1;; ++k) {
    const std::string name = base + "~" + std::to_string(k);
    if (!index_.count(name)) return AddNode(name);
  }
}

int GeneralizedCircuit::FindNode(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? -1 : it->second;
}

int GeneralizedCircuit::NodeIndex(std::string_view name) const {
  const int v = FindNode(name);
  if (v < 0) throw InputError("unknown node: " + std::string(name));
  return v;
}

std::vector<std::string> ValidateCircuit(const GeneralizedCircuit& circuit) {
  std::vector<std::string> out;
  const int n = circuit.num_nodes();
  std::vector<int> writer(n, -1);
  for (int g = 0; g < circuit.num_gates(); ++g) {
    const Gate& gate = circuit.gate(g);
    const KindInfo& info = Info(gate.kind);
    const std::string label = GateLabel(g, gate);
    if (static_cast<int>(gate.params.size()) != info.num_params) {
      out.push_back(label + " needs " + std::to_string(info.num_params) +
                    " parameters");
      continue;
    }
    if (static_cast<int>(gate.inputs.size()) != info.num_inputs) {
      out.push_back(label + " needs " + std::to_string(info.num_inputs) +
                    " inputs");
      continue;
    }
    for (double p : gate.params) {
      if (!(p >= info.lo && p <= info.hi)) {
        std::ostringstream msg;
        msg << label << " parameter " << p << " outside [" << info.lo << ", "
            << info.hi << "]";
        out.push_back(msg.str());
      }
    }
    if (gate.kind == GateKind::kAssign && gate.params[0] != 0.0 &&
        gate.params[0] != 1.0) {
      out.push_back(label + " constant must be 0 or 1");
    }
    bool indices_ok = gate.output >= 0 && gate.output < n;
    for (int v : gate.inputs) indices_ok = indices_ok && v >= 0 && v < n;
    if (!indices_ok) {
      out.push_back(label + " refers to a node out of range");
      continue;
    }
    if (writer[gate.output] >= 0) {
      out.push_back("gates " + std::to_string(writer[gate.output]) + " and " +
                    std::to_string(g) + " share output node " +
                    circuit.node_name(gate.output));
    } else {
      writer[gate.output] = g;
    }
  }
  return out;
}

bool IsNormalized(const GeneralizedCircuit& circuit) {
  if (!ValidateCircuit(circuit).empty()) return false;
  std::vector<int> count(circuit.num_nodes(), 0);
  for (const Gate& gate : circuit.gates()) {
    if (!IsBaseKind(gate.kind)) return false;
    ++count[gate.output];
  }
  return std::all_of(count.begin(), count.end(),
                     [](int c) { return c == 1; });
}

GeneralizedCircuit NormalizeCircuit(const GeneralizedCircuit& circuit) {
  const std::vector<std::string> violations = ValidateCircuit(circuit);
  if (!violations.empty()) {
    throw InputError("invalid circuit: " + violations.front());
  }
  GeneralizedCircuit out;
  for (const std::string& name : circuit.nodes()) out.AddNode(name);
  for (int g = 0; g < circuit.num_gates(); ++g) {
    const Gate& gate = circuit.gate(g);
    const std::string prefix = "g" + std::to_string(g) + ".u";
    auto fresh = [&](int k) {
      return out.AddFreshNode(prefix + std::to_string(k));
    };
    const int v3 = gate.output;
    const int v1 = gate.inputs.empty() ? -1 : gate.inputs[0];
    const int v2 = gate.inputs.size() < 2 ? -1 : gate.inputs[1];
    switch (gate.kind) {
      case GateKind::kAssign:
      case GateKind::kMulAdd:
      case GateKind::kLess:
        out.AddGate(gate);
        break;
      case GateKind::kMul:
        out.MulAdd(gate.params[0] / 2, gate.params[0] / 2, v1, v1, v3);
        break;
      case GateKind::kEq:
        out.MulAdd(0.5, 0.5, v1, v1, v3);
        break;
      case GateKind::kPlus:
        out.MulAdd(1.0, 1.0, v1, v2, v3);
        break;
      case GateKind::kMinus:
        out.MulAdd(1.0, -1.0, v1, v2, v3);
        break;
      case GateKind::kOr:
      case GateKind::kAnd: {
        // Threshold 1/4 (or) or 3/4 (and) on the mean of the inputs.
        const double t = gate.kind == GateKind::kOr ? 0.125 : 0.375;
        const int u1 = fresh(1);
        const int u2 = fresh(2);
        const int u3 = fresh(3);
        out.MulAdd(0.5, 0.5, v1, v2, u1);
        out.Assign(1.0, u2);
        out.MulAdd(t, t, u2, u2, u3);
        out.Less(u3, u1, v3);
        break;
      }
      case GateKind::kNot: {
        const int u1 = fresh(1);
        out.Assign(1.0, u1);
        out.MulAdd(1.0, -1.0, u1, v1, v3);
        break;
      }
      case GateKind::kAssignReal: {
        const int u1 = fresh(1);
        out.Assign(1.0, u1);
        out.MulAdd(gate.params[0] / 2, gate.params[0] / 2, u1, u1, v3);
        break;
      }
    }
  }
  std::vector<bool> written(out.num_nodes(), false);
  for (const Gate& gate : out.gates()) written[gate.output] = true;
  for (int v = 0; v < static_cast<int>(written.size()); ++v) {
    if (!written[v]) out.Assign(1.0, v);
  }
  return out;
}

double Clip01(double x) { return std::max(std::min(x, 1.0), 0.0); }

AssignmentCheck CheckAssignment(const GeneralizedCircuit& circuit,
                                std::span<const double> assignment,
                                double eps) {
  if (static_cast<int>(assignment.size()) != circuit.num_nodes()) {
    throw InputError("assignment does not cover every node");
  }
  for (int v = 0; v < circuit.num_nodes(); ++v) {
    if (!(assignment[v] >= 0.0 && assignment[v] <= 1.0)) {
      throw InputError("assignment value outside [0, 1] at node " +
                       circuit.node_name(v));
    }
  }
  AssignmentCheck check;
  check.satisfied.reserve(circuit.num_gates());
  for (int g = 0; g < circuit.num_gates(); ++g) {
    const Gate& gate = circuit.gate(g);
    const double out = assignment[gate.output];
    bool ok = false;
    switch (gate.kind) {
      case GateKind::kAssign:
        ok = out == gate.params[0];
        break;
      case GateKind::kMulAdd: {
        const double target =
            Clip01(gate.params[0] * assignment[gate.inputs[0]] +
                   gate.params[1] * assignment[gate.inputs[1]]);
        ok = std::abs(out - target) <= eps + kSlack;
        break;
      }
      case GateKind::kLess: {
        const double x = assignment[gate.inputs[0]];
        const double y = assignment[gate.inputs[1]];
        ok = true;
        if (x <= y - eps) ok = ok && out >= 1.0 - eps - kSlack;
        if (x >= y + eps) ok = ok && out <= eps + kSlack;
        break;
      }
      default:
        throw UsageError(GateLabel(g, gate) + " is not a base gate");
    }
    check.satisfied.push_back(ok);
    if (ok) ++check.num_satisfied;
  }
  if (circuit.num_gates() > 0) {
    check.fraction =
        static_cast<double>(check.num_satisfied) / circuit.num_gates();
  }
  return check;
}

}  // namespace mel
