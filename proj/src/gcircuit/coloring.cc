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

#include "mel/gcircuit/coloring.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mel/core/errors.h"

namespace mel {
namespace {

constexpr double kRelTol = 1e-12;

bool Close(double x, double y) {
  return std::abs(x - y) <= kRelTol * std::max({1.0, std::abs(x), std::abs(y)});
}

}  // namespace

double ColorRatio(double x) {
  if (std::abs(x) >= 0.5) return 2.0 * x;
  return x < 0.0 ? -1.0 : 1.0;
}

ColoringCheck CheckColoring(const GeneralizedCircuit& circuit,
                            std::span<const double> phi) {
  if (static_cast<int>(phi.size()) != circuit.num_nodes()) {
    throw InputError("coloring does not cover every node");
  }
  ColoringCheck check;
  for (int g = 0; g < circuit.num_gates(); ++g) {
    const Gate& gate = circuit.gate(g);
    bool ok = true;
    switch (gate.kind) {
      case GateKind::kAssign:
        break;
      case GateKind::kLess:
        ok = Close(phi[gate.inputs[0]], phi[gate.inputs[1]]);
        break;
      case GateKind::kMulAdd: {
        const double beta = phi[gate.output];
        if (beta == 0.0) {
          throw InputError("gate " + std::to_string(g) +
                           " has a zero color on its output");
        }
        ok = Close(phi[gate.inputs[0]], ColorRatio(gate.params[0]) * beta) &&
             Close(phi[gate.inputs[1]], ColorRatio(gate.params[1]) * beta);
        break;
      }
      default:
        throw UsageError("gate " + std::to_string(g) +
                         " is not a base gate");
    }
    check.gate_valid.push_back(ok);
    if (!ok) {
      check.valid = false;
      check.violations.push_back("gate " + std::to_string(g) + " (" +
                                 GateKindName(gate.kind) +
                                 ") violates the color ratios");
    }
  }
  return check;
}

bool ColoringInRange(std::span<const double> phi) {
  return std::all_of(phi.begin(), phi.end(), [](double x) {
    return std::abs(x) >= 0.25 && std::abs(x) <= 0.5;
  });
}

int ChainLength(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InputError("eps must lie in (0, 1)");
  // Largest power of 2 not exceeding 4 / sqrt(eps).
  const double bound = 4.0 / std::sqrt(eps);
  int n = 1;
  while (2.0 * n <= bound * (1.0 + 1e-12)) n *= 2;
  return n;
}

int ChainNodeCount(double eps) {
  const int n = ChainLength(eps);
  return 1 + 2 * n + (n - 1);
}

ColoredCircuit MakeValidColoring(const GeneralizedCircuit& circuit,
                                 double eps) {
  if (!IsNormalized(circuit)) {
    throw InputError("make_valid_coloring needs a normalized circuit");
  }
  ColoredCircuit out;
  out.chain_length = ChainLength(eps);
  out.num_original_nodes = circuit.num_nodes();
  out.num_original_gates = circuit.num_gates();
  const int n = out.chain_length;
  const double step = 4.0 / n;  // eps'

  GeneralizedCircuit& c = out.circuit;
  std::vector<double>& phi = out.phi;
  for (const std::string& name : circuit.nodes()) c.AddNode(name);
  phi.assign(circuit.num_nodes(), 0.25);
  auto add = [&](const std::string& name, double color) {
    const int v = c.AddFreshNode(name);
    phi.push_back(color);
    return v;
  };

  // Chain gates go after the original gates, so collect them separately.
  std::vector<Gate> chain_gates;
  auto chain = [&](int a, int target, const std::string& prefix) {
    const double pa = phi[a];
    const double pt = phi[target];
    const int sigma = add(prefix + ".sigma", pa);
    chain_gates.push_back({GateKind::kAssign, {1.0}, {}, sigma});
    std::vector<int> level;
    for (int k = 1; k <= n; ++k) {
      const std::string ks = std::to_string(k);
      const int sk = add(prefix + ".s" + ks, pa);
      const int bk = add(prefix + ".b" + ks, pt);
      const double coef = k * step / 8.0;
      chain_gates.push_back({GateKind::kMulAdd, {coef, coef}, {sigma, sigma},
                             sk});
      chain_gates.push_back({GateKind::kLess, {}, {sk, a}, bk});
      level.push_back(bk);
    }
    for (int depth = 1; level.size() > 1; ++depth) {
      std::vector<int> next;
      for (size_t j = 0; j + 1 < level.size(); j += 2) {
        const int d = add(prefix + ".d" + std::to_string(depth) + "_" +
                              std::to_string(j / 2 + 1),
                          pt);
        chain_gates.push_back(
            {GateKind::kMulAdd, {0.5, 0.5}, {level[j], level[j + 1]}, d});
        next.push_back(d);
      }
      level = std::move(next);
    }
    chain_gates.push_back(
        {GateKind::kMulAdd, {0.5, 0.5}, {level[0], level[0]}, target});
    out.chains.push_back({a, target});
  };

  for (int g = 0; g < circuit.num_gates(); ++g) {
    Gate gate = circuit.gate(g);
    if (gate.kind == GateKind::kMulAdd) {
      std::vector<int> fresh;
      for (int slot = 0; slot < 2; ++slot) {
        const std::string prefix = "g" + std::to_string(g) + ".in" +
                                   std::to_string(slot + 1);
        const int target =
            add(prefix, ColorRatio(gate.params[slot]) * 0.25);
        chain(gate.inputs[slot], target, prefix);
        fresh.push_back(target);
      }
      gate.inputs = fresh;
    }
    c.AddGate(std::move(gate));
  }
  for (Gate& gate : chain_gates) c.AddGate(std::move(gate));
  return out;
}

}  // namespace mel
