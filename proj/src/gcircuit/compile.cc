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

#include "mel/gcircuit/compile.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "mel/core/dp.h"
#include "mel/core/errors.h"
#include "mel/gcircuit/coloring.h"

namespace mel {
namespace {

constexpr double kConsistencyTol = 1e-12;

// Outgoing rows and per-player rewards indexed by the controller's action.
struct StateSpec {
  std::array<TransitionRow, 2> rows;
  std::array<std::array<double, 2>, 2> reward{};  // reward[i][b]
};

// Merges repeated targets and drops zero entries.
TransitionRow MakeRow(std::initializer_list<Transition> entries) {
  TransitionRow row;
  for (const Transition& t : entries) {
    if (t.prob == 0.0) continue;
    auto it = std::find_if(row.begin(), row.end(), [&](const Transition& x) {
      return x.next == t.next;
    });
    if (it == row.end()) {
      row.push_back(t);
    } else {
      it->prob += t.prob;
    }
  }
  return row;
}

std::string Fmt(double x) {
  std::ostringstream out;
  out << x;
  return out.str();
}

void RequireSink(const DiscountedGame& game, int sink) {
  if (sink < 0 || sink >= game.num_states()) {
    throw InputError("sink index out of range");
  }
  for (int a = 0; a < game.num_joint_actions(); ++a) {
    const TransitionRow& row = game.transition(sink, a);
    if (row.size() != 1 || row[0].next != sink || row[0].prob != 1.0) {
      throw InputError("sink is not absorbing");
    }
    for (int i = 0; i < game.num_players(); ++i) {
      if (game.reward(i, sink, a) != 0.0) {
        throw InputError("sink has nonzero reward");
      }
    }
  }
}

}  // namespace

CompiledGame Compile(const GeneralizedCircuit& circuit,
                     std::span<const double> phi,
                     const CompileOptions& options) {
  if (!IsNormalized(circuit)) {
    throw InputError("compile needs a normalized circuit");
  }
  const ColoringCheck coloring = CheckColoring(circuit, phi);
  if (!coloring.valid) {
    throw InputError("invalid coloring: " + coloring.violations.front());
  }
  const double eps = options.epsilon;
  if (!(eps > 0.0 && eps < 1.0)) throw InputError("epsilon must lie in (0, 1)");
  const double gamma = options.gamma.value_or(eps * eps);
  const double eps_prime = options.eps_prime.value_or(eps * eps * eps * eps);
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw InputError("gamma must lie in (0, 1)");
  }
  if (!(eps_prime > 0.0)) throw InputError("eps_prime must be positive");
  const int n = circuit.num_nodes();
  double beta0 = 1.0;
  for (double x : phi) beta0 = std::min(beta0, std::abs(x));
  // The inequality constrains the helper gadgets only; Assign gadgets need
  // nothing beyond gamma < 1.
  bool has_helper = false;
  for (const Gate& gate : circuit.gates()) {
    has_helper = has_helper || gate.kind != GateKind::kAssign;
  }
  if (has_helper && !(gamma * beta0 * eps - 2.0 * gamma * gamma > eps_prime)) {
    throw InputError("gamma " + Fmt(gamma) + ", epsilon " + Fmt(eps) +
                     " and eps_prime " + Fmt(eps_prime) +
                     " violate gamma min|phi| epsilon - 2 gamma^2 > eps_prime");
  }

  CompiledGame out;
  out.num_nodes = n;
  out.gamma = gamma;
  out.epsilon = eps;
  out.eps_prime = eps_prime;
  out.state_names = circuit.nodes();
  out.gadgets.resize(circuit.num_gates());
  for (int g = 0; g < circuit.num_gates(); ++g) {
    const Gate& gate = circuit.gate(g);
    out.gadgets[g].kind = gate.kind;
    if (gate.kind != GateKind::kAssign) {
      out.gadgets[g].helper = static_cast<int>(out.state_names.size());
      out.state_names.push_back("w[g" + std::to_string(g) + "]");
    }
  }
  const int sink = static_cast<int>(out.state_names.size());
  out.state_names.push_back("sink");
  out.sink = sink;
  const int num_states = sink + 1;

  std::vector<StateSpec> tables(num_states);
  for (StateSpec& st : tables)
    st.rows = {MakeRow({{sink, 1.0}}), MakeRow({{sink, 1.0}})};
  const double scale = 1.0 / (1.0 - gamma);
  for (int v = 0; v < n; ++v)
    tables[v].reward[kHelperPlayer][1] = phi[v] * scale;

  out.transition_writer.assign(num_states, -1);
  auto claim = [&](int s, int g) {
    if (out.transition_writer[s] >= 0) {
      throw SolverError("state " + out.state_names[s] +
                        " is written by gates " +
                        std::to_string(out.transition_writer[s]) + " and " +
                        std::to_string(g));
    }
    out.transition_writer[s] = g;
  };

  for (int g = 0; g < circuit.num_gates(); ++g) {
    const Gate& gate = circuit.gate(g);
    GadgetEmbedding& emb = out.gadgets[g];
    const int w = emb.helper;
    switch (gate.kind) {
      case GateKind::kAssign: {
        const int v = gate.output;
        const double b = gate.params[0];
        claim(v, g);
        tables[v].reward[kVertexPlayer][1] = b;
        tables[v].reward[kVertexPlayer][0] = 1.0 - b;
        break;
      }
      case GateKind::kMulAdd: {
        const double xi = gate.params[0];
        const double zeta = gate.params[1];
        const int v1 = gate.inputs[0];
        const int v2 = gate.inputs[1];
        const int v3 = gate.output;
        const double beta = phi[v3];
        const double alpha =
            std::abs(xi) >= 0.5 ? phi[v1] : phi[v1] * 2.0 * std::abs(xi);
        const double psi =
            std::abs(zeta) >= 0.5 ? phi[v2] : phi[v2] * 2.0 * std::abs(zeta);
        // The node rewards already hold alpha max{1, |beta| / |alpha|} and
        // its psi counterpart; validity of phi guarantees this.
        auto lifted = [&](double c) {
          if (std::abs(c) >= std::abs(beta)) return c;
          return (c < 0.0 ? -1.0 : 1.0) * std::abs(beta);
        };
        if (std::abs(lifted(alpha) - phi[v1]) > kConsistencyTol ||
            std::abs(lifted(psi) - phi[v2]) > kConsistencyTol) {
          throw SolverError("gate " + std::to_string(g) +
                            " constants disagree with the coloring");
        }
        if (v1 == v2 && alpha != psi) {
          throw InputError("gate " + std::to_string(g) +
                           " repeats an input with unequal coefficients");
        }
        emb.alpha = alpha;
        emb.psi = psi;
        emb.beta = beta;
        const double p1 =
            std::min(0.5, std::abs(alpha) / (2.0 * std::abs(beta)));
        const double p2 = std::min(0.5, std::abs(psi) / (2.0 * std::abs(beta)));
        claim(v3, g);
        claim(w, g);
        tables[w].rows[0] =
            MakeRow({{v1, p1}, {v2, p2}, {sink, 1.0 - p1 - p2}});
        tables[w].rows[1] = MakeRow({{v3, 1.0}});
        tables[v3].rows[0] = MakeRow({{w, 1.0}});
        tables[v3].rows[1] = MakeRow({{sink, 1.0}});
        tables[w].reward[kVertexPlayer][1] = beta * scale;
        tables[w].reward[kVertexPlayer][0] = -beta * scale;
        break;
      }
      case GateKind::kLess: {
        const int v1 = gate.inputs[0];
        const int v2 = gate.inputs[1];
        const int v3 = gate.output;
        const double beta = phi[v1];
        emb.beta = beta;
        claim(v3, g);
        claim(w, g);
        tables[w].rows[0] = MakeRow({{v1, 1.0}});
        tables[w].rows[1] = MakeRow({{v2, 1.0}});
        tables[v3].rows[1] = MakeRow({{w, 1.0}});
        tables[v3].rows[0] = MakeRow({{sink, 1.0}});
        tables[w].reward[kVertexPlayer][1] = beta * scale;
        tables[w].reward[kVertexPlayer][0] = -beta * scale;
        break;
      }
      default:
        throw InputError("compile needs base gates only");
    }
  }

  out.annotation.controller.assign(num_states, kVertexPlayer);
  for (const GadgetEmbedding& emb : out.gadgets) {
    if (emb.helper >= 0) out.annotation.controller[emb.helper] = kHelperPlayer;
  }
  out.annotation.sink = sink;

  DiscountedGame game(num_states, {2, 2}, gamma);
  const JointActionSpace& space = game.joint_space();
  for (int s = 0; s < num_states; ++s) {
    const int c = out.annotation.controller[s];
    for (int i = 0; i < 2; ++i) {
      for (int b = 0; b < 2; ++b) {
        const double r = tables[s].reward[i][b];
        if (!(std::abs(r) <= 1.0)) {
          throw InputError("reward " + Fmt(r) + " at state " +
                           out.state_names[s] + " leaves [-1, 1]");
        }
      }
    }
    if (s == sink)
      tables[s].rows = {MakeRow({{sink, 1.0}}), MakeRow({{sink, 1.0}})};
    for (int a = 0; a < space.size(); ++a) {
      const int b = space.ActionOf(a, c);
      game.set_transition(s, a, tables[s].rows[b]);
      for (int i = 0; i < 2; ++i)
        game.set_reward(i, s, a, tables[s].reward[i][b]);
    }
  }
  out.game = std::move(game);
  return out;
}

DiscountedGame RescaleToHalfDiscount(const DiscountedGame& game, int sink) {
  const double gamma = game.gamma();
  if (!(gamma >= 0.0 && gamma <= 0.5)) {
    throw InputError("rescaling needs gamma <= 1/2, got " + Fmt(gamma));
  }
  RequireSink(game, sink);
  const double factor = 2.0 * gamma;
  DiscountedGame out(game.num_states(), game.action_counts(), 0.5);
  out.set_mu(game.mu());
  for (int s = 0; s < game.num_states(); ++s) {
    for (int a = 0; a < game.num_joint_actions(); ++a) {
      for (int i = 0; i < game.num_players(); ++i) {
        out.set_reward(i, s, a, game.reward(i, s, a));
      }
      if (s == sink) {
        out.set_transition(s, a, game.transition(s, a));
        continue;
      }
      TransitionRow row;
      double kept = 0.0;
      for (const Transition& t : game.transition(s, a)) {
        if (t.next == sink) continue;
        row.push_back({t.next, factor * t.prob});
        kept += factor * t.prob;
      }
      // The sink absorbs its own scaled mass plus the freed 1 - 2 gamma.
      const double rest = std::max(0.0, 1.0 - kept);
      if (rest > 0.0) row.push_back({sink, rest});
      out.set_transition(s, a, std::move(row));
    }
  }
  return out;
}

CompiledGame RescaleToHalfDiscount(const CompiledGame& compiled) {
  CompiledGame out = compiled;
  out.game = RescaleToHalfDiscount(compiled.game, compiled.sink);
  return out;
}

std::vector<double> UnimprovableGaps(const DiscountedGame& game,
                                     const TurnBasedAnnotation& annotation,
                                     std::span<const double> p1) {
  const JointActionSpace& space = game.joint_space();
  const StationaryPolicy policy = StationaryPolicy::FromControllerProbabilities(
      space, annotation.controller, p1);
  const DiscountedEvaluation eval = ExactValue(game, policy);
  std::vector<double> gaps(game.num_states());
  for (int s = 0; s < game.num_states(); ++s) {
    const int c = annotation.controller[s];
    const double q0 = eval.Q(c, s, space.Replace(0, c, 0));
    const double q1 = eval.Q(c, s, space.Replace(0, c, 1));
    double worst = std::max(q0, q1);
    if (p1[s] > 0.0) worst = std::min(worst, q1);
    if (p1[s] < 1.0) worst = std::min(worst, q0);
    gaps[s] = std::max(q0, q1) - worst;
  }
  return gaps;
}

double UnimprovableGap(const DiscountedGame& game,
                       const TurnBasedAnnotation& annotation,
                       std::span<const double> p1, int s) {
  if (s < 0 || s >= game.num_states()) throw InputError("state out of range");
  return UnimprovableGaps(game, annotation, p1)[s];
}

std::vector<double> ControllerProbabilities(
    const DiscountedGame& game, const TurnBasedAnnotation& annotation,
    const StationaryPolicy& policy) {
  RequireValidPolicy(policy, game.joint_space(), game.num_states());
  if (static_cast<int>(annotation.controller.size()) != game.num_states()) {
    throw InputError("controller map has wrong length");
  }
  std::vector<double> p1(game.num_states());
  for (int s = 0; s < game.num_states(); ++s) {
    const int c = annotation.controller[s];
    if (game.joint_space().num_actions(c) != 2) {
      throw InputError("controller probabilities need binary actions");
    }
    const std::vector<double> m = Marginal(game.joint_space(), policy.at(s), c);
    p1[s] = std::clamp(m[1], 0.0, 1.0);
  }
  return p1;
}

std::vector<double> ExtractAssignment(const CompiledGame& compiled,
                                      std::span<const double> p1) {
  if (static_cast<int>(p1.size()) != compiled.game.num_states()) {
    throw InputError("policy does not cover every state");
  }
  std::vector<double> assignment(p1.begin(), p1.begin() + compiled.num_nodes);
  for (double& x : assignment) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw InputError("policy probability outside [0, 1]");
    }
  }
  return assignment;
}

std::vector<double> ExtractAssignment(const CompiledGame& compiled,
                                      const StationaryPolicy& policy) {
  return ExtractAssignment(
      compiled,
      ControllerProbabilities(compiled.game, compiled.annotation, policy));
}

}  // namespace mel
