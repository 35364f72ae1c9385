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

// Acceptance harness: one PASS/FAIL line per criterion, each at its stated
// tolerance. Exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "circuit_util.h"
#include "mel/bandit/exp3ix.h"
#include "mel/core/dp.h"
#include "mel/core/equilibrium.h"
#include "mel/core/game.h"
#include "mel/core/generators.h"
#include "mel/core/policy.h"
#include "mel/core/rng.h"
#include "mel/core/transforms.h"
#include "mel/gcircuit/circuit.h"
#include "mel/gcircuit/coloring.h"
#include "mel/gcircuit/compile.h"
#include "mel/spocmar/learner.h"
#include "mel/spocmar/params.h"
#include "oracles.h"

namespace mel {
namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

// 1. Best response against brute-force enumeration; exact values against
// Monte Carlo at 1e5 episodes within 3 standard errors.
Outcome Criterion1() {
  double worst_br = 0.0;
  int mc_total = 0, mc_fail = 0;
  double worst_z = 0.0;
  Rng sizes(1);
  for (int g = 0; g < 100; ++g) {
    const int S = 1 + sizes.UniformInt(3);
    const int H = 1 + sizes.UniformInt(2);
    const int m = 1 + sizes.UniformInt(2);
    std::vector<int> actions(m);
    for (int& a : actions) a = 1 + sizes.UniformInt(2);
    Rng rng(DeriveSeed(10, g));
    const FiniteHorizonGame game =
        RandomFiniteGame(GameFamily::kUniform, S, actions, H, rng);
    const NonstationaryJointPolicy pi =
        RandomNonstationaryPolicy(game.joint_space(), H, S, rng);
    const FiniteValueTable v = ExactValue(game, pi);
    for (int i = 0; i < m; ++i) {
      const FiniteBestResponse br = BestResponse(game, pi, i);
      const std::vector<double> brute = oracle::BruteBestResponse(game, pi, i);
      for (int h = 0; h < H; ++h) {
        for (int s = 0; s < S; ++s) {
          worst_br =
              std::max(worst_br, std::abs(br.value(h, s) - brute[h * S + s]));
        }
      }
      worst_br =
          std::max(worst_br, std::abs(br.Expect(0, game.mu()) - brute.back()));

      Rng mc_rng(DeriveSeed(20, g * 2 + i));
      const oracle::MonteCarloEstimate mc =
          oracle::MonteCarloValue(game, pi, i, 100000, mc_rng);
      const double diff = std::abs(mc.mean - v.Expect(i, 0, game.mu()));
      // Games with a deterministic return have zero standard error; the
      // floor covers the rounding of summing 1e5 returns of size <= 2.
      const double band = 3.0 * mc.stderr_ + 1e-10;
      ++mc_total;
      if (diff > band) ++mc_fail;
      if (mc.stderr_ > 0) worst_z = std::max(worst_z, diff / mc.stderr_);
    }
  }
  const bool pass = worst_br <= 1e-12 && mc_fail == 0;
  return {pass, Fmt("max |BR - brute| = %.2e; ", worst_br) +
                    std::to_string(mc_fail) + "/" + std::to_string(mc_total) +
                    Fmt(" Monte Carlo comparisons outside 3 SE (max z = %.2f)",
                        worst_z)};
}

// 2. Backward-induction CCE has cce_at_mu gap at most H * tol.
Outcome Criterion2() {
  const double tol = 1e-6;
  Rng sizes(2);
  double worst_ratio = 0.0;
  double worst_oracle = 0.0;
  bool pass = true;
  for (int g = 0; g < 50; ++g) {
    const int S = 1 + sizes.UniformInt(4);
    const int m = 1 + sizes.UniformInt(3);
    const int H = 1 + sizes.UniformInt(4);
    std::vector<int> actions(m);
    for (int& a : actions) a = 1 + sizes.UniformInt(3);
    Rng rng(DeriveSeed(30, g));
    const FiniteHorizonGame game =
        RandomFiniteGame(GameFamily::kUniform, S, actions, H, rng);
    const NonstationaryJointPolicy pi = BackwardInductionCce(game, tol);
    const std::vector<double> gaps =
        EquilibriumGaps(game, pi, GapMode::kCceAtMu);
    const FiniteValueTable v = ExactValue(game, pi);
    for (int i = 0; i < m; ++i) {
      const double oracle_gap =
          oracle::DpBestResponseValue(game, pi, i) - v.Expect(i, 0, game.mu());
      worst_ratio = std::max(worst_ratio, gaps[i] / (H * tol));
      worst_oracle = std::max(worst_oracle, oracle_gap / (H * tol));
      pass = pass && gaps[i] <= H * tol && oracle_gap <= H * tol;
    }
  }
  return {pass, Fmt("max gap / (H tol) = %.3f (library), %.3f (oracle)",
                    worst_ratio, worst_oracle)};
}

// 3. Learner end to end on 5 tiny games, 5 seeds each.
Outcome Criterion3() {
  bool pass = true;
  std::string detail;
  for (int g = 0; g < 5; ++g) {
    Rng rng(DeriveSeed(1234, g));
    const FiniteHorizonGame game =
        RandomFiniteGame(GameFamily::kUniform, 2, {2, 2}, 2, rng);
    LearnerParams params = DefaultParams(2, 2, 2, 2, 0.1, 0.1, 3.4e-6, 2.3e-4);
    params.episode_budget = 500000;
    int good = 0;
    double worst = 0.0;
    for (uint64_t seed = 0; seed < 5; ++seed) {
      const SpocmarResult r = RunSpocmar(game, params, seed);
      const std::vector<double> gaps =
          EquilibriumGaps(game, r.policy, GapMode::kCceAtMu);
      const double gap = *std::max_element(gaps.begin(), gaps.end());
      worst = std::max(worst, gap);
      if (gap <= 0.1) ++good;
    }
    pass = pass && good >= 4;
    detail += "game " + std::to_string(g) + ": " + std::to_string(good) + "/5" +
              Fmt(" (max %.4f)", worst) + (g < 4 ? "; " : "");
  }
  return {pass, detail};
}

// Fixed oblivious loss sequences, drawn up front.
std::vector<std::vector<double>> Adversary(int kind, int arms, int64_t T,
                                           uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> loss(T, std::vector<double>(arms));
  std::vector<double> means(arms);
  for (int a = 0; a < arms; ++a) means[a] = 0.3 + 0.5 * rng.Uniform();
  for (int64_t t = 0; t < T; ++t) {
    for (int a = 0; a < arms; ++a) {
      switch (kind) {
        case 0:  // Bernoulli losses with fixed means.
          loss[t][a] = rng.Uniform() < means[a] ? 1.0 : 0.0;
          break;
        case 1:  // The best arm switches halfway.
          loss[t][a] = (a == 0) == (t < T / 2) ? 0.2 : 0.7;
          break;
        case 2:  // Deterministic rotation.
          loss[t][a] = ((t + a) % arms == 0) ? 0.0 : 1.0;
          break;
        default:  // Uniform noise, arm 0 slightly better.
          loss[t][a] = std::min(1.0, rng.Uniform() + (a == 0 ? 0.0 : 0.05));
          break;
      }
    }
  }
  return loss;
}

// 4. Exp3-IX regret against the bound 10 sqrt(T B) log(T0 B / delta).
Outcome Criterion4() {
  const int64_t T0 = 10000;
  const double delta = 0.05;
  std::string detail;
  bool pass = true;
  for (int B : {2, 10}) {
    int good = 0;
    double worst_ratio = 0.0;
    for (int r = 0; r < 200; ++r) {
      const auto loss = Adversary(r % 4, B, T0, DeriveSeed(40 + B, r));
      Exp3Ix bandit = Exp3Ix::Init(B, T0, delta);
      Rng rng(r);
      std::vector<double> cumulative(B, 0.0);
      double incurred = 0.0;
      bool ok = true;
      for (int64_t t = 0; t < T0; ++t) {
        const BanditDraw d = bandit.Sample(rng);
        incurred += loss[t][d.arm];
        bandit.Update(d.arm, loss[t][d.arm]);
        for (int a = 0; a < B; ++a) cumulative[a] += loss[t][a];
        const double best =
            *std::min_element(cumulative.begin(), cumulative.end());
        const double T = static_cast<double>(t + 1);
        const double bound = 10.0 * std::sqrt(T * B) * std::log(T0 * B / delta);
        worst_ratio = std::max(worst_ratio, (incurred - best) / bound);
        ok = ok && incurred - best <= bound;
      }
      if (ok) ++good;
    }
    pass = pass && good >= 190;
    detail += "B=" + std::to_string(B) + ": " + std::to_string(good) +
              "/200 runs" + Fmt(" (max regret/bound %.3f)", worst_ratio) +
              (B == 2 ? "; " : "");
  }
  return {pass, detail};
}

// 5. EstVisit with N = VisitSamples is within eps_tvd in L1 at every step.
Outcome Criterion5() {
  Rng rng(5);
  const FiniteHorizonGame game =
      RandomFiniteGame(GameFamily::kUniform, 3, {2, 2}, 2, rng);
  const NonstationaryJointPolicy pi =
      RandomNonstationaryPolicy(game.joint_space(), 2, 3, rng);
  const LearnerParams params = DefaultParams(2, 3, 2, 2, 0.9, 0.1, 1.0, 1.0);
  const int64_t N = params.VisitSamples();
  const auto exact = StateVisitation(game, pi);
  int good = 0;
  double worst = 0.0;
  for (int seed = 0; seed < 100; ++seed) {
    GameOracle env(game, DeriveSeed(50, seed));
    Rng policy_rng(DeriveSeed(51, seed));
    const auto est = EstVisit(env, pi, N, policy_rng);
    bool ok = true;
    for (int h = 0; h < 2; ++h) {
      double l1 = 0.0;
      for (int s = 0; s < 3; ++s) l1 += std::abs(est[h][s] - exact[h][s]);
      worst = std::max(worst, l1 / params.eps_tvd);
      ok = ok && l1 <= params.eps_tvd;
    }
    if (ok) ++good;
  }
  return {good >= 95, std::to_string(good) +
                          "/100 seeds, N = " + std::to_string(N) +
                          Fmt(", max L1/eps_tvd = %.3f", worst)};
}

// Designated-state gaps of every grid policy on one compiled gadget; the
// callback sees the grid values and returns whether the gate holds.
struct GridResult {
  int64_t premises = 0;
  int64_t counterexamples = 0;
};

GridResult GridCheck(
    const CompiledGame& cg, const std::vector<int>& states,
    const std::vector<int>& designated, double level,
    const std::function<bool(const std::vector<double>&)>& gate_holds) {
  const int steps = 21;
  GridResult out;
  std::vector<double> p1(cg.game.num_states(), 0.0);
  std::vector<int> idx(states.size(), 0);
  while (true) {
    for (size_t k = 0; k < states.size(); ++k) {
      p1[states[k]] = 0.05 * idx[k];
    }
    const std::vector<double> gaps =
        UnimprovableGaps(cg.game, cg.annotation, p1);
    bool premise = true;
    for (int s : designated) premise = premise && gaps[s] <= level;
    if (premise) {
      ++out.premises;
      if (!gate_holds(p1)) ++out.counterexamples;
    }
    size_t k = 0;
    while (k < idx.size() && ++idx[k] == steps) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return out;
}

// 6. Gadget lemmas by grid brute force.
Outcome Criterion6() {
  const double eps = 0.2, gamma = 0.02, eps_prime = 1e-4;
  std::string detail;
  int64_t total_cex = 0;
  int64_t total_premises = 0;
  int64_t min_premises = INT64_MAX;
  // MulAdd gadgets fed by Assign states.
  const std::vector<std::pair<double, double>> coefs = {
      {0.5, 0.5}, {1.0, -1.0}, {0.25, 0.125}, {-0.5, 1.0}, {0.75, 0.0}};
  for (const auto& [xi, zeta] : coefs) {
    GeneralizedCircuit c;
    const int v1 = c.AddNode("v1");
    const int v2 = c.AddNode("v2");
    const int v3 = c.AddNode("v3");
    c.Assign(1, v1);
    c.Assign(1, v2);
    c.MulAdd(xi, zeta, v1, v2, v3);
    const std::vector<double> phi = {ColorRatio(xi) / 4, ColorRatio(zeta) / 4,
                                     0.25};
    const CompiledGame cg = Compile(c, phi, {eps, gamma, eps_prime});
    const int w = cg.gadgets[2].helper;
    const GridResult r = GridCheck(
        cg, {v1, v2, v3, w}, {v3, w}, eps_prime,
        [&](const std::vector<double>& p) {
          return std::abs(p[v3] - Clip01(xi * p[v1] + zeta * p[v2])) <=
                 eps + 1e-12;
        });
    total_cex += r.counterexamples;
    total_premises += r.premises;
    min_premises = std::min(min_premises, r.premises);
  }
  // Less gadget.
  {
    GeneralizedCircuit c;
    const int v1 = c.AddNode("v1");
    const int v2 = c.AddNode("v2");
    const int v3 = c.AddNode("v3");
    c.Assign(1, v1);
    c.Assign(1, v2);
    c.Less(v1, v2, v3);
    const CompiledGame cg = Compile(c, std::vector<double>{0.25, 0.25, 0.25},
                                    {eps, gamma, eps_prime});
    const int w = cg.gadgets[2].helper;
    const GridResult r = GridCheck(cg, {v1, v2, v3, w}, {v3, w}, eps_prime,
                                   [&](const std::vector<double>& p) {
                                     if (p[v1] <= p[v2] - eps)
                                       return p[v3] >= 1 - eps - 1e-12;
                                     if (p[v1] >= p[v2] + eps)
                                       return p[v3] <= eps + 1e-12;
                                     return true;
                                   });
    total_cex += r.counterexamples;
    total_premises += r.premises;
    min_premises = std::min(min_premises, r.premises);
  }
  // Assign gadgets: eps-unimprovable with eps < (1 - gamma) / 2 forces b.
  for (int b = 0; b < 2; ++b) {
    GeneralizedCircuit c;
    const int v = c.AddNode("v");
    c.Assign(b, v);
    const CompiledGame cg =
        Compile(c, std::vector<double>{0.25}, {eps, gamma, eps_prime});
    const GridResult r =
        GridCheck(cg, {v}, {v}, eps, [&](const std::vector<double>& p) {
          return p[v] == static_cast<double>(b);
        });
    total_cex += r.counterexamples;
    total_premises += r.premises;
    min_premises = std::min(min_premises, r.premises);
  }
  detail = std::to_string(total_cex) + " counterexamples among " +
           std::to_string(total_premises) +
           " grid policies meeting the premise (5 MulAdd, 1 Less, 2 Assign "
           "gadgets; fewest per gadget " +
           std::to_string(min_premises) + ")";
  return {total_cex == 0 && min_premises > 0, detail};
}

// 7. Coloring pipeline on a random 50-gate circuit.
Outcome Criterion7() {
  Rng rng(7);
  const GeneralizedCircuit c = testing::RandomNormalizedCircuit(50, rng);
  const double eps = 1.0 / 16;
  const ColoredCircuit colored = MakeValidColoring(c, eps);
  const ColoringCheck check = CheckColoring(colored.circuit, colored.phi);
  bool exact = true;
  for (const Gate& g : colored.circuit.gates()) {
    const auto& phi = colored.phi;
    if (g.kind == GateKind::kMulAdd) {
      exact = exact &&
              phi[g.inputs[0]] == ColorRatio(g.params[0]) * phi[g.output] &&
              phi[g.inputs[1]] == ColorRatio(g.params[1]) * phi[g.output];
    } else if (g.kind == GateKind::kLess) {
      exact = exact && phi[g.inputs[0]] == phi[g.inputs[1]];
    }
  }
  int muladds = 0;
  for (const Gate& g : c.gates()) muladds += g.kind == GateKind::kMulAdd;
  const int expected_nodes = 50 + muladds * 2 * (1 + ChainNodeCount(eps));
  const bool count_ok = colored.circuit.num_nodes() == expected_nodes &&
                        ChainNodeCount(eps) == 48;
  const bool pass =
      check.valid && exact && ColoringInRange(colored.phi) && count_ok;
  return {pass, std::string("check_coloring ") +
                    (check.valid ? "valid" : "invalid") + ", exact ratios " +
                    (exact ? "yes" : "no") + ", range " +
                    (ColoringInRange(colored.phi) ? "ok" : "violated") +
                    ", nodes " + std::to_string(colored.circuit.num_nodes()) +
                    " (expected " + std::to_string(expected_nodes) + ", " +
                    std::to_string(muladds) + " MulAdd gates, 48 per chain)"};
}

// 8. Rescaling preserves unnormalized values.
Outcome Criterion8() {
  Rng rng(8);
  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    const GeneralizedCircuit c = testing::RandomNormalizedCircuit(6, rng);
    const ColoredCircuit colored = MakeValidColoring(c, 1.0 / 16);
    CompileOptions options;
    options.epsilon = 0.0625;
    const CompiledGame cg = Compile(colored.circuit, colored.phi, options);
    const CompiledGame half = RescaleToHalfDiscount(cg);
    for (int p = 0; p < 10; ++p) {
      const StationaryPolicy pi = RandomStationaryPolicy(
          cg.game.joint_space(), cg.game.num_states(), rng);
      const DiscountedEvaluation x = ExactValue(cg.game, pi);
      const DiscountedEvaluation y = ExactValue(half.game, pi);
      for (int i = 0; i < 2; ++i) {
        for (int s = 0; s < cg.game.num_states(); ++s) {
          worst = std::max(worst, std::abs(x.v[i][s] / (1 - cg.game.gamma()) -
                                           y.v[i][s] / 0.5));
        }
      }
    }
  }
  return {worst <= 1e-8,
          Fmt("max |V/(1-gamma) - V'/(1/2)| = %.2e over 5 games x 10 policies",
              worst)};
}

// 9. Truncating a discounted game to H steps.
Outcome Criterion9() {
  const double eps = 0.01;
  double worst_ratio = 0.0;
  bool pass = true;
  for (int g = 0; g < 10; ++g) {
    Rng rng(DeriveSeed(90, g));
    const double gamma = 0.5 + 0.4 * rng.Uniform();
    const DiscountedGame dg =
        RandomDiscountedGame(GameFamily::kUniform, 3, {2, 2}, gamma, rng);
    const FiniteHorizonGame fg = DiscountedToFinite(dg, eps);
    const int H = fg.horizon();
    const double bound = eps / (1 - gamma);
    for (int p = 0; p < 20; ++p) {
      std::vector<double> v_disc(2 * 3), v_fin(2 * 3);
      if (p % 2 == 0) {
        const NonstationaryJointPolicy pi =
            RandomNonstationaryPolicy(dg.joint_space(), H, 3, rng);
        const FiniteValueTable a = ExactValue(dg, pi);
        const FiniteValueTable b = ExactValue(fg, pi);
        for (int i = 0; i < 2; ++i) {
          for (int s = 0; s < 3; ++s) {
            v_disc[i * 3 + s] = a(i, 0, s);
            v_fin[i * 3 + s] = b(i, 0, s);
          }
        }
      } else {
        const StationaryPolicy pi =
            RandomStationaryPolicy(dg.joint_space(), 3, rng);
        NonstationaryJointPolicy repeated(H, 3);
        for (int h = 0; h < H; ++h) {
          for (int s = 0; s < 3; ++s) {
            std::vector<WeightedProfile> mix;
            for (int a = 0; a < dg.num_joint_actions(); ++a) {
              if (pi.at(s)[a] > 0) mix.push_back({a, pi.at(s)[a]});
            }
            repeated.set_cell(h, s, mix);
          }
        }
        const DiscountedEvaluation a = ExactValue(dg, pi);
        const FiniteValueTable b = ExactValue(fg, repeated);
        for (int i = 0; i < 2; ++i) {
          for (int s = 0; s < 3; ++s) {
            v_disc[i * 3 + s] = a.v[i][s];
            v_fin[i * 3 + s] = b(i, 0, s);
          }
        }
      }
      for (int k = 0; k < 6; ++k) {
        const double diff = std::abs(v_disc[k] / (1 - gamma) - v_fin[k]);
        worst_ratio = std::max(worst_ratio, diff / bound);
        pass = pass && diff <= bound;
      }
    }
  }
  return {pass, Fmt("eps = %.2f, max |V'/(1-gamma) - V| / (eps/(1-gamma)) = "
                    "%.4f over 10 games x 20 policies",
                    eps, worst_ratio)};
}

// 10. Support truncation bounds.
Outcome Criterion10() {
  bool pass = true;
  double worst_l1 = 0.0, worst_gap = 0.0;
  int checks = 0;
  for (int g = 0; g < 20; ++g) {
    Rng rng(DeriveSeed(100, g));
    const double gamma = 0.3 + 0.6 * rng.Uniform();
    TurnBasedAnnotation ann;
    const DiscountedGame game = RandomDiscountedGame(GameFamily::kTurnBased, 4,
                                                     {3, 3}, gamma, rng, &ann);
    const JointActionSpace& space = game.joint_space();
    const ProductPolicy pi = RandomProductPolicy(space, 4, rng);
    const StageGameQuantities before =
        ComputeStageGame(game, pi.ToJoint(space));
    double max_rho = 0.0;
    for (const auto& row : before.rho) {
      for (double r : row) max_rho = std::max(max_rho, r);
    }
    for (double k : {1.5, 2.0, 5.0, 20.0}) {
      const ProductPolicy out = TruncateSupport(game, pi, k);
      const StageGameQuantities after =
          ComputeStageGame(game, out.ToJoint(space));
      const double gap_bound = k * max_rho + 8.0 / (k * (1 - gamma)) + 1e-9;
      for (int i = 0; i < 2; ++i) {
        for (int s = 0; s < 4; ++s) {
          double l1 = 0.0;
          for (int b = 0; b < 3; ++b) {
            l1 += std::abs(out.at(i, s)[b] - pi.at(i, s)[b]);
          }
          worst_l1 = std::max(worst_l1, l1 / (2.0 / (k - 1)));
          worst_gap = std::max(worst_gap, after.wsne[i][s] / gap_bound);
          pass = pass && l1 <= 2.0 / (k - 1) + 1e-12 &&
                 after.wsne[i][s] <= gap_bound;
          ++checks;
        }
      }
    }
  }
  return {pass, std::to_string(checks) +
                    Fmt(" (i, s) checks; max L1/(2/(k-1)) = %.3f, max "
                        "eps'/bound = %.3f",
                        worst_l1, worst_gap)};
}

}  // namespace
}  // namespace mel

int main() {
  using Clock = std::chrono::steady_clock;
  const std::vector<std::function<mel::Outcome()>> criteria = {
      mel::Criterion1, mel::Criterion2, mel::Criterion3, mel::Criterion4,
      mel::Criterion5, mel::Criterion6, mel::Criterion7, mel::Criterion8,
      mel::Criterion9, mel::Criterion10};
  int failures = 0;
  for (size_t n = 0; n < criteria.size(); ++n) {
    const auto start = Clock::now();
    mel::Outcome outcome{false, ""};
    try {
      outcome = criteria[n]();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(Clock::now() - start).count();
    if (!outcome.pass) ++failures;
    std::printf("%s criterion %zu: %s [%.1f s]\n",
                outcome.pass ? "PASS" : "FAIL", n + 1, outcome.detail.c_str(),
                seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
