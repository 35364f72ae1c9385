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

#include "mel/core/equilibrium.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mel/core/dp.h"
#include "mel/core/errors.h"
#include "mel/core/simplex.h"

namespace mel {
namespace {

// Support truncation keeps actions within this slack of the threshold, so
// pure best responses are not dropped through rounding.
constexpr double kThresholdSlack = 1e-12;

// Stage-CCE weights at or below this value are discarded.
constexpr double kPruneWeight = 1e-14;

double Aggregate(const std::vector<double>& per_state,
                 const std::vector<double>& mu, bool expect) {
  if (!expect) return *std::max_element(per_state.begin(), per_state.end());
  double acc = 0.0;
  for (size_t s = 0; s < per_state.size(); ++s) acc += mu[s] * per_state[s];
  return acc;
}

}  // namespace

GapMode ParseGapMode(std::string_view name) {
  if (name == "cce_at_mu") return GapMode::kCceAtMu;
  if (name == "perfect") return GapMode::kPerfect;
  if (name == "ne_sg") return GapMode::kNeSg;
  if (name == "pne_sg") return GapMode::kPneSg;
  if (name == "wsne_sg") return GapMode::kWsneSg;
  if (name == "pwsne_sg") return GapMode::kPwsneSg;
  throw InputError("unknown gap mode: " + std::string(name));
}

std::string GapModeName(GapMode mode) {
  switch (mode) {
    case GapMode::kCceAtMu:
      return "cce_at_mu";
    case GapMode::kPerfect:
      return "perfect";
    case GapMode::kNeSg:
      return "ne_sg";
    case GapMode::kPneSg:
      return "pne_sg";
    case GapMode::kWsneSg:
      return "wsne_sg";
    case GapMode::kPwsneSg:
      return "pwsne_sg";
  }
  return "unknown";
}

std::vector<double> EquilibriumGaps(const FiniteHorizonGame& game,
                                    const NonstationaryJointPolicy& policy,
                                    GapMode mode) {
  if (mode != GapMode::kCceAtMu) {
    throw UsageError("mode " + GapModeName(mode) +
                     " is undefined for finite-horizon nonstationary policies");
  }
  const FiniteValueTable values = ExactValue(game, policy);
  std::vector<double> gaps(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    const FiniteBestResponse br = BestResponse(game, policy, i);
    gaps[i] = br.Expect(0, game.mu()) - values.Expect(i, 0, game.mu());
  }
  return gaps;
}

std::vector<double> EquilibriumGaps(const DiscountedGame& game,
                                    const NonstationaryJointPolicy& policy,
                                    GapMode mode) {
  if (mode != GapMode::kCceAtMu) {
    throw UsageError("mode " + GapModeName(mode) +
                     " is undefined for nonstationary policies");
  }
  const FiniteValueTable values = ExactValue(game, policy);
  std::vector<double> gaps(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    const FiniteBestResponse br = BestResponse(game, policy, i);
    gaps[i] = br.Expect(0, game.mu()) - values.Expect(i, 0, game.mu());
  }
  return gaps;
}

std::vector<double> EquilibriumGaps(const DiscountedGame& game,
                                    const StationaryPolicy& policy,
                                    GapMode mode) {
  const int m = game.num_players();
  std::vector<double> gaps(m, 0.0);
  if (mode == GapMode::kCceAtMu || mode == GapMode::kPerfect) {
    const DiscountedEvaluation eval = ExactValue(game, policy);
    for (int i = 0; i < m; ++i) {
      const StationaryBestResponse br = BestResponse(game, policy, i);
      if (mode == GapMode::kCceAtMu) {
        gaps[i] = br.Expect(game.mu()) - eval.Expect(i, game.mu());
      } else {
        double worst = -std::numeric_limits<double>::infinity();
        for (int s = 0; s < game.num_states(); ++s) {
          worst = std::max(worst, br.values[s] - eval.v[i][s]);
        }
        gaps[i] = worst;
      }
    }
    return gaps;
  }
  if (!IsProduct(game.joint_space(), policy)) {
    throw UsageError("stage-game modes require a product policy");
  }
  const StageGameQuantities stage = ComputeStageGame(game, policy);
  const bool expect = mode == GapMode::kNeSg || mode == GapMode::kWsneSg;
  const bool wsne = mode == GapMode::kWsneSg || mode == GapMode::kPwsneSg;
  for (int i = 0; i < m; ++i) {
    gaps[i] = Aggregate(wsne ? stage.wsne[i] : stage.rho[i], game.mu(), expect);
  }
  return gaps;
}

StageGameQuantities ComputeStageGame(const DiscountedGame& game,
                                     const StationaryPolicy& policy) {
  const DiscountedEvaluation eval = ExactValue(game, policy);
  const JointActionSpace& space = game.joint_space();
  const int m = game.num_players();
  const int S = game.num_states();
  StageGameQuantities out;
  out.q.resize(m);
  out.v = eval.v;
  out.rho.assign(m, std::vector<double>(S, 0.0));
  out.wsne.assign(m, std::vector<double>(S, 0.0));
  for (int i = 0; i < m; ++i) {
    const int B = space.num_actions(i);
    out.q[i].assign(S, std::vector<double>(B, 0.0));
    for (int s = 0; s < S; ++s) {
      const std::vector<double>& dist = policy.at(s);
      for (int a = 0; a < space.size(); ++a) {
        if (dist[a] <= 0.0) continue;
        for (int b = 0; b < B; ++b) {
          out.q[i][s][b] += dist[a] * eval.Q(i, s, space.Replace(a, i, b));
        }
      }
      const std::vector<double>& q = out.q[i][s];
      const double best = *std::max_element(q.begin(), q.end());
      const std::vector<double> marginal = Marginal(space, dist, i);
      double worst_supported = std::numeric_limits<double>::infinity();
      for (int b = 0; b < B; ++b) {
        if (marginal[b] > 0.0)
          worst_supported = std::min(worst_supported, q[b]);
      }
      out.rho[i][s] = best - eval.v[i][s];
      out.wsne[i][s] = best - worst_supported;
    }
  }
  return out;
}

ProductPolicy TruncateSupport(const DiscountedGame& game,
                              const ProductPolicy& policy, double k) {
  if (!(k > 1.0)) throw InputError("truncation requires k > 1");
  const JointActionSpace& space = game.joint_space();
  const StageGameQuantities stage =
      ComputeStageGame(game, policy.ToJoint(space));
  ProductPolicy out = policy;
  for (int i = 0; i < game.num_players(); ++i) {
    for (int s = 0; s < game.num_states(); ++s) {
      const std::vector<double>& q = stage.q[i][s];
      const double best = *std::max_element(q.begin(), q.end());
      const double threshold =
          best - k * std::max(0.0, stage.rho[i][s]) - kThresholdSlack;
      const std::vector<double>& pi = policy.at(i, s);
      double dropped = 0.0;
      for (size_t b = 0; b < q.size(); ++b) {
        if (q[b] < threshold) dropped += pi[b];
      }
      std::vector<double>& target = out.mutable_at(i, s);
      for (size_t b = 0; b < q.size(); ++b) {
        target[b] = q[b] < threshold ? 0.0 : pi[b] / (1.0 - dropped);
      }
    }
  }
  return out;
}

double StageCceGap(const JointActionSpace& space,
                   const std::vector<std::vector<double>>& payoffs,
                   const std::vector<double>& x) {
  double worst = 0.0;
  for (int i = 0; i < space.num_players(); ++i) {
    double value = 0.0;
    for (int a = 0; a < space.size(); ++a) value += x[a] * payoffs[i][a];
    for (int b = 0; b < space.num_actions(i); ++b) {
      double dev = 0.0;
      for (int a = 0; a < space.size(); ++a) {
        dev += x[a] * payoffs[i][space.Replace(a, i, b)];
      }
      worst = std::max(worst, dev - value);
    }
  }
  return worst;
}

std::vector<double> SolveStageCce(
    const JointActionSpace& space,
    const std::vector<std::vector<double>>& payoffs, double tol) {
  const int n = space.size();
  // Variables y_a >= 0. Deviation rows: sum_a y_a (u_i(b, a_-i) - u_i(a)) <= 0.
  // Box rows y_a <= 1 keep the program bounded. Any feasible y != 0
  // normalizes to a CCE, and every CCE is feasible, so the optimum is >= 1.
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  for (int i = 0; i < space.num_players(); ++i) {
    for (int b = 0; b < space.num_actions(i); ++b) {
      std::vector<double> row(n);
      for (int a = 0; a < n; ++a) {
        row[a] = payoffs[i][space.Replace(a, i, b)] - payoffs[i][a];
      }
      rows.push_back(std::move(row));
      rhs.push_back(0.0);
    }
  }
  for (int a = 0; a < n; ++a) {
    std::vector<double> row(n, 0.0);
    row[a] = 1.0;
    rows.push_back(std::move(row));
    rhs.push_back(1.0);
  }
  const LpSolution lp =
      MaximizeFromOrigin(rows, rhs, std::vector<double>(n, 1.0));
  if (!lp.optimal) throw SolverError("stage CCE program unbounded");
  std::vector<double> x = lp.x;
  double total = 0.0;
  for (double& v : x) {
    if (v <= kPruneWeight) v = 0.0;
    total += v;
  }
  if (!(total > 0.0)) throw SolverError("stage CCE program returned zero");
  for (double& v : x) v /= total;
  const double gap = StageCceGap(space, payoffs, x);
  if (gap > tol) {
    throw SolverError("stage CCE gap " + std::to_string(gap) +
                      " exceeds tolerance");
  }
  return x;
}

NonstationaryJointPolicy BackwardInductionCce(const FiniteHorizonGame& game,
                                              double tol) {
  if (!(tol > 0.0)) throw InputError("tolerance must be positive");
  RequireValid(game);
  const JointActionSpace& space = game.joint_space();
  const int m = game.num_players();
  const int H = game.horizon();
  const int S = game.num_states();
  const int A = space.size();
  NonstationaryJointPolicy policy(H, S);
  std::vector<std::vector<double>> next(m, std::vector<double>(S, 0.0));
  std::vector<std::vector<double>> current(m, std::vector<double>(S, 0.0));
  for (int h = H - 1; h >= 0; --h) {
    for (int s = 0; s < S; ++s) {
      std::vector<std::vector<double>> payoffs(m, std::vector<double>(A));
      for (int i = 0; i < m; ++i) {
        for (int a = 0; a < A; ++a) {
          double cont = 0.0;
          for (const Transition& t : game.transition(h, s, a)) {
            cont += t.prob * next[i][t.next];
          }
          payoffs[i][a] = game.reward(i, h, s, a) + cont;
        }
      }
      const std::vector<double> x = SolveStageCce(space, payoffs, tol);
      std::vector<WeightedProfile> mixture;
      for (int a = 0; a < A; ++a) {
        if (x[a] > 0.0) mixture.push_back({a, x[a]});
      }
      for (int i = 0; i < m; ++i) {
        double v = 0.0;
        for (int a = 0; a < A; ++a) v += x[a] * payoffs[i][a];
        current[i][s] = v;
      }
      policy.set_cell(h, s, std::move(mixture));
    }
    next.swap(current);
  }
  return policy;
}

}  // namespace mel
