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

#ifndef MEL_CORE_EQUILIBRIUM_H_
#define MEL_CORE_EQUILIBRIUM_H_

#include <string>
#include <string_view>
#include <vector>

#include "mel/core/game.h"
#include "mel/core/policy.h"

namespace mel {

enum class GapMode { kCceAtMu, kPerfect, kNeSg, kPneSg, kWsneSg, kPwsneSg };

// Accepts cce_at_mu, perfect, ne_sg, pne_sg, wsne_sg, pwsne_sg.
GapMode ParseGapMode(std::string_view name);
std::string GapModeName(GapMode mode);

// Per-player gaps.
//  cce_at_mu: V_i^{dagger}(mu) - V_i^pi(mu).
//  perfect:   max_s V_i^{dagger}(s) - V_i^pi(s) (stationary policies only).
//  ne_sg / pne_sg: rho_{i,s} averaged under mu / maximized over s.
//  wsne_sg / pwsne_sg: eps_{i,s} averaged under mu / maximized over s.
// Finite-horizon games and nonstationary policies support cce_at_mu only;
// the stage-game modes require a product policy.
std::vector<double> EquilibriumGaps(const FiniteHorizonGame& game,
                                    const NonstationaryJointPolicy& policy,
                                    GapMode mode);
std::vector<double> EquilibriumGaps(const DiscountedGame& game,
                                    const StationaryPolicy& policy,
                                    GapMode mode);
std::vector<double> EquilibriumGaps(const DiscountedGame& game,
                                    const NonstationaryJointPolicy& policy,
                                    GapMode mode);

// Stage-game quantities of a stationary policy, all indexed [i][s].
struct StageGameQuantities {
  // q[i][s][b] = E_{a ~ pi(s)} Q_i(s, (b, a_{-i})).
  std::vector<std::vector<std::vector<double>>> q;
  std::vector<std::vector<double>> v;
  // rho = max_b q - V.
  std::vector<std::vector<double>> rho;
  // eps = max_b q - min over b with positive marginal mass of q.
  std::vector<std::vector<double>> wsne;
};

StageGameQuantities ComputeStageGame(const DiscountedGame& game,
                                     const StationaryPolicy& policy);

// Drops actions whose stage value falls more than k * rho_{i,s} below the
// best action and renormalizes by the kept mass. Requires k > 1.
ProductPolicy TruncateSupport(const DiscountedGame& game,
                              const ProductPolicy& policy, double k);

// Backward induction: at each (h, s) solve a linear program for a CCE of the
// stage game with payoffs r + E V_{h+1}. Every stage deviation gain is at
// most `tol`, so the overall gap is at most H * tol.
NonstationaryJointPolicy BackwardInductionCce(const FiniteHorizonGame& game,
                                              double tol);

// CCE of a normal-form game, payoffs[i][a] over flat joint actions. Returns
// a distribution whose largest deviation gain is at most `tol`.
std::vector<double> SolveStageCce(
    const JointActionSpace& space,
    const std::vector<std::vector<double>>& payoffs, double tol);

// max_i max_{b} sum_a x(a) (u_i(b, a_{-i}) - u_i(a)).
double StageCceGap(const JointActionSpace& space,
                   const std::vector<std::vector<double>>& payoffs,
                   const std::vector<double>& x);

}  // namespace mel

#endif  // MEL_CORE_EQUILIBRIUM_H_
