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

#include "mel/core/linear.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "mel/core/errors.h"

namespace mel {

bool UseDirectSolve(const DiscountedGame& game) {
  return static_cast<long long>(game.num_states()) *
             game.num_joint_actions() <=
         kDirectSolveLimit;
}

std::vector<std::vector<double>> SolveDiscountedChain(
    const std::vector<TransitionRow>& chain,
    const std::vector<std::vector<double>>& rhs, double gamma, bool direct) {
  const int n = static_cast<int>(chain.size());
  std::vector<std::vector<double>> out;
  out.reserve(rhs.size());
  if (direct) {
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
    for (int s = 0; s < n; ++s) {
      for (const Transition& t : chain[s]) system(s, t.next) -= gamma * t.prob;
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    for (const std::vector<double>& c : rhs) {
      const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(c.data(), n);
      const Eigen::VectorXd v = lu.solve(b);
      out.emplace_back(v.data(), v.data() + n);
    }
    return out;
  }
  for (const std::vector<double>& c : rhs) {
    std::vector<double> v = c;
    std::vector<double> next(n);
    for (long long iter = 0;; ++iter) {
      double change = 0.0;
      for (int s = 0; s < n; ++s) {
        double acc = 0.0;
        for (const Transition& t : chain[s]) acc += t.prob * v[t.next];
        next[s] = c[s] + gamma * acc;
        change = std::max(change, std::abs(next[s] - v[s]));
      }
      v.swap(next);
      if (change <= kIterativeResidual) break;
      if (iter > 100000000LL) throw SolverError("value iteration stalled");
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace mel
