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

#ifndef MEL_CORE_POLICY_H_
#define MEL_CORE_POLICY_H_

#include <span>
#include <string>
#include <vector>

#include "mel/core/game.h"
#include "mel/core/joint_action.h"

namespace mel {

struct WeightedProfile {
  int joint;  // Flat joint action index.
  double weight;
};

// Per-(step, state) mixture over joint action profiles.
class NonstationaryJointPolicy {
 public:
  NonstationaryJointPolicy() = default;
  NonstationaryJointPolicy(int horizon, int num_states);

  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }

  const std::vector<WeightedProfile>& cell(int h, int s) const {
    return cells_[Index(h, s)];
  }
  // `recorded_count` is J_{h,s}, the number of samples the mixture was built
  // from; a negative value records the number of listed profiles.
  void set_cell(int h, int s, std::vector<WeightedProfile> mixture,
                int recorded_count = -1);
  int recorded_count(int h, int s) const { return recorded_[Index(h, s)]; }

  // Dense joint distribution at (h, s) over `num_joint` profiles.
  std::vector<double> Distribution(int h, int s, int num_joint) const;

  static NonstationaryJointPolicy Uniform(const JointActionSpace& space,
                                          int horizon, int num_states);

  // Empirical mixture of recorded profiles per cell, listed in order of first
  // occurrence. Cells without records fall back to uniform over all profiles
  // with J_{h,s} = 0. `records` is indexed by h * num_states + s.
  static NonstationaryJointPolicy FromRecords(
      const JointActionSpace& space, int horizon, int num_states,
      const std::vector<std::vector<int>>& records);

 private:
  size_t Index(int h, int s) const {
    return static_cast<size_t>(h) * num_states_ + s;
  }

  int horizon_ = 0;
  int num_states_ = 0;
  std::vector<std::vector<WeightedProfile>> cells_;
  std::vector<int> recorded_;
};

// Per-state joint distribution, stored densely over flat joint actions.
class StationaryPolicy {
 public:
  StationaryPolicy() = default;
  StationaryPolicy(int num_states, int num_joint);

  int num_states() const { return static_cast<int>(dists_.size()); }
  const std::vector<double>& at(int s) const { return dists_[s]; }
  std::vector<double>& mutable_at(int s) { return dists_[s]; }

  static StationaryPolicy Uniform(const JointActionSpace& space,
                                  int num_states);

  // Binary-action turn-based form: the controller of s plays action 1 with
  // probability p1[s]; every other player plays action 0.
  static StationaryPolicy FromControllerProbabilities(
      const JointActionSpace& space, const std::vector<int>& controller,
      std::span<const double> p1);

 private:
  std::vector<std::vector<double>> dists_;
};

// Independent per-player stationary strategies.
class ProductPolicy {
 public:
  ProductPolicy() = default;
  // Uniform strategies.
  ProductPolicy(const JointActionSpace& space, int num_states);

  int num_players() const { return static_cast<int>(strategies_.size()); }
  int num_states() const { return num_states_; }
  const std::vector<double>& at(int i, int s) const {
    return strategies_[i][s];
  }
  std::vector<double>& mutable_at(int i, int s) { return strategies_[i][s]; }

  StationaryPolicy ToJoint(const JointActionSpace& space) const;

  // Per-state marginals of a joint policy.
  static ProductPolicy Marginals(const JointActionSpace& space,
                                 const StationaryPolicy& policy);

 private:
  int num_states_ = 0;
  std::vector<std::vector<std::vector<double>>> strategies_;
};

// Marginal of `player` under a dense joint distribution.
std::vector<double> Marginal(const JointActionSpace& space,
                             std::span<const double> dist, int player);

// True iff every state's joint distribution equals the product of its
// marginals within `tol`.
bool IsProduct(const JointActionSpace& space, const StationaryPolicy& policy,
               double tol = 1e-9);

// Policy in which the controller of each state plays its marginal and all
// other players play action 0.
StationaryPolicy ControllerMarginalPolicy(const JointActionSpace& space,
                                          const TurnBasedAnnotation& annotation,
                                          const StationaryPolicy& policy);
NonstationaryJointPolicy ControllerMarginalPolicy(
    const JointActionSpace& space, const TurnBasedAnnotation& annotation,
    const NonstationaryJointPolicy& policy);

// Empty iff the policy matches the shape and every cell is a nonempty
// mixture of valid profiles with nonnegative weights summing to 1 within
// 1e-12.
std::vector<std::string> ValidatePolicy(const NonstationaryJointPolicy& policy,
                                        const JointActionSpace& space,
                                        int horizon, int num_states);
std::vector<std::string> ValidatePolicy(const StationaryPolicy& policy,
                                        const JointActionSpace& space,
                                        int num_states);
void RequireValidPolicy(const NonstationaryJointPolicy& policy,
                        const JointActionSpace& space, int horizon,
                        int num_states);
void RequireValidPolicy(const StationaryPolicy& policy,
                        const JointActionSpace& space, int num_states);

}  // namespace mel

#endif  // MEL_CORE_POLICY_H_
