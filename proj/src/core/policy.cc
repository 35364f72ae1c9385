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

#include "mel/core/policy.h"

#include <cmath>
#include <unordered_map>

#include "mel/core/errors.h"

namespace mel {
namespace {

constexpr double kMixtureTol = 1e-12;
constexpr double kDistributionTol = 1e-9;

std::string Cell(int h, int s) {
  return "(h=" + std::to_string(h) + ", s=" + std::to_string(s) + ")";
}

void ThrowIfAny(const std::vector<std::string>& violations) {
  if (violations.empty()) return;
  throw InputError("invalid policy: " + violations.front());
}

}  // namespace

NonstationaryJointPolicy::NonstationaryJointPolicy(int horizon, int num_states)
    : horizon_(horizon),
      num_states_(num_states),
      cells_(static_cast<size_t>(horizon) * num_states),
      recorded_(cells_.size(), 0) {}

void NonstationaryJointPolicy::set_cell(int h, int s,
                                        std::vector<WeightedProfile> mixture,
                                        int recorded_count) {
  if (h < 0 || h >= horizon_ || s < 0 || s >= num_states_) {
    throw InputError("policy cell out of range " + Cell(h, s));
  }
  recorded_[Index(h, s)] = recorded_count < 0
                               ? static_cast<int>(mixture.size())
                               : recorded_count;
  cells_[Index(h, s)] = std::move(mixture);
}

std::vector<double> NonstationaryJointPolicy::Distribution(
    int h, int s, int num_joint) const {
  std::vector<double> dist(num_joint, 0.0);
  for (const WeightedProfile& wp : cell(h, s)) dist[wp.joint] += wp.weight;
  return dist;
}

NonstationaryJointPolicy NonstationaryJointPolicy::Uniform(
    const JointActionSpace& space, int horizon, int num_states) {
  NonstationaryJointPolicy policy(horizon, num_states);
  std::vector<WeightedProfile> mixture;
  for (int a = 0; a < space.size(); ++a) {
    mixture.push_back({a, 1.0 / space.size()});
  }
  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < num_states; ++s) policy.set_cell(h, s, mixture);
  }
  return policy;
}

NonstationaryJointPolicy NonstationaryJointPolicy::FromRecords(
    const JointActionSpace& space, int horizon, int num_states,
    const std::vector<std::vector<int>>& records) {
  if (records.size() != static_cast<size_t>(horizon) * num_states) {
    throw InputError("record table has wrong size");
  }
  NonstationaryJointPolicy policy(horizon, num_states);
  std::vector<WeightedProfile> uniform;
  for (int a = 0; a < space.size(); ++a) {
    uniform.push_back({a, 1.0 / space.size()});
  }
  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < num_states; ++s) {
      const std::vector<int>& cell_records =
          records[static_cast<size_t>(h) * num_states + s];
      if (cell_records.empty()) {
        policy.set_cell(h, s, uniform, 0);
        continue;
      }
      std::vector<WeightedProfile> mixture;
      std::vector<int> counts;
      std::unordered_map<int, int> slot;
      for (int joint : cell_records) {
        auto [it, inserted] = slot.emplace(joint, mixture.size());
        if (inserted) {
          mixture.push_back({joint, 0.0});
          counts.push_back(0);
        }
        ++counts[it->second];
      }
      const double total = static_cast<double>(cell_records.size());
      for (size_t k = 0; k < mixture.size(); ++k) {
        mixture[k].weight = counts[k] / total;
      }
      policy.set_cell(h, s, std::move(mixture),
                      static_cast<int>(cell_records.size()));
    }
  }
  return policy;
}

StationaryPolicy::StationaryPolicy(int num_states, int num_joint)
    : dists_(num_states, std::vector<double>(num_joint, 0.0)) {}

StationaryPolicy StationaryPolicy::Uniform(const JointActionSpace& space,
                                           int num_states) {
  StationaryPolicy policy(num_states, space.size());
  for (int s = 0; s < num_states; ++s) {
    policy.mutable_at(s).assign(space.size(), 1.0 / space.size());
  }
  return policy;
}

StationaryPolicy StationaryPolicy::FromControllerProbabilities(
    const JointActionSpace& space, const std::vector<int>& controller,
    std::span<const double> p1) {
  const int num_states = static_cast<int>(controller.size());
  if (static_cast<int>(p1.size()) != num_states) {
    throw InputError("probability map has wrong length");
  }
  StationaryPolicy policy(num_states, space.size());
  for (int s = 0; s < num_states; ++s) {
    const int c = controller[s];
    if (space.num_actions(c) != 2) {
      throw InputError("controller probabilities need binary actions");
    }
    if (!(p1[s] >= 0.0 && p1[s] <= 1.0)) {
      throw InputError("controller probability outside [0, 1]");
    }
    policy.mutable_at(s)[space.Replace(0, c, 0)] += 1.0 - p1[s];
    policy.mutable_at(s)[space.Replace(0, c, 1)] += p1[s];
  }
  return policy;
}

ProductPolicy::ProductPolicy(const JointActionSpace& space, int num_states)
    : num_states_(num_states) {
  strategies_.resize(space.num_players());
  for (int i = 0; i < space.num_players(); ++i) {
    const int n = space.num_actions(i);
    strategies_[i].assign(num_states, std::vector<double>(n, 1.0 / n));
  }
}

StationaryPolicy ProductPolicy::ToJoint(const JointActionSpace& space) const {
  StationaryPolicy joint(num_states_, space.size());
  for (int s = 0; s < num_states_; ++s) {
    for (int a = 0; a < space.size(); ++a) {
      double p = 1.0;
      for (int i = 0; i < space.num_players(); ++i) {
        p *= strategies_[i][s][space.ActionOf(a, i)];
      }
      joint.mutable_at(s)[a] = p;
    }
  }
  return joint;
}

ProductPolicy ProductPolicy::Marginals(const JointActionSpace& space,
                                       const StationaryPolicy& policy) {
  ProductPolicy product(space, policy.num_states());
  for (int s = 0; s < policy.num_states(); ++s) {
    for (int i = 0; i < space.num_players(); ++i) {
      product.mutable_at(i, s) = Marginal(space, policy.at(s), i);
    }
  }
  return product;
}

std::vector<double> Marginal(const JointActionSpace& space,
                             std::span<const double> dist, int player) {
  std::vector<double> marginal(space.num_actions(player), 0.0);
  for (int a = 0; a < space.size(); ++a) {
    marginal[space.ActionOf(a, player)] += dist[a];
  }
  return marginal;
}

bool IsProduct(const JointActionSpace& space, const StationaryPolicy& policy,
               double tol) {
  const StationaryPolicy rebuilt =
      ProductPolicy::Marginals(space, policy).ToJoint(space);
  for (int s = 0; s < policy.num_states(); ++s) {
    for (int a = 0; a < space.size(); ++a) {
      if (std::abs(rebuilt.at(s)[a] - policy.at(s)[a]) > tol) return false;
    }
  }
  return true;
}

StationaryPolicy ControllerMarginalPolicy(const JointActionSpace& space,
                                          const TurnBasedAnnotation& annotation,
                                          const StationaryPolicy& policy) {
  StationaryPolicy out(policy.num_states(), space.size());
  for (int s = 0; s < policy.num_states(); ++s) {
    const int c = annotation.controller[s];
    const std::vector<double> marginal = Marginal(space, policy.at(s), c);
    for (int b = 0; b < space.num_actions(c); ++b) {
      out.mutable_at(s)[space.Replace(0, c, b)] += marginal[b];
    }
  }
  return out;
}

NonstationaryJointPolicy ControllerMarginalPolicy(
    const JointActionSpace& space, const TurnBasedAnnotation& annotation,
    const NonstationaryJointPolicy& policy) {
  NonstationaryJointPolicy out(policy.horizon(), policy.num_states());
  for (int h = 0; h < policy.horizon(); ++h) {
    for (int s = 0; s < policy.num_states(); ++s) {
      const int c = annotation.controller[s];
      std::vector<double> marginal(space.num_actions(c), 0.0);
      for (const WeightedProfile& wp : policy.cell(h, s)) {
        marginal[space.ActionOf(wp.joint, c)] += wp.weight;
      }
      std::vector<WeightedProfile> mixture;
      for (int b = 0; b < space.num_actions(c); ++b) {
        if (marginal[b] > 0.0) {
          mixture.push_back({space.Replace(0, c, b), marginal[b]});
        }
      }
      out.set_cell(h, s, std::move(mixture));
    }
  }
  return out;
}

std::vector<std::string> ValidatePolicy(const NonstationaryJointPolicy& policy,
                                        const JointActionSpace& space,
                                        int horizon, int num_states) {
  std::vector<std::string> out;
  if (policy.horizon() != horizon || policy.num_states() != num_states) {
    out.push_back("policy shape does not match the game");
    return out;
  }
  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < num_states; ++s) {
      const std::vector<WeightedProfile>& cell = policy.cell(h, s);
      if (cell.empty()) {
        out.push_back("empty mixture at " + Cell(h, s));
        continue;
      }
      double total = 0.0;
      for (const WeightedProfile& wp : cell) {
        if (wp.joint < 0 || wp.joint >= space.size()) {
          out.push_back("invalid profile at " + Cell(h, s));
          break;
        }
        if (!(wp.weight >= 0.0)) {
          out.push_back("negative weight at " + Cell(h, s));
          break;
        }
        total += wp.weight;
      }
      if (std::abs(total - 1.0) > kMixtureTol) {
        out.push_back("weights do not sum to 1 at " + Cell(h, s));
      }
    }
  }
  return out;
}

std::vector<std::string> ValidatePolicy(const StationaryPolicy& policy,
                                        const JointActionSpace& space,
                                        int num_states) {
  std::vector<std::string> out;
  if (policy.num_states() != num_states) {
    out.push_back("policy shape does not match the game");
    return out;
  }
  for (int s = 0; s < num_states; ++s) {
    const std::vector<double>& dist = policy.at(s);
    if (static_cast<int>(dist.size()) != space.size()) {
      out.push_back("distribution of wrong length at state " +
                    std::to_string(s));
      continue;
    }
    double total = 0.0;
    for (double p : dist) {
      if (!(p >= 0.0 && p <= 1.0)) {
        out.push_back("probability outside [0, 1] at state " +
                      std::to_string(s));
        break;
      }
      total += p;
    }
    if (std::abs(total - 1.0) > kDistributionTol) {
      out.push_back("distribution not normalized at state " +
                    std::to_string(s));
    }
  }
  return out;
}

void RequireValidPolicy(const NonstationaryJointPolicy& policy,
                        const JointActionSpace& space, int horizon,
                        int num_states) {
  ThrowIfAny(ValidatePolicy(policy, space, horizon, num_states));
}

void RequireValidPolicy(const StationaryPolicy& policy,
                        const JointActionSpace& space, int num_states) {
  ThrowIfAny(ValidatePolicy(policy, space, num_states));
}

}  // namespace mel
