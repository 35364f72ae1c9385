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

#ifndef MEL_SPOCMAR_PARAMS_H_
#define MEL_SPOCMAR_PARAMS_H_

#include <cstdint>

#include "json.hpp"

namespace mel {

// Schedule of the learner. Real-valued fields keep the closed forms; the
// integer counts used at run time are their ceilings.
struct LearnerParams {
  double epsilon = 0.0;
  double delta = 0.0;
  double iota = 0.0;     // ln(S H max_i A_i / (epsilon delta))
  double p = 0.0;        // visitation threshold epsilon / (16 S H^2)
  double j = 0.0;        // per-cell sample floor C_J H^6 iota^2 max A / eps^2
  double k = 0.0;        // episodes per cover policy, 8 J / p
  double n_visit = 0.0;  // C_N S iota / eps_tvd^2
  double eps_val = 0.0;  // epsilon / (4 H)
  double eps_reg = 0.0;  // epsilon / (8 H)
  double eps_tvd = 0.0;  // p / 2
  double c_j = 1.0;
  double c_n = 1.0;
  // Stage cap; S * H when built by DefaultParams.
  int max_stages = 0;
  // Total episode allowance; 0 means unlimited.
  int64_t episode_budget = 0;

  int64_t EpisodesPerPolicy() const;
  int64_t VisitSamples() const;
};

// Fills every field from the closed forms. Requires positive sizes and
// epsilon, delta in (0, 1).
LearnerParams DefaultParams(int num_players, int num_states, int horizon,
                            int max_actions, double epsilon, double delta,
                            double c_j = 1.0, double c_n = 1.0);

// Throws InputError unless every field is positive and finite.
void ValidateParams(const LearnerParams& params);

nlohmann::json ParamsToJson(const LearnerParams& params);

}  // namespace mel

#endif  // MEL_SPOCMAR_PARAMS_H_
