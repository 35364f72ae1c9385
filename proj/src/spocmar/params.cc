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

#include "mel/spocmar/params.h"

#include <cmath>
#include <string>

#include "mel/core/errors.h"

namespace mel {
namespace {

// Ceiling that ignores relative rounding noise below 1e-12, so a count that
// is integral in exact arithmetic is not bumped by one.
int64_t RobustCeil(double x) {
  return static_cast<int64_t>(std::ceil(x * (1.0 - 1e-12)));
}

void RequirePositive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw InputError(std::string("learner parameter ") + name +
                     " must be positive and finite");
  }
}

}  // namespace

int64_t LearnerParams::EpisodesPerPolicy() const { return RobustCeil(k); }

int64_t LearnerParams::VisitSamples() const { return RobustCeil(n_visit); }

LearnerParams DefaultParams(int num_players, int num_states, int horizon,
                            int max_actions, double epsilon, double delta,
                            double c_j, double c_n) {
  if (num_players < 1 || num_states < 1 || horizon < 1 || max_actions < 1) {
    throw InputError("game sizes must be positive");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0)) {
    throw InputError("epsilon and delta must lie in (0, 1)");
  }
  RequirePositive(c_j, "C_J");
  RequirePositive(c_n, "C_N");
  const double S = num_states;
  const double H = horizon;
  const double A = max_actions;
  LearnerParams params;
  params.epsilon = epsilon;
  params.delta = delta;
  params.c_j = c_j;
  params.c_n = c_n;
  params.iota = std::log(S * H * A / (epsilon * delta));
  params.p = epsilon / (16.0 * S * H * H);
  params.j = c_j * std::pow(H, 6) * params.iota * params.iota * A /
             (epsilon * epsilon);
  params.k = 8.0 * params.j / params.p;
  params.eps_val = epsilon / (4.0 * H);
  params.eps_reg = epsilon / (8.0 * H);
  params.eps_tvd = params.p / 2.0;
  params.n_visit = c_n * S * params.iota / (params.eps_tvd * params.eps_tvd);
  params.max_stages = num_states * horizon;
  return params;
}

void ValidateParams(const LearnerParams& params) {
  RequirePositive(params.epsilon, "epsilon");
  RequirePositive(params.delta, "delta");
  RequirePositive(params.p, "p");
  RequirePositive(params.k, "K");
  RequirePositive(params.n_visit, "N_visit");
  if (params.max_stages < 1) throw InputError("stage cap must be positive");
  if (params.episode_budget < 0) {
    throw InputError("episode budget must be nonnegative");
  }
}

nlohmann::json ParamsToJson(const LearnerParams& params) {
  return {{"epsilon", params.epsilon},
          {"delta", params.delta},
          {"iota", params.iota},
          {"p", params.p},
          {"J", params.j},
          {"K", params.k},
          {"N_visit", params.n_visit},
          {"eps_val", params.eps_val},
          {"eps_reg", params.eps_reg},
          {"eps_tvd", params.eps_tvd},
          {"C_J", params.c_j},
          {"C_N", params.c_n},
          {"max_stages", params.max_stages},
          {"episode_budget", params.episode_budget},
          {"episodes_per_policy", params.EpisodesPerPolicy()},
          {"visit_samples", params.VisitSamples()}};
}

}  // namespace mel
