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

#ifndef MEL_CORE_SIMPLEX_H_
#define MEL_CORE_SIMPLEX_H_

#include <vector>

namespace mel {

struct LpSolution {
  bool optimal = false;  // False means the objective is unbounded.
  std::vector<double> x;
  double objective = 0.0;
};

// Maximizes c.x subject to A x <= b and x >= 0 with b >= 0, so the origin is
// feasible and no first phase is needed. Dense tableau with Bland's rule.
LpSolution MaximizeFromOrigin(const std::vector<std::vector<double>>& a,
                              const std::vector<double>& b,
                              const std::vector<double>& c);

}  // namespace mel

#endif  // MEL_CORE_SIMPLEX_H_
