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

#include "mel/core/simplex.h"

#include "mel/core/errors.h"

namespace mel {
namespace {

constexpr double kPivotTol = 1e-12;

}  // namespace

LpSolution MaximizeFromOrigin(const std::vector<std::vector<double>>& a,
                              const std::vector<double>& b,
                              const std::vector<double>& c) {
  const int rows = static_cast<int>(a.size());
  const int n = static_cast<int>(c.size());
  const int cols = n + rows;  // Structural plus slack variables.
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(a[r].size()) != n || b[r] < 0.0) {
      throw InputError("simplex requires a rectangular system with b >= 0");
    }
  }
  // tableau[r] = [A | I | b]; objective row holds reduced costs.
  std::vector<std::vector<double>> tableau(
      rows, std::vector<double>(cols + 1, 0.0));
  std::vector<int> basis(rows);
  for (int r = 0; r < rows; ++r) {
    for (int j = 0; j < n; ++j) tableau[r][j] = a[r][j];
    tableau[r][n + r] = 1.0;
    tableau[r][cols] = b[r];
    basis[r] = n + r;
  }
  std::vector<double> z(cols + 1, 0.0);
  for (int j = 0; j < n; ++j) z[j] = -c[j];

  LpSolution solution;
  for (long iter = 0;; ++iter) {
    if (iter > 1000000) throw SolverError("simplex iteration limit");
    int enter = -1;
    for (int j = 0; j < cols; ++j) {
      if (z[j] < -kPivotTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    int leave = -1;
    double best_ratio = 0.0;
    for (int r = 0; r < rows; ++r) {
      if (tableau[r][enter] <= kPivotTol) continue;
      const double ratio = tableau[r][cols] / tableau[r][enter];
      if (leave < 0 || ratio < best_ratio - kPivotTol ||
          (ratio <= best_ratio + kPivotTol && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave < 0) {
      solution.optimal = false;
      return solution;
    }
    const double pivot = tableau[leave][enter];
    for (double& v : tableau[leave]) v /= pivot;
    for (int r = 0; r < rows; ++r) {
      if (r == leave) continue;
      const double f = tableau[r][enter];
      if (f == 0.0) continue;
      for (int j = 0; j <= cols; ++j) tableau[r][j] -= f * tableau[leave][j];
    }
    const double f = z[enter];
    for (int j = 0; j <= cols; ++j) z[j] -= f * tableau[leave][j];
    basis[leave] = enter;
  }
  solution.optimal = true;
  solution.x.assign(n, 0.0);
  for (int r = 0; r < rows; ++r) {
    if (basis[r] < n) solution.x[basis[r]] = tableau[r][cols];
  }
  solution.objective = z[cols];
  return solution;
}

}  // namespace mel
