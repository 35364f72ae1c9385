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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gtest/gtest.h"
#include "mel/bandit/exp3ix.h"
#include "mel/core/errors.h"
#include "mel/core/rng.h"

namespace mel {
namespace {

TEST(Exp3IxTest, InitRates) {
  const Exp3Ix bandit = Exp3Ix::Init(4, 1000, 0.1);
  const double eta = std::sqrt(2.0 * std::log(4.0) / (4.0 * 1000.0));
  EXPECT_DOUBLE_EQ(bandit.eta(), eta);
  EXPECT_DOUBLE_EQ(bandit.ix(), eta / 2.0);
  for (double p : bandit.Probabilities()) EXPECT_DOUBLE_EQ(p, 0.25);
}

TEST(Exp3IxTest, ProbabilitiesAreSoftmaxOfEstimates) {
  Exp3Ix bandit = Exp3Ix::Init(3, 500, 0.1);
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    const BanditDraw d = bandit.Sample(rng);
    bandit.Update(d.arm, d.arm == 2 ? 0.1 : 0.7);
    const std::vector<double>& lw = bandit.log_weights();
    EXPECT_EQ(*std::max_element(lw.begin(), lw.end()), 0.0);
  }
  const std::vector<double>& L = bandit.cumulative_estimates();
  std::vector<double> expected(3);
  for (int b = 0; b < 3; ++b) expected[b] = std::exp(-bandit.eta() * L[b]);
  const double z = std::accumulate(expected.begin(), expected.end(), 0.0);
  const std::vector<double> p = bandit.Probabilities();
  for (int b = 0; b < 3; ++b) EXPECT_NEAR(p[b], expected[b] / z, 1e-12);
  EXPECT_GT(p[2], p[0]);
}

TEST(Exp3IxTest, ProtocolViolationsAreUsageErrors) {
  Exp3Ix bandit = Exp3Ix::Init(2, 2, 0.1);
  Rng rng(2);
  const BanditDraw d = bandit.Sample(rng);
  EXPECT_THROW(bandit.Sample(rng), UsageError);
  EXPECT_THROW(bandit.Update(1 - d.arm, 0.5), UsageError);
  EXPECT_THROW(bandit.Update(d.arm, 1.5), UsageError);
  bandit.Update(d.arm, 0.5);
  const BanditDraw d2 = bandit.Sample(rng);
  bandit.Update(d2.arm, 0.0);
  EXPECT_EQ(bandit.round(), 2);
  EXPECT_THROW(bandit.Sample(rng), UsageError);
  EXPECT_THROW(Exp3Ix::Init(0, 5, 0.1), InputError);
}

TEST(Exp3IxTest, SingleArmConsumesNoRandomness) {
  Exp3Ix bandit = Exp3Ix::Init(1, 10, 0.1);
  Rng rng(3);
  Rng reference(3);
  for (int t = 0; t < 10; ++t) {
    const BanditDraw d = bandit.Sample(rng);
    EXPECT_EQ(d.arm, 0);
    EXPECT_EQ(d.prob, 1.0);
    bandit.Update(0, 0.3);
  }
  EXPECT_EQ(rng.NextWord(), reference.NextWord());
}

// With ix = 0 the estimate is unbiased: E[1{a = b} loss / p_b] = loss_b.
TEST(Exp3IxTest, EstimateUnbiasedWithoutImplicitExploration) {
  const std::vector<double> loss = {0.2, 0.9, 0.5};
  Rng rng(4);
  std::vector<double> sum(3, 0.0);
  const int n = 200000;
  for (int t = 0; t < n; ++t) {
    Exp3Ix bandit(3, 1, 0.1, 0.3, 0.0);
    const BanditDraw d = bandit.Sample(rng);
    sum[d.arm] += Exp3Ix::Estimate(loss[d.arm], d.prob, 0.0);
    bandit.Update(d.arm, loss[d.arm]);
  }
  for (int b = 0; b < 3; ++b) EXPECT_NEAR(sum[b] / n, loss[b], 0.01);
}

// With ix > 0 the expectation is loss p / (p + ix).
TEST(Exp3IxTest, ImplicitExplorationExpectation) {
  const double ix = 0.2;
  const std::vector<double> loss = {0.6, 0.4};
  Rng rng(5);
  std::vector<double> sum(2, 0.0);
  const int n = 200000;
  for (int t = 0; t < n; ++t) {
    Exp3Ix bandit(2, 1, 0.1, 0.3, ix);
    const BanditDraw d = bandit.Sample(rng);
    sum[d.arm] += Exp3Ix::Estimate(loss[d.arm], d.prob, ix);
    bandit.Update(d.arm, loss[d.arm]);
  }
  for (int b = 0; b < 2; ++b) {
    EXPECT_NEAR(sum[b] / n, loss[b] * 0.5 / (0.5 + ix), 0.005);
  }
}

TEST(Exp3IxTest, RegretAgainstFixedArmIsSublinear) {
  const int64_t T = 5000;
  const double delta = 0.05;
  Exp3Ix bandit = Exp3Ix::Init(2, T, delta);
  Rng rng(6);
  double incurred = 0.0;
  for (int64_t t = 0; t < T; ++t) {
    const BanditDraw d = bandit.Sample(rng);
    const double l = d.arm == 0 ? 0.3 : 0.7;
    incurred += l;
    bandit.Update(d.arm, l);
  }
  const double regret = incurred - 0.3 * T;
  EXPECT_LE(regret, 10.0 * std::sqrt(T * 2.0) * std::log(T * 2.0 / delta));
  EXPECT_LT(regret, 0.1 * T);
}

TEST(Exp3IxTest, JsonRoundTripResumesIdentically) {
  Exp3Ix a = Exp3Ix::Init(3, 100, 0.1);
  Rng rng(7);
  for (int t = 0; t < 30; ++t) {
    const BanditDraw d = a.Sample(rng);
    a.Update(d.arm, 0.1 * (d.arm + 1));
  }
  Exp3Ix b = Exp3Ix::FromJson(a.ToJson());
  EXPECT_EQ(a.round(), b.round());
  EXPECT_EQ(a.Probabilities(), b.Probabilities());
  Rng ra(8);
  Rng rb(8);
  for (int t = 0; t < 20; ++t) {
    const BanditDraw da = a.Sample(ra);
    const BanditDraw db = b.Sample(rb);
    EXPECT_EQ(da.arm, db.arm);
    a.Update(da.arm, 0.5);
    b.Update(db.arm, 0.5);
  }
  EXPECT_THROW(Exp3Ix::FromJson(nlohmann::json::object()), InputError);
}

}  // namespace
}  // namespace mel
