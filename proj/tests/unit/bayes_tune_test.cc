// Copyright 2026 The robust_track Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>

#include "robust_track/tune/bayes.h"

namespace robust_track::tune {
namespace {

BatchEvaluator Synthetic(std::function<double(const Vec&)> f) {
  return [f](const std::vector<Vec>& alphas) {
    std::vector<CostResult> out;
    for (const Vec& a : alphas) out.push_back({f(a), false});
    return out;
  };
}

TEST(GlobalCostTest, PerfectTrackingIsZero) {
  EXPECT_EQ(GlobalCost(std::vector<CostSample>(10), CostWeights()).value, 0.0);
}

TEST(GlobalCostTest, SingleLateralErrorSample) {
  CostWeights w;
  w.w_e = Eigen::Vector3d(0, 100, 0).asDiagonal();
  w.w_a.setZero();
  w.w_phi.setZero();
  CostSample s;
  s.z_e = {0.7, 0.1, 0.3};
  s.a_v = {2.0, 1.0};
  s.phi_v = {0.5, 0.5, 0.5, 0.5};
  EXPECT_NEAR(GlobalCost({s}, w).value, 1.0, 1e-14);
}

TEST(GlobalCostTest, LinearInWeights) {
  CostSample s;
  s.z_e = {0.2, -0.1, 0.05};
  s.a_v = {1.5, -0.7};
  s.phi_v = {0.3, 0.4, 0.2, 0.1};
  CostWeights w;
  CostWeights w2;
  w2.w_e *= 2.0;
  w2.w_a *= 2.0;
  w2.w_phi *= 2.0;
  EXPECT_EQ(GlobalCost({s, s}, w2).value, 2.0 * GlobalCost({s, s}, w).value);
}

TEST(GlobalCostTest, DivergedAndNonFiniteArePenalized) {
  const CostResult d = GlobalCost({}, CostWeights(), true);
  EXPECT_TRUE(d.diverged);
  EXPECT_EQ(d.value, kDivergencePenalty);
  CostSample s;
  s.z_e[1] = std::nan("");
  const CostResult n = GlobalCost({s}, CostWeights());
  EXPECT_TRUE(n.diverged);
  EXPECT_EQ(n.value, kDivergencePenalty);
}

TEST(ScaleRangeTest, MaxTimesMinOver) {
  control::ThetaRange r;
  r.c_sigma_lo = 50000;
  r.c_sigma_hi = 70000;
  r.c_alpha_lo = 60000;
  r.c_alpha_hi = 66000;
  const control::ThetaRange s = ScaleRange(r, 1.5);
  EXPECT_EQ(s.c_sigma_hi, 70000 * 1.5);
  EXPECT_EQ(s.c_sigma_lo, 50000 / 1.5);
  EXPECT_EQ(s.c_alpha_hi, 66000 * 1.5);
  EXPECT_EQ(s.c_alpha_lo, 60000 / 1.5);
}

TEST(ScaleRangeTest, InvertedBoxCollapsesToMidpoint) {
  control::ThetaRange r;
  r.c_sigma_lo = 60000;
  r.c_sigma_hi = 62000;
  const control::ThetaRange s = ScaleRange(r, 0.5);
  EXPECT_EQ(s.c_sigma_lo, 61000);
  EXPECT_EQ(s.c_sigma_hi, 61000);
  EXPECT_THROW(ScaleRange(r, 0.0), std::invalid_argument);
}

TEST(BayesTest, SeedsStartWithUnitAndFillStrata) {
  TuneOptions o;
  BayesTuner t(3, o);
  const std::vector<Vec> seeds = t.SeedPoints();
  ASSERT_EQ(seeds.size(), 6u);
  EXPECT_EQ(seeds[0], Vec::Ones(3));
  for (int d = 0; d < 3; ++d) {
    std::vector<int> seen(5, 0);
    for (std::size_t i = 1; i < seeds.size(); ++i) {
      const double u = (seeds[i][d] - o.lo) / (o.hi - o.lo);
      ++seen[static_cast<std::size_t>(u * 5)];
    }
    for (int c : seen) EXPECT_EQ(c, 1);
  }
}

TEST(BayesTest, ZeroKappaExploits) {
  TuneOptions o;
  o.kappa = 0.0;
  BayesTuner t(1, o);
  for (double a = 0.2; a <= 4.9; a += 0.3) {
    t.Record(Vec::Constant(1, a), (a - 2.0) * (a - 2.0));
  }
  EXPECT_NEAR(t.Propose()[0], 2.0, 0.1);
}

TEST(BayesTest, SinglePointExplores) {
  BayesTuner t(1, TuneOptions());
  t.Record(Vec::Constant(1, 1.0), 3.0);
  EXPECT_GT(std::abs(t.Propose()[0] - 1.0), 2.0);
}

TEST(BayesTest, SyntheticOneDimensionalOptimum) {
  const TuneResult r = Tune(1, 25, TuneOptions(), Synthetic([](const Vec& a) {
                              return (a[0] - 1.22) * (a[0] - 1.22);
                            }));
  EXPECT_LE(std::abs(r.alpha[0] - 1.22), 0.05);
  EXPECT_EQ(r.history.size(), 31u);
}

TEST(BayesTest, NoIterationsReturnsSeedBest) {
  const TuneResult r = Tune(3, 0, TuneOptions(), Synthetic([](const Vec& a) {
                              return (a.array() - 2.0).square().sum();
                            }));
  ASSERT_EQ(r.history.size(), 6u);
  double best = 1e300;
  for (const Evaluation& e : r.history) best = std::min(best, e.cost);
  EXPECT_EQ(r.cost, best);
}

TEST(BayesTest, AllDivergedReported) {
  const TuneResult r = Tune(2, 2, TuneOptions(), [](const std::vector<Vec>& a) {
    return std::vector<CostResult>(a.size(), {kDivergencePenalty, true});
  });
  EXPECT_TRUE(r.all_diverged);
}

TEST(BayesTest, DeterministicUnderSeed) {
  auto f = Synthetic([](const Vec& a) { return std::sin(3 * a[0]) + a[1]; });
  const TuneResult a = Tune(2, 5, TuneOptions(), f);
  const TuneResult b = Tune(2, 5, TuneOptions(), f);
  ASSERT_EQ(a.history.size(), b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    EXPECT_EQ(a.history[i].alpha, b.history[i].alpha);
  }
}

TEST(BayesProperty, ProposalsInBoxAndBestMonotone) {
  for (bool literal : {false, true}) {
    TuneOptions o;
    o.literal_ucb = literal;
    o.seed = literal ? 7 : 3;
    const TuneResult r =
        Tune(3, 15, o, Synthetic([](const Vec& a) {
               return (a - Vec::Constant(3, 1.5)).squaredNorm() +
                      0.1 * std::cos(5 * a[0]);
             }));
    for (const Evaluation& e : r.history) {
      ASSERT_GT(e.alpha.minCoeff(), o.lo);
      ASSERT_LE(e.alpha.maxCoeff(), o.hi);
    }
    for (std::size_t i = 1; i < r.best_so_far.size(); ++i) {
      ASSERT_LE(r.best_so_far[i], r.best_so_far[i - 1]);
    }
  }
}

}  // namespace
}  // namespace robust_track::tune
