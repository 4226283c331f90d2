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
#include <vector>

#include "generators.h"
#include "robust_track/common/errors.h"
#include "robust_track/numerics/lmi.h"
#include "robust_track/numerics/ode.h"
#include "robust_track/numerics/optimize.h"
#include "robust_track/numerics/riccati.h"

namespace robust_track::numerics {
namespace {

using testing::Gen;

Vec V(std::initializer_list<double> values) {
  Vec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

Mat M1(double x) { return Mat::Constant(1, 1, x); }

TEST(Rk4Test, ZeroDynamicsIsIdentity) {
  const Vec x0 = V({1.0, 2.0});
  const Vec x1 =
      IntegrateRk4([](const Vec& x) { return Vec::Zero(x.size()); }, x0, 0.1);
  EXPECT_EQ(x1, x0);
}

TEST(Rk4Test, ExponentialGrowth) {
  const Vec x1 = IntegrateRk4([](const Vec& x) { return x; }, V({1.0}), 0.1);
  EXPECT_NEAR(x1[0], std::exp(0.1), 1e-6);
  EXPECT_NEAR(x1[0], 1.10517083, 1e-6);
}

TEST(Rk4Test, OscillatorNormPreserved) {
  auto f = [](const Vec& x) { return V({x[1], -x[0]}); };
  Vec x = V({1.0, 0.0});
  for (int k = 0; k < 100; ++k) x = IntegrateRk4(f, x, 0.01);
  EXPECT_NEAR(x.norm(), 1.0, 1e-8);
}

TEST(Rk4Test, FourthOrderGlobalConvergence) {
  auto f = [](const Vec& x) { return V({x[1], -x[0]}); };
  auto error_at = [&](double dt) {
    Vec x = V({1.0, 0.0});
    const int steps = static_cast<int>(std::lround(1.0 / dt));
    for (int k = 0; k < steps; ++k) x = IntegrateRk4(f, x, dt);
    return (x - V({std::cos(1.0), -std::sin(1.0)})).norm();
  };
  const double e1 = error_at(1e-2);
  const double e2 = error_at(5e-3);
  const double e3 = error_at(2.5e-3);
  EXPECT_NEAR(std::log2(e1 / e2), 4.0, 0.3);
  EXPECT_NEAR(std::log2(e2 / e3), 4.0, 0.3);
}

TEST(Rk4Test, NonFiniteDerivativeReportsComponent) {
  auto f = [](const Vec& x) {
    Vec d = Vec::Zero(x.size());
    d[1] = std::nan("");
    return d;
  };
  try {
    IntegrateRk4(f, V({0.0, 0.0, 0.0}), 0.01);
    FAIL() << "expected IntegrationError";
  } catch (const IntegrationError& e) {
    EXPECT_EQ(e.component(), 1u);
  }
}

TEST(CareTest, ScalarSolutions) {
  EXPECT_NEAR(SolveCare(M1(0), M1(1), M1(1), M1(1))(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(SolveCare(M1(0), M1(1), M1(4), M1(1))(0, 0), 2.0, 1e-12);
}

TEST(CareTest, TrackingErrorModelResidual) {
  const double w = 0.2;
  const double v = 16.67;
  Mat a(3, 3);
  a << 0, w, 0, -w, 0, v, 0, 0, 0;
  Mat b(3, 2);
  b << 1, 0, 0, 0, 0, 1;
  const Mat q = Mat::Identity(3, 3);
  const Mat r = Mat::Identity(2, 2);
  const Mat p = SolveCare(a, b, q, r);
  const Mat res =
      a.transpose() * p + p * a + q - p * b * r.inverse() * b.transpose() * p;
  EXPECT_LE(res.norm(), 1e-8 * (1.0 + p.norm()));
  EXPECT_GT(MinSymmetricEigenvalue(p), 0.0);
  EXPECT_LE((p - p.transpose()).norm(), 1e-12 * p.norm());
}

TEST(CareTest, NonStabilizableThrows) {
  EXPECT_THROW(SolveCare(M1(1.0), M1(0.0), M1(1.0), M1(1.0)), SynthesisError);
}

TEST(CareTest, ImaginaryAxisThrows) {
  // Undamped oscillator with no state weight on an unreachable mode.
  Mat a(2, 2);
  a << 0, 1, -1, 0;
  EXPECT_THROW(SolveCare(a, Mat::Zero(2, 1), Mat::Zero(2, 2), M1(1.0)),
               SynthesisError);
}

TEST(CareProperty, RandomStabilizableSystems) {
  Gen gen(20260101);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = gen.Int(1, 6);
    const int m = gen.Int(1, std::min(n, 3));
    const Mat a = gen.Gaussian(n, n);
    const Mat b = gen.Gaussian(n, m);
    const Mat q = gen.Spd(n, 1e-2);
    const Mat r = gen.Spd(m, 1e-1);
    const Mat p = SolveCare(a, b, q, r);
    const Mat res =
        a.transpose() * p + p * a + q - p * b * r.inverse() * b.transpose() * p;
    ASSERT_LE(res.norm(), 1e-8 * (1.0 + p.norm())) << "trial " << trial;
    ASSERT_GT(MinSymmetricEigenvalue(p), 0.0) << "trial " << trial;
    const Mat closed = a - b * r.inverse() * b.transpose() * p;
    ASSERT_LT(SpectralAbscissa(closed), 0.0) << "trial " << trial;
  }
}

TEST(DareTest, ScalarClosedForm) {
  // p = q + a^2 p - a^2 p^2 b^2 / (r + b^2 p) with a=b=q=r=1 gives the
  // golden ratio.
  const Mat p = SolveDare(M1(1), M1(1), M1(1), M1(1));
  EXPECT_NEAR(p(0, 0), 0.5 * (1.0 + std::sqrt(5.0)), 1e-10);
  const Mat k = DiscreteLqrGain(M1(1), M1(1), M1(1), M1(1));
  EXPECT_NEAR(k(0, 0), p(0, 0) / (1.0 + p(0, 0)), 1e-10);
}

SdpProblem ScalarProblem(double a, double b) {
  SdpProblem pr;
  pr.a = M1(a);
  pr.b = M1(b);
  pr.d = Mat::Zero(1, 1);
  pr.na = Mat::Zero(1, 1);
  pr.nb = Mat::Zero(1, 1);
  pr.q = M1(1.0);
  pr.r = M1(1.0);
  return pr;
}

// Test-side eigen oracle: assembles the block without the library.
double OracleMargin(const SdpProblem& pr, const Mat& p, const Mat& y,
                    double eps) {
  const int n = pr.n();
  const int m = pr.m();
  const int q = pr.p();
  const int N = 3 * n + q + m;
  Mat g = Mat::Zero(N, N);
  std::vector<int> off = {0, n, 2 * n, 2 * n + q, 3 * n + q};
  auto put = [&](int bi, int bj, const Mat& blk) {
    g.block(off[bi], off[bj], blk.rows(), blk.cols()) = blk;
    if (bi != bj)
      g.block(off[bj], off[bi], blk.cols(), blk.rows()) = blk.transpose();
  };
  put(0, 0, -p + eps * pr.d * pr.d.transpose());
  put(0, 1, pr.a * p + pr.b * y);
  put(1, 1, -p);
  if (q > 0) {
    put(2, 1, pr.na * p + pr.nb * y);
    put(2, 2, -eps * Mat::Identity(q, q));
  }
  put(3, 1, p);
  put(4, 1, y);
  put(3, 3, -pr.q.inverse());
  put(4, 4, -pr.r.inverse());
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  return -es.eigenvalues().maxCoeff();
}

TEST(LmiTest, ScalarStableNominalIsFeasible) {
  const SdpProblem pr = ScalarProblem(0.5, 1.0);
  const LmiSolution sol = SolveLmi(pr);
  ASSERT_TRUE(sol.feasible) << sol.reason;
  EXPECT_GE(OracleMargin(pr, sol.p, sol.y, sol.eps), pr.strictness_tol);
  EXPECT_GT(sol.p(0, 0), 0.0);
  EXPECT_GT(sol.eps, 0.0);
  EXPECT_LT(std::abs(0.5 + sol.Gain()(0, 0)), 1.0);
}

TEST(LmiTest, UnstableUncontrollableIsInfeasible) {
  const LmiSolution sol = SolveLmi(ScalarProblem(2.0, 0.0));
  EXPECT_FALSE(sol.feasible);
  EXPECT_FALSE(sol.reason.empty());
}

TEST(LmiTest, AssemblyMatchesOracle) {
  Gen gen(7);
  SdpProblem pr;
  pr.a = gen.Gaussian(2, 2);
  pr.b = gen.Gaussian(2, 2);
  pr.d = gen.Gaussian(2, 3);
  pr.na = gen.Gaussian(3, 2);
  pr.nb = gen.Gaussian(3, 2);
  pr.q = gen.Spd(2);
  pr.r = gen.Spd(2);
  const Mat p = gen.Spd(2);
  const Mat y = gen.Gaussian(2, 2);
  const LmiCheck check = VerifyLmi(pr, p, y, 0.3);
  EXPECT_NEAR(check.margin, OracleMargin(pr, p, y, 0.3), 1e-10);
}

TEST(LmiTest, RejectsInconsistentDimensions) {
  SdpProblem pr = ScalarProblem(0.5, 1.0);
  pr.nb = Mat::Zero(2, 1);
  EXPECT_THROW(SolveLmi(pr), std::invalid_argument);
}

TEST(LmiProperty, FeasibleImpliesIndependentCheck) {
  Gen gen(99);
  int feasible = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const int n = gen.Int(1, 3);
    const int m = gen.Int(1, 2);
    const int q = gen.Int(1, 3);
    SdpProblem pr;
    pr.a = gen.Gaussian(n, n) * gen.Uniform(0.2, 1.2);
    pr.b = gen.Gaussian(n, m);
    pr.d = gen.Gaussian(n, q) * gen.Uniform(0.0, 0.3);
    pr.na = gen.Gaussian(q, n) * gen.Uniform(0.0, 0.3);
    pr.nb = gen.Gaussian(q, m) * gen.Uniform(0.0, 0.3);
    pr.q = gen.Spd(n);
    pr.r = gen.Spd(m);
    const LmiSolution sol = SolveLmi(pr);
    if (!sol.feasible) continue;
    ++feasible;
    ASSERT_GE(OracleMargin(pr, sol.p, sol.y, sol.eps), pr.strictness_tol)
        << "trial " << trial;
    Eigen::SelfAdjointEigenSolver<Mat> es(sol.p);
    ASSERT_GT(es.eigenvalues().minCoeff(), 0.0);
    ASSERT_GT(sol.eps, 0.0);
    // The nominal closed loop is Schur stable.
    Eigen::EigenSolver<Mat> cl(pr.a + pr.b * sol.Gain());
    ASSERT_LT(cl.eigenvalues().cwiseAbs().maxCoeff(), 1.0);
  }
  EXPECT_GT(feasible, 5);
}

TEST(OptimizeTest, GoldenSectionQuadratic) {
  const ScalarMinimum r =
      GoldenSection([](double x) { return (x - 0.3) * (x - 0.3); }, -1, 1);
  EXPECT_NEAR(r.x, 0.3, 1e-7);
}

TEST(OptimizeTest, GoldenSectionBoundaryMinimum) {
  const ScalarMinimum r = GoldenSection([](double x) { return x; }, -0.5, 0.5);
  EXPECT_DOUBLE_EQ(r.x, -0.5);
}

TEST(OptimizeTest, NelderMeadRosenbrock) {
  auto f = [](const Vec& x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  const SimplexMinimum r =
      NelderMead(f, V({-1.2, 1.0}), V({0.5, 0.5}), 5000, 1e-10);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-4);
  EXPECT_NEAR(r.x[1], 1.0, 1e-4);
}

}  // namespace
}  // namespace robust_track::numerics
