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

// Acceptance gate: one PASS/FAIL line per criterion. Tolerances are pinned
// below; the process exits nonzero when any criterion fails.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "generators.h"
#include "robust_track/adapt/envelope.h"
#include "robust_track/adapt/gpr.h"
#include "robust_track/adapt/rls.h"
#include "robust_track/control/bsc_controller.h"
#include "robust_track/control/lmi_controller.h"
#include "robust_track/control/smc_controller.h"
#include "robust_track/harness/calibration.h"
#include "robust_track/harness/config.h"
#include "robust_track/harness/metrics.h"
#include "robust_track/harness/runner.h"
#include "robust_track/harness/trace_io.h"
#include "robust_track/numerics/riccati.h"
#include "robust_track/plant/dynamics.h"
#include "robust_track/plant/tire.h"
#include "robust_track/tune/bayes.h"

namespace {

namespace rt = robust_track;
using rt::numerics::Mat;
using rt::numerics::Vec;
using rt::testing::Gen;
using Clock = std::chrono::steady_clock;

// Criterion 1.
constexpr int kCareSystems = 100;
constexpr double kCareRelTol = 1e-8;
constexpr double kCareBudgetS = 1.0;
// Criterion 2.
constexpr int kPolytopes = 20;
constexpr double kLmiStrictness = 1e-7;
// Criterion 3.
constexpr double kMaxReachingViolations = 0.005;
// Criterion 4.
constexpr double kWheelError = 20.0;    // rad/s
constexpr double kOmegaT = 100.0;       // N m, disturbance set edge
constexpr double kEntryDeadline = 0.5;  // s
// Criterion 5.
constexpr double kNoiselessTol = 1e-3;
constexpr double kNoisyTol = 0.02;
constexpr double kBatchTol = 1e-6;
// Criterion 6.
constexpr double kGprTol = 1e-10;
constexpr double kMinCoverage = 0.95;
// Criterion 7.
constexpr double kAlphaStar = 1.22;
constexpr double kAlphaTol = 0.05;
constexpr int kSyntheticIterations = 25;
// Criterion 8.
constexpr double kMaxLateralError = 0.15;  // m
constexpr double kMaxBetaDeg = 3.0;
constexpr double kRunBudgetS = 60.0;
constexpr double kReferenceMaxEy = 0.043;  // m, external simulator figure

const std::vector<std::uint64_t> kTuneSeeds{100, 101, 102};
const std::vector<std::uint64_t> kEvalSeeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Format(const char* fmt, double a, double b = 0.0, double c = 0.0,
                   double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c, d);
  return buf;
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

double MedianOf(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---------------------------------------------------------------- 1

Outcome Riccati() {
  Gen gen(20261016);
  double worst = 0.0;
  bool ok = true;
  const auto start = Clock::now();
  for (int trial = 0; trial < kCareSystems; ++trial) {
    const int n = gen.Int(1, 6);
    const int m = gen.Int(1, std::min(n, 3));
    const Mat a = gen.Gaussian(n, n);
    const Mat b = gen.Gaussian(n, m);
    const Mat q = gen.Spd(n, 1e-2);
    const Mat r = gen.Spd(m, 1e-1);
    const Mat p = rt::numerics::SolveCare(a, b, q, r);
    const Mat res = a.transpose() * p + p * a + q -
                    p * b * r.ldlt().solve(b.transpose() * p);
    const double rel = res.norm() / (1.0 + p.norm());
    worst = std::max(worst, rel);
    ok = ok && rel <= kCareRelTol;
  }
  const double elapsed = Seconds(start);
  ok = ok && elapsed < kCareBudgetS;
  return {ok, Format("worst residual/(1+|P|) %.2e, %.3f s for 100 systems",
                     worst, elapsed)};
}

// ---------------------------------------------------------------- 2

// Robust synthesis block rebuilt from the returned (P, Y, eps).
double BlockMargin(const rt::control::PolytopicModel& m, const Mat& q,
                   const Mat& r, const rt::control::LmiGain& g) {
  const int n = static_cast<int>(m.a_hat.rows());
  const int k = static_cast<int>(m.b_hat.cols());
  const int p = static_cast<int>(m.na.rows());
  const int dim = 3 * n + p + k;
  Mat blk = Mat::Zero(dim, dim);
  const Mat ap = m.a_hat * g.p + m.b_hat * g.y;
  const Mat unc = m.na * g.p + m.nb * g.y;
  blk.block(0, 0, n, n) = -g.p + g.eps * m.m * m.m.transpose();
  blk.block(0, n, n, n) = ap;
  blk.block(n, 0, n, n) = ap.transpose();
  blk.block(n, n, n, n) = -g.p;
  blk.block(2 * n, n, p, n) = unc;
  blk.block(n, 2 * n, n, p) = unc.transpose();
  blk.block(2 * n, 2 * n, p, p) = -g.eps * Mat::Identity(p, p);
  blk.block(2 * n + p, n, n, n) = g.p;
  blk.block(n, 2 * n + p, n, n) = g.p;
  blk.block(3 * n + p, n, k, n) = g.y;
  blk.block(n, 3 * n + p, n, k) = g.y.transpose();
  blk.block(2 * n + p, 2 * n + p, n, n) = -q.inverse();
  blk.block(3 * n + p, 3 * n + p, k, k) = -r.inverse();
  Eigen::SelfAdjointEigenSolver<Mat> es(blk);
  return -es.eigenvalues().maxCoeff();
}

double SpectralRadius(const Mat& a) {
  return Eigen::EigenSolver<Mat>(a).eigenvalues().cwiseAbs().maxCoeff();
}

Outcome LmiSoundness() {
  const rt::harness::Config config;
  const rt::plant::VehicleParams& nominal = config.vehicle;
  Gen gen(4242);
  int feasible = 0;
  int false_feasible = 0;
  double worst_radius = 0.0;
  for (int trial = 0; trial < kPolytopes; ++trial) {
    const rt::control::Theta center{nominal.c_sigma * gen.Uniform(0.9, 1.1),
                                    nominal.c_alpha * gen.Uniform(0.9, 1.1)};
    rt::control::ThetaRange range;
    range.c_sigma_lo = center.c_sigma * (1.0 - gen.Uniform(0.0, 0.3));
    range.c_sigma_hi = center.c_sigma * (1.0 + gen.Uniform(0.0, 0.3));
    range.c_alpha_lo = center.c_alpha * (1.0 - gen.Uniform(0.0, 0.3));
    range.c_alpha_hi = center.c_alpha * (1.0 + gen.Uniform(0.0, 0.3));
    Vec x(2), u(2);
    x << config.scenario.v_ref + gen.Uniform(-1.0, 1.0), gen.Uniform(-0.2, 0.2);
    u << gen.Uniform(-0.01, 0.01), gen.Uniform(-0.01, 0.01);
    const auto model = rt::control::BuildPolytope(
        range, center, x, u, config.controller_period,
        rt::control::LateralContext{gen.Uniform(-0.2, 0.2)}, nominal);
    const auto result = rt::control::Synthesize(
        model, config.lmi.q, config.lmi.r, trial, kLmiStrictness);
    if (!result.gain) continue;
    ++feasible;
    bool sound = BlockMargin(model, config.lmi.q, config.lmi.r, *result.gain) >=
                 kLmiStrictness;
    Eigen::SelfAdjointEigenSolver<Mat> p_eigs(result.gain->p);
    sound = sound && p_eigs.eigenvalues().minCoeff() > 0.0 &&
            result.gain->eps > 0.0;
    for (int v = 0; v < 4; ++v) {
      const double rho =
          SpectralRadius(model.a_hat + model.a_vertices[v] +
                         (model.b_hat + model.b_vertices[v]) * result.gain->k);
      worst_radius = std::max(worst_radius, rho);
      sound = sound && rho < 1.0;
    }
    if (!sound) ++false_feasible;
  }
  return {feasible > 0 && false_feasible == 0,
          Format("%.0f/20 feasible, %.0f false-feasible, worst vertex radius "
                 "%.6f",
                 feasible, false_feasible, worst_radius)};
}

// ---------------------------------------------------------------- 4

// Per wheel, the time after which |e_omega| never leaves the layer again;
// negative when it is outside at the end of the run.
using SettleTimes = std::array<double, 4>;

SettleTimes DriveWheels(double t_f, double sign, double rho) {
  const rt::harness::Config config;
  const rt::plant::VehicleParams truth = config.TruthParams();
  const rt::plant::VehicleParams& nominal = config.vehicle;
  rt::plant::VehicleState s =
      rt::plant::VehicleState::Cruising(config.scenario.v_ref, truth);
  const double offsets[4] = {kWheelError, -kWheelError, kWheelError,
                             -kWheelError};
  for (int i = 0; i < 4; ++i) s.w[i] += sign * offsets[i];
  rt::control::BscController bsc(nominal);
  bsc.set_envelope(rt::control::WheelEnvelope::Static(rho));
  const std::array<double, 4> sigma_ref{0.02, 0.02, 0.02, 0.02};
  SettleTimes settle;
  settle.fill(0.0);
  const double period = 0.01;
  for (int k = 0; k * period < 1.5; ++k) {
    const auto cmd = bsc.Update(s, sigma_ref, 0.0, rt::control::Theta{});
    rt::plant::PlantInput in;
    in.torque = cmd.torque;
    in.t_f = t_f;
    for (int i = 0; i < 4; ++i) {
      if (std::abs(cmd.e_omega[i]) > bsc.gains().boundary_layer) {
        settle[i] = -1.0;
      } else if (settle[i] < 0.0) {
        settle[i] = k * period;
      }
    }
    for (int j = 0; j < 10; ++j) s = rt::plant::Step(s, in, 1e-3, truth);
  }
  return settle;
}

// Largest nominal-vs-truth wheel torque gap over the slip band, plus
// rolling resistance and the disturbance edge.
double WheelEnvelopeBound() {
  const rt::harness::Config config;
  const rt::plant::VehicleParams truth = config.TruthParams();
  const rt::plant::VehicleParams& nominal = config.vehicle;
  double worst = 0.0;
  for (double sigma = -0.5; sigma <= 0.5; sigma += 1e-3) {
    const double f_true =
        rt::plant::DugoffForce(sigma, 0.0, truth.Fz(), truth).f_x;
    const double f_nom =
        rt::plant::DugoffForce(sigma, 0.0, nominal.Fz(), nominal).f_x;
    worst = std::max(worst, nominal.r_w * std::abs(f_true - f_nom));
  }
  return worst + truth.rolling_coeff * truth.Fz() * truth.r_w + kOmegaT;
}

Outcome BscConvergence() {
  const double rho = WheelEnvelopeBound();
  double latest = 0.0;
  bool ok = true;
  for (double t_f : {kOmegaT, -kOmegaT}) {
    for (double sign : {1.0, -1.0}) {
      for (double t : DriveWheels(t_f, sign, rho)) {
        ok = ok && t >= 0.0 && t <= kEntryDeadline;
        latest = std::max(latest, t < 0.0 ? 1e9 : t);
      }
    }
  }
  return {ok, Format("latest settle into the layer %.2f s, 4 wheels x 4 runs",
                     latest)};
}

// ---------------------------------------------------------------- 5

struct RlsSample {
  rt::plant::VehicleState state;
  double delta = 0.0;
  rt::adapt::Measurement measured;
};

RlsSample DrawRlsSample(Gen& gen, const rt::plant::VehicleParams& truth) {
  for (;;) {
    RlsSample out;
    rt::plant::VehicleState& s = out.state;
    s.v_x = gen.Uniform(10.0, 25.0);
    s.v_y = gen.Uniform(-0.3, 0.3);
    s.omega_z = gen.Uniform(-0.3, 0.3);
    out.delta = gen.Uniform(-0.05, 0.05);
    const auto v_wx = rt::plant::WheelLongitudinalSpeeds(s, out.delta, truth);
    for (int i = 0; i < 4; ++i) {
      s.w[i] = v_wx[i] * (1.0 + gen.Uniform(-0.03, 0.03)) / truth.r_w;
    }
    bool saturated = false;
    for (const auto& t : rt::plant::ComputeTireForces(s, out.delta, truth)) {
      saturated = saturated || t.lambda < 1.0;
    }
    if (saturated) continue;
    rt::plant::PlantInput in;
    in.delta = out.delta;
    const auto r = rt::plant::ComputeRates(s, in, truth);
    out.measured = {r.v_x_dot, r.beta_dot, r.omega_z_dot};
    return out;
  }
}

void AddNoise(rt::adapt::Measurement& m, Gen& gen, double level) {
  m.v_x_dot *= 1.0 + level * gen.Normal();
  m.beta_dot *= 1.0 + level * gen.Normal();
  m.omega_z_dot *= 1.0 + level * gen.Normal();
}

double WorstRelative(const Vec& theta, const Vec& truth) {
  return (theta.array() / truth.array() - 1.0).abs().maxCoeff();
}

Outcome RlsAccuracy() {
  const rt::harness::Config config;
  const rt::plant::VehicleParams truth = config.TruthParams();
  const rt::plant::VehicleParams& nominal = config.vehicle;
  const rt::control::Theta prior{nominal.c_sigma, nominal.c_alpha};
  Vec theta0(2), theta_true(2);
  theta0 << nominal.c_sigma, nominal.c_alpha;
  theta_true << truth.c_sigma, truth.c_alpha;

  // Noiseless.
  rt::adapt::RlsOptions options;
  Gen gen(5005);
  auto state = rt::adapt::RlsState::Initial(theta0, options.p0);
  for (int k = 0; k < 500; ++k) {
    const RlsSample smp = DrawRlsSample(gen, truth);
    rt::adapt::RlsStep(state,
                       rt::adapt::BuildRegressor(smp.state, smp.measured,
                                                 smp.delta, prior, nominal),
                       options);
  }
  const double noiseless = WorstRelative(state.theta, theta_true);

  // 1% multiplicative noise, 20 seeds.
  std::vector<double> noisy;
  for (int seed = 0; seed < 20; ++seed) {
    Gen g(9000 + seed);
    auto st = rt::adapt::RlsState::Initial(theta0, options.p0);
    for (int k = 0; k < 1000; ++k) {
      RlsSample smp = DrawRlsSample(g, truth);
      AddNoise(smp.measured, g, 0.01);
      rt::adapt::RlsStep(st,
                         rt::adapt::BuildRegressor(smp.state, smp.measured,
                                                   smp.delta, prior, nominal),
                         options);
    }
    noisy.push_back(WorstRelative(st.theta, theta_true));
  }
  const double noisy_median = MedianOf(noisy);

  // Unit forgetting against normal equations on the same samples.
  rt::adapt::RlsOptions fixed;
  fixed.adaptive = false;
  fixed.fixed_lambda = 1.0;
  Gen gb(6006);
  auto st = rt::adapt::RlsState::Initial(theta0, fixed.p0);
  Mat normal = Mat::Zero(2, 2);
  Vec rhs = Vec::Zero(2);
  for (int k = 0; k < 300; ++k) {
    RlsSample smp = DrawRlsSample(gb, truth);
    AddNoise(smp.measured, gb, 0.01);
    const auto reg = rt::adapt::BuildRegressor(smp.state, smp.measured,
                                               smp.delta, prior, nominal);
    if (!reg.accepted) continue;
    rt::adapt::RlsStep(st, reg, fixed);
    normal += reg.phi.transpose() * reg.phi;
    rhs += reg.phi.transpose() * reg.y;
  }
  const Vec batch = normal.ldlt().solve(rhs);
  const double batch_gap = WorstRelative(st.theta, batch);

  const bool ok = noiseless <= kNoiselessTol && noisy_median <= kNoisyTol &&
                  batch_gap <= kBatchTol;
  return {ok, Format("noiseless %.2e, noisy median %.2e, batch gap %.2e",
                     noiseless, noisy_median, batch_gap)};
}

// ---------------------------------------------------------------- 6

// Posterior from an explicit inverse of the Gram matrix.
rt::adapt::GprPrediction GramPosterior(const Mat& x, const Vec& y,
                                       const rt::adapt::GprHyper& h,
                                       const Vec& xs) {
  const Eigen::Index n = x.rows();
  const double two_l2 = 2.0 * h.length * h.length;
  Mat k(n, n);
  Vec ks(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    ks[i] = h.sigma_f2 *
            std::exp(-(x.row(i).transpose() - xs).squaredNorm() / two_l2);
    for (Eigen::Index j = 0; j < n; ++j) {
      k(i, j) =
          h.sigma_f2 * std::exp(-(x.row(i) - x.row(j)).squaredNorm() / two_l2);
    }
  }
  const Mat inv =
      (k + h.sigma_eps2 * Mat::Identity(n, n)).fullPivLu().inverse();
  return {ks.dot(inv * y), h.sigma_f2 - ks.dot(inv * ks)};
}

struct ChannelCoverage {
  std::array<long, 3> covered{};
  std::array<long, 3> total{};

  double Fraction(int c) const {
    return total[c] == 0 ? 0.0 : static_cast<double>(covered[c]) / total[c];
  }
};

// Sideslip rate, yaw acceleration and wheel torque channels.
ChannelCoverage EnvelopeCoverage(const rt::harness::Config& config,
                                 const rt::harness::Calibration& cal) {
  // Fresh disturbed excitation, never seen by the fits.
  const auto samples =
      rt::harness::ExcitationRun(config, true, config.calibration.seed + 1000);
  rt::plant::VehicleParams model = config.vehicle;
  model.c_sigma = cal.rls.theta[0];
  model.c_alpha = cal.rls.theta[1];
  ChannelCoverage out;
  auto tally = [&](int channel, double mismatch, double bound) {
    ++out.total[channel];
    if (std::abs(mismatch) <= bound) ++out.covered[channel];
  };
  for (const auto& s : samples) {
    rt::plant::PlantInput commanded = s.input;
    commanded.f_ey = 0.0;
    commanded.m_ez = 0.0;
    const auto pred = rt::plant::ComputeRates(s.state, commanded, model);
    const Vec xc = rt::harness::ChassisFeatures(s.state, s.input.delta);
    tally(0, s.truth.beta_dot - pred.beta_dot, cal.beta_dot.Bound(xc));
    tally(1, s.truth.omega_z_dot - pred.omega_z_dot, cal.omega_dot.Bound(xc));
    for (int i = 0; i < rt::plant::kNumWheels; ++i) {
      const double drift =
          -model.r_w * pred.tires[i].f_x - model.b_e * s.state.w[i];
      const double unexplained =
          model.j_w * s.truth.w_dot[i] - s.input.torque[i] - drift;
      const Vec xw =
          rt::harness::WheelFeatures(s.truth.tires[i].sigma, s.input.torque[i]);
      tally(2, unexplained, cal.wheel.Bound(xw));
    }
  }
  return out;
}

Outcome GprExactness(const rt::harness::Config& config,
                     const rt::harness::Calibration& cal) {
  Gen gen(6161);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = gen.Int(2, 50);
    const int d = gen.Int(1, 4);
    const Mat x = gen.Gaussian(n, d);
    const Vec y = gen.Gaussian(n, 1);
    const rt::adapt::GprHyper h{gen.Uniform(0.3, 2.0), gen.Uniform(0.5, 2.0),
                                gen.Uniform(0.01, 0.2)};
    const rt::adapt::GprModel model(x, y, h);
    for (int q = 0; q < 20; ++q) {
      const Vec xs = gen.Gaussian(d, 1);
      const auto got = model.Predict(xs);
      const auto want = GramPosterior(x, y, h, xs);
      worst = std::max({worst, std::abs(got.mean - want.mean),
                        std::abs(got.variance - want.variance)});
    }
  }
  const ChannelCoverage coverage = EnvelopeCoverage(config, cal);
  bool covered = true;
  for (int c = 0; c < 3; ++c) {
    covered = covered && coverage.Fraction(c) >= kMinCoverage;
  }
  return {worst <= kGprTol && covered,
          Format("worst posterior gap %.2e, held-out coverage beta_dot %.4f "
                 "omega_dot %.4f wheel %.4f",
                 worst, coverage.Fraction(0), coverage.Fraction(1),
                 coverage.Fraction(2))};
}

// ---------------------------------------------------------------- 7

bool Monotone(const std::vector<double>& best) {
  for (std::size_t i = 1; i < best.size(); ++i) {
    if (best[i] > best[i - 1]) return false;
  }
  return true;
}

// Summed J_G over the tuning seeds, recomputed from the cost samples.
double FrozenCost(const rt::harness::Config& config,
                  const rt::harness::Calibration& cal, const Vec& alpha) {
  rt::harness::Config c = config;
  c.boundaries = {alpha[0], alpha[1], alpha[2]};
  double total = 0.0;
  for (std::uint64_t seed : kTuneSeeds) {
    const auto r = rt::harness::Run(c, rt::harness::Mode::kArc, seed, cal);
    total += rt::tune::GlobalCost(r.cost, c.cost, r.metrics.diverged).value;
  }
  return total;
}

Outcome BayesTuning(const rt::harness::Config& config,
                    const rt::harness::Calibration& cal,
                    const rt::tune::TuneResult& tuned) {
  const auto synthetic = rt::tune::Tune(
      1, kSyntheticIterations, rt::tune::TuneOptions(),
      [](const std::vector<Vec>& alphas) {
        std::vector<rt::tune::CostResult> out;
        for (const Vec& a : alphas) {
          out.push_back({(a[0] - kAlphaStar) * (a[0] - kAlphaStar), false});
        }
        return out;
      });
  const double alpha_gap = std::abs(synthetic.alpha[0] - kAlphaStar);
  const double j_tuned = FrozenCost(config, cal, tuned.alpha);
  const double j_unit = FrozenCost(config, cal, Vec::Ones(3));
  const bool ok = alpha_gap <= kAlphaTol && j_tuned <= j_unit &&
                  Monotone(synthetic.best_so_far) &&
                  Monotone(tuned.best_so_far);
  return {ok, Format("|alpha-1.22| %.4f; J_G tuned %.2f vs unit %.2f; "
                     "best-so-far monotone %.0f",
                     alpha_gap, j_tuned, j_unit,
                     Monotone(synthetic.best_so_far) &&
                         Monotone(tuned.best_so_far))};
}

// ---------------------------------------------------------------- 3

Outcome SmcReaching(const rt::harness::Config& tuned_config,
                    const rt::harness::Calibration& cal) {
  const double layer = tuned_config.smc.boundary_layer;
  const auto disturbed =
      rt::harness::Run(tuned_config, rt::harness::Mode::kArc, 0, cal);
  rt::harness::Config calm = tuned_config;
  calm.scenario.disturbances = false;
  const auto quiet = rt::harness::Run(calm, rt::harness::Mode::kArc, 0, cal);
  const auto a = rt::control::CheckReaching(disturbed.reaching, layer);
  const auto b = rt::control::CheckReaching(quiet.reaching, layer);
  const bool ok =
      a.ViolationFraction() <= kMaxReachingViolations && b.violations == 0;
  return {ok, Format("disturbed: %.0f/%.0f violations; disturbance-free: "
                     "%.0f/%.0f",
                     a.violations, a.checked, b.violations, b.checked)};
}

// ---------------------------------------------------------------- 8

Outcome EndToEnd(const rt::harness::Config& tuned_config,
                 const rt::harness::Calibration& cal) {
  const auto start = Clock::now();
  const auto r =
      rt::harness::Run(tuned_config, rt::harness::Mode::kArc, 0, cal);
  const double elapsed = Seconds(start);
  const double beta_deg = r.metrics.max_beta * 180.0 / M_PI;
  const bool ok = !r.metrics.diverged &&
                  r.metrics.max_e_y <= kMaxLateralError &&
                  beta_deg <= kMaxBetaDeg && elapsed <= kRunBudgetS;
  return {ok, Format("max|e_y| %.4f m (reference %.3f m), max|beta| %.3f deg, "
                     "run %.2f s",
                     r.metrics.max_e_y, kReferenceMaxEy, beta_deg, elapsed)};
}

// ---------------------------------------------------------------- 9

Outcome ArcVersusFixed(const rt::harness::Config& tuned_config,
                       const rt::harness::Calibration& cal) {
  const auto arc = rt::harness::RunBatch(tuned_config, rt::harness::Mode::kArc,
                                         kEvalSeeds, cal);
  const auto lmi = rt::harness::RunBatch(
      tuned_config, rt::harness::Mode::kLmiFixed, kEvalSeeds, cal);
  std::vector<double> arc_ey, lmi_ey, arc_sm, lmi_sm;
  for (const auto& r : arc) {
    arc_ey.push_back(r.metrics.max_e_y);
    arc_sm.push_back(r.metrics.steering_smoothness);
  }
  for (const auto& r : lmi) {
    lmi_ey.push_back(r.metrics.max_e_y);
    lmi_sm.push_back(r.metrics.steering_smoothness);
  }
  const double a_ey = MedianOf(arc_ey);
  const double l_ey = MedianOf(lmi_ey);
  const double a_sm = MedianOf(arc_sm);
  const double l_sm = MedianOf(lmi_sm);
  return {a_ey < l_ey && a_sm < l_sm,
          Format("median max|e_y| %.5f vs %.5f m; median sum|ddelta| %.4f vs "
                 "%.4f rad",
                 a_ey, l_ey, a_sm, l_sm)};
}

// ---------------------------------------------------------------- 10

std::string TraceBytes(const rt::harness::RunResult& r) {
  std::ostringstream out;
  rt::harness::WriteTraceCsv(r.trace, out);
  return out.str();
}

Outcome Determinism(const rt::harness::Config& tuned_config,
                    const rt::harness::Calibration& cal) {
  // Same calibration, repeated run.
  const std::string a = TraceBytes(
      rt::harness::Run(tuned_config, rt::harness::Mode::kArc, 7, cal));
  const std::string b = TraceBytes(
      rt::harness::Run(tuned_config, rt::harness::Mode::kArc, 7, cal));
  // Independent calibrations from the same config.
  rt::harness::Config quick = tuned_config;
  quick.calibration.duration = 6.0;
  quick.gpr.subset_cap = 150;
  quick.gpr.restarts = 1;
  quick.gpr.max_iterations = 60;
  const std::string c = TraceBytes(rt::harness::Run(
      quick, rt::harness::Mode::kLmiFixed, 3, rt::harness::Calibrate(quick)));
  const std::string d = TraceBytes(rt::harness::Run(
      quick, rt::harness::Mode::kLmiFixed, 3, rt::harness::Calibrate(quick)));
  const bool ok = !a.empty() && a == b && c == d;
  return {ok, Format("trace sizes %.0f and %.0f bytes, %.0f identical pairs",
                     a.size(), c.size(), (a == b) + (c == d))};
}

}  // namespace

int main() {
  std::array<Outcome, 10> outcomes;
  const char* names[10] = {"riccati",         "lmi soundness",  "smc reaching",
                           "bsc convergence", "rls accuracy",   "gpr exactness",
                           "bayes tuning",    "end-to-end dlc", "arc vs fixed",
                           "determinism"};
  auto report = [&](int index) {
    const Outcome& o = outcomes[index - 1];
    std::printf("criterion %2d %s  %-16s %s\n", index, o.pass ? "PASS" : "FAIL",
                names[index - 1], o.detail.c_str());
    std::fflush(stdout);
  };

  outcomes[0] = Riccati();
  report(1);
  outcomes[1] = LmiSoundness();
  report(2);
  outcomes[3] = BscConvergence();
  report(4);
  outcomes[4] = RlsAccuracy();
  report(5);

  const rt::harness::Config config;
  auto start = Clock::now();
  const rt::harness::Calibration cal = rt::harness::Calibrate(config);
  std::printf("# calibration %.1f s\n", Seconds(start));
  outcomes[5] = GprExactness(config, cal);
  report(6);

  start = Clock::now();
  const rt::tune::TuneResult tuned =
      rt::harness::TuneBoundaries(config, cal, kTuneSeeds);
  std::printf("# tuning %.1f s, alpha = (%.4f, %.4f, %.4f)\n", Seconds(start),
              tuned.alpha[0], tuned.alpha[1], tuned.alpha[2]);
  rt::harness::Config tuned_config = config;
  tuned_config.boundaries = {tuned.alpha[0], tuned.alpha[1], tuned.alpha[2]};

  outcomes[6] = BayesTuning(config, cal, tuned);
  report(7);
  outcomes[2] = SmcReaching(tuned_config, cal);
  report(3);
  outcomes[7] = EndToEnd(tuned_config, cal);
  report(8);
  outcomes[8] = ArcVersusFixed(tuned_config, cal);
  report(9);
  outcomes[9] = Determinism(tuned_config, cal);
  report(10);

  int passed = 0;
  for (const Outcome& o : outcomes) passed += o.pass ? 1 : 0;
  std::printf("# %d/10 criteria passed\n", passed);
  return passed == 10 ? 0 : 1;
}
