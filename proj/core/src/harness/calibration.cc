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
#include "robust_track/harness/calibration.h"

#include <cmath>
#include <numbers>
#include <random>

#include "robust_track/harness/scenario.h"
#include "robust_track/plant/plant.h"
#include "robust_track/plant/tire.h"

namespace robust_track::harness {

namespace {

using numerics::Mat;
using numerics::Vec;

constexpr double kSteerAmplitude = 0.04;   // rad
constexpr double kChirpStart = 0.2;        // Hz
constexpr double kChirpEnd = 1.5;          // Hz
constexpr double kPulseAmplitude = 300.0;  // N m
constexpr double kPulseHold = 0.5;         // s
constexpr double kSpeedGain = 300.0;       // N m per m/s and wheel
constexpr int kPlantSubsteps = 10;

plant::VehicleParams WithTheta(plant::VehicleParams p, const Vec& theta) {
  p.c_sigma = theta[0];
  p.c_alpha = theta[1];
  return p;
}

double Uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

adapt::StandardizedGpr FitResidual(const Mat& x, const Vec& y,
                                   adapt::GprFitOptions options,
                                   std::uint64_t salt) {
  options.seed ^= salt;
  return adapt::StandardizedGpr::Fit(x, y, options);
}

}  // namespace

Vec ChassisFeatures(const plant::VehicleState& state, double delta) {
  Vec x(4);
  x << state.Beta(), state.omega_z, delta, state.v_x;
  return x;
}

Vec WheelFeatures(double sigma, double torque) {
  Vec x(2);
  x << sigma, torque;
  return x;
}

std::vector<ExcitationSample> ExcitationRun(const Config& config,
                                            bool disturbances,
                                            std::uint64_t seed) {
  const double period = config.controller_period;
  const double dt = period / kPlantSubsteps;
  const double v_ref = config.scenario.v_ref;
  const plant::VehicleParams truth = config.TruthParams();
  plant::VehicleState initial;
  initial.v_x = v_ref;
  initial.w.fill(v_ref / truth.r_w);
  plant::Plant plant(truth, {config.scenario.steering_lag}, initial);

  const long ticks = std::lround(config.calibration.duration / period);
  const DisturbanceSchedule schedule =
      disturbances ? DisturbanceSchedule::FromScenario(
                         config.scenario, config.calibration.duration, seed)
                   : DisturbanceSchedule();
  std::mt19937_64 rng(seed);
  std::array<double, plant::kNumWheels> pulse{};
  const long pulse_ticks = std::max(1L, std::lround(kPulseHold / period));

  std::vector<ExcitationSample> out;
  out.reserve(static_cast<std::size_t>(ticks));
  double phase = 0.0;
  for (long k = 0; k < ticks; ++k) {
    const double t = k * period;
    if (k % pulse_ticks == 0) {
      for (double& p : pulse) p = kPulseAmplitude * (2.0 * Uniform(rng) - 1.0);
    }
    const double freq = kChirpStart + (kChirpEnd - kChirpStart) * t /
                                          config.calibration.duration;
    phase += 2.0 * std::numbers::pi * freq * period;
    plant::PlantInput input;
    input.delta = kSteerAmplitude * std::sin(phase);
    const double hold = kSpeedGain * (v_ref - plant.state().v_x);
    for (int i = 0; i < plant::kNumWheels; ++i)
      input.torque[i] = hold + pulse[i];
    for (int j = 0; j < kPlantSubsteps; ++j) {
      const double ts = t + j * dt;
      input.f_ey = schedule.Force(ts);
      input.m_ez = schedule.Moment(ts);
      plant.Advance(input, dt);
    }
    ExcitationSample s;
    s.t = t + period;
    s.state = plant.state();
    s.input = input;
    s.delta_applied = plant.steering();
    s.truth = plant.Rates();
    out.push_back(s);
  }
  return out;
}

adapt::RlsState Identify(const Config& config,
                         const std::vector<ExcitationSample>& samples,
                         std::vector<RlsTraceRow>* trace) {
  Vec theta0(2);
  theta0 << config.vehicle.c_sigma, config.vehicle.c_alpha;
  adapt::RlsState state = adapt::RlsState::Initial(theta0, config.rls.p0);
  long step = 0;
  for (const ExcitationSample& s : samples) {
    const adapt::Measurement meas{s.truth.v_x_dot, s.truth.beta_dot,
                                  s.truth.omega_z_dot};
    const control::Theta check{state.theta[0], state.theta[1]};
    const adapt::Regression reg = adapt::BuildRegressor(
        s.state, meas, s.delta_applied, check, config.vehicle);
    const adapt::RlsStepInfo info = adapt::RlsStep(state, reg, config.rls);
    if (trace != nullptr) {
      trace->push_back({step, state.theta[0], state.theta[1], info.lambda,
                        info.epsilon, state.p(0, 0), state.p(1, 1),
                        info.updated});
    }
    ++step;
  }
  return state;
}

Calibration Calibrate(const Config& config) {
  config.Validate();
  Calibration cal;
  const std::uint64_t seed = config.calibration.seed;
  cal.rls =
      Identify(config, ExcitationRun(config, false, seed), &cal.rls_trace);
  const plant::VehicleParams model = WithTheta(config.vehicle, cal.rls.theta);

  const std::vector<ExcitationSample> samples =
      ExcitationRun(config, config.scenario.disturbances, seed + 1);
  const Eigen::Index n = static_cast<Eigen::Index>(samples.size());
  Mat xc(n, 4);
  Vec beta_truth(n), beta_model(n), omega_truth(n), omega_model(n);
  Mat xw(n * plant::kNumWheels, 2);
  Vec wheel_truth(n * plant::kNumWheels);
  const control::Theta identified{cal.rls.theta[0], cal.rls.theta[1]};
  double eps_sq = 0.0;
  long eps_count = 0;
  for (Eigen::Index r = 0; r < n; ++r) {
    const ExcitationSample& s = samples[r];
    const adapt::Regression reg = adapt::BuildRegressor(
        s.state, {s.truth.v_x_dot, s.truth.beta_dot, s.truth.omega_z_dot},
        s.delta_applied, identified, config.vehicle);
    if (reg.accepted) {
      eps_sq += (reg.y - reg.phi * cal.rls.theta).squaredNorm();
      ++eps_count;
    }
    // Commanded steering: the actuator lag belongs to the mismatch.
    plant::PlantInput commanded = s.input;
    commanded.f_ey = commanded.m_ez = 0.0;
    const plant::StateRates pred =
        plant::ComputeRates(s.state, commanded, model);
    xc.row(r) = ChassisFeatures(s.state, s.input.delta).transpose();
    beta_truth[r] = s.truth.beta_dot;
    beta_model[r] = pred.beta_dot;
    omega_truth[r] = s.truth.omega_z_dot;
    omega_model[r] = pred.omega_z_dot;
    for (int i = 0; i < plant::kNumWheels; ++i) {
      const Eigen::Index row = r * plant::kNumWheels + i;
      const double sigma = s.truth.tires[i].sigma;
      const double torque = s.input.torque[i];
      xw.row(row) = WheelFeatures(sigma, torque).transpose();
      // Torque the nominal wheel model cannot explain.
      const double drift =
          -model.r_w * pred.tires[i].f_x - model.b_e * s.state.w[i];
      wheel_truth[row] = model.j_w * s.truth.w_dot[i] - torque - drift;
    }
  }

  if (eps_count > 0) {
    cal.residual_rms = std::sqrt(eps_sq / static_cast<double>(eps_count));
  }

  cal.gpr_beta_dot = FitResidual(xc, beta_truth - beta_model, config.gpr, 0x1);
  cal.gpr_omega_dot =
      FitResidual(xc, omega_truth - omega_model, config.gpr, 0x2);
  cal.gpr_wheel = FitResidual(xw, wheel_truth, config.gpr, 0x3);

  Vec beta_gpr(n), omega_gpr(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Vec x = xc.row(r).transpose();
    beta_gpr[r] = beta_model[r] + cal.gpr_beta_dot.PredictMean(x);
    omega_gpr[r] = omega_model[r] + cal.gpr_omega_dot.PredictMean(x);
  }
  Vec wheel_gpr(xw.rows());
  for (Eigen::Index r = 0; r < xw.rows(); ++r) {
    wheel_gpr[r] = cal.gpr_wheel.PredictMean(xw.row(r).transpose());
  }
  const int bins = config.calibration.bins;
  const auto chassis_axes = adapt::AxesFromData(xc, bins);
  cal.beta_dot = adapt::BuildEnvelopes(chassis_axes, xc, beta_gpr, beta_model,
                                       beta_truth, 1.0, 1.0);
  cal.omega_dot = adapt::BuildEnvelopes(chassis_axes, xc, omega_gpr,
                                        omega_model, omega_truth, 1.0, 1.0);
  cal.wheel =
      adapt::BuildEnvelopes(adapt::AxesFromData(xw, bins), xw, wheel_gpr,
                            Vec::Zero(xw.rows()), wheel_truth, 1.0, 1.0);
  return cal;
}

}  // namespace robust_track::harness
