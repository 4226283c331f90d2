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
#include "robust_track/harness/runner.h"

#include <algorithm>
#include <cmath>
#include <memory>

#include "robust_track/adapt/rls.h"
#include "robust_track/common/errors.h"
#include "robust_track/control/bsc_controller.h"
#include "robust_track/control/lmi_controller.h"
#include "robust_track/harness/parallel.h"
#include "robust_track/harness/scenario.h"
#include "robust_track/plant/plant.h"
#include "robust_track/plant/tire.h"
#include "robust_track/tracking/beta_allocation.h"
#include "robust_track/tracking/lqr_tracker.h"
#include "robust_track/tracking/phase_trajectory.h"

namespace robust_track::harness {

namespace {

using numerics::Vec;

constexpr int kPlantSubsteps = 10;
// u_s is a yaw moment in kN m.
constexpr double kMomentUnit = 1000.0;

using WheelFeatureSet = std::array<Vec, plant::kNumWheels>;

plant::VehicleParams WithTheta(plant::VehicleParams p,
                               const control::Theta& theta) {
  p.c_sigma = theta.c_sigma;
  p.c_alpha = theta.c_alpha;
  return p;
}

control::ThetaRange ArcRange(const adapt::RlsState& rls, const Config& c) {
  return tune::ScaleRange(adapt::RangeFromCovariance(rls, c.rls_n_sigma, c.rls),
                          c.boundaries.alpha_theta);
}

adapt::EnvelopeTable Scaled(adapt::EnvelopeTable table,
                            const BoundaryScaling& s) {
  table.alpha_i = s.alpha_i;
  table.alpha_e = s.alpha_e;
  return table;
}

double MaxCell(const adapt::EnvelopeGrid& grid) {
  const auto& v = grid.values();
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

double MaxBound(const adapt::EnvelopeTable& t) {
  return MaxCell(t.internal) + MaxCell(t.external);
}

double Utilization(const plant::TireForce& f, double mu) {
  const double cap = mu * f.f_z;
  return (f.f_x * f.f_x + f.f_y * f.f_y) / (cap * cap);
}

// Chassis envelope in u_s units: (|d omega_dot| + xi |d beta_dot|) / k.
control::MismatchEnvelope ChassisEnvelope(const Calibration& cal,
                                          const Config& c) {
  const double k_hat = kMomentUnit / c.vehicle.i_z;
  const double xi = c.smc.xi;
  auto beta = std::make_shared<adapt::EnvelopeTable>(
      Scaled(cal.beta_dot, c.boundaries));
  auto omega = std::make_shared<adapt::EnvelopeTable>(
      Scaled(cal.omega_dot, c.boundaries));
  control::MismatchEnvelope env;
  env.source = control::EnvelopeSource::kGpr;
  env.bound = [beta, omega, k_hat, xi](const plant::VehicleState& state,
                                       double delta) {
    const Vec x = ChassisFeatures(state, delta);
    return (omega->Bound(x) + xi * beta->Bound(x)) / k_hat;
  };
  return env;
}

control::WheelEnvelope WheelEnvelopeFor(
    const Calibration& cal, const Config& c,
    std::shared_ptr<const WheelFeatureSet> features) {
  auto table =
      std::make_shared<adapt::EnvelopeTable>(Scaled(cal.wheel, c.boundaries));
  control::WheelEnvelope env;
  env.rho = [table, features](int wheel, double) {
    return table->Bound((*features)[wheel]);
  };
  return env;
}

}  // namespace

std::string ModeName(Mode mode) { return mode == Mode::kArc ? "arc" : "lmi"; }

Mode ParseMode(std::string_view name) {
  if (name == "arc") return Mode::kArc;
  if (name == "lmi") return Mode::kLmiFixed;
  throw ConfigError("unknown controller mode `" + std::string(name) +
                    "` (expected arc or lmi)");
}

double BaselineStiffnessFraction(const Config& config) {
  const plant::VehicleParams& nominal = config.vehicle;
  const control::Theta center{nominal.c_sigma, nominal.c_alpha};
  Vec x_ref(2);
  x_ref << config.scenario.v_ref, 0.0;
  const Vec u_ref = Vec::Zero(2);
  auto feasible = [&](double fraction) {
    const control::PolytopicModel model = control::BuildPolytope(
        control::ThetaRange::Around(center, fraction), center, x_ref, u_ref,
        config.controller_period, control::LateralContext{}, nominal);
    return control::Synthesize(model, config.lmi.q, config.lmi.r, 0,
                               config.lmi.strictness_tol)
        .gain.has_value();
  };
  double lo = 0.0;
  double hi = config.baseline.stiffness_fraction;
  if (feasible(hi)) return hi;
  if (!feasible(lo)) return 0.0;
  while (hi - lo > 1e-4) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

RunResult Run(const Config& config, Mode mode, std::uint64_t seed,
              const Calibration& cal) {
  config.Validate();
  const double period = config.controller_period;
  const double dt = period / kPlantSubsteps;
  const ScenarioConfig& sc = config.scenario;
  const plant::VehicleParams& nominal = config.vehicle;
  const std::vector<tracking::ReferencePoint> refs =
      GenerateReference(sc, period);
  const DisturbanceSchedule schedule = DisturbanceSchedule::FromScenario(
      sc, static_cast<double>(refs.size()) * period, seed);

  const plant::VehicleParams truth = config.TruthParams();
  plant::VehicleState initial;
  initial.v_x = sc.v_ref;
  initial.w.fill(sc.v_ref / truth.r_w);
  plant::Plant plant(truth, {sc.steering_lag}, initial);

  tracking::LqrTracker lqr(config.lqr);
  control::LmiControllerOptions lmi_options = config.lmi;
  lmi_options.period = period;
  control::LmiController lmi(nominal, lmi_options);
  control::SmcController smc(nominal, {config.smc, config.smc_moment_backoff});
  control::BscController bsc(nominal, config.bsc, period);

  const bool arc = mode == Mode::kArc;
  adapt::RlsState rls = cal.rls;
  adapt::RlsOptions rls_options = config.rls;
  if (config.rls_sigma_eps_auto && cal.residual_rms > 0.0) {
    rls_options.sigma_eps = 3.0 * cal.residual_rms;
  }
  control::Theta theta{nominal.c_sigma, nominal.c_alpha};
  control::ThetaRange range;
  auto features = std::make_shared<WheelFeatureSet>();
  features->fill(WheelFeatures(0.0, 0.0));
  if (arc) {
    theta = {rls.theta[0], rls.theta[1]};
    range = ArcRange(rls, config);
    smc.set_envelope(ChassisEnvelope(cal, config));
    bsc.set_envelope(WheelEnvelopeFor(cal, config, features));
  } else {
    range =
        control::ThetaRange::Around(theta, BaselineStiffnessFraction(config));
    const double scale = config.baseline.envelope_scale;
    const double k_hat = kMomentUnit / nominal.i_z;
    smc.set_envelope(control::MismatchEnvelope::Static(
        scale *
        (MaxBound(cal.omega_dot) + config.smc.xi * MaxBound(cal.beta_dot)) /
        k_hat));
    bsc.set_envelope(
        control::WheelEnvelope::Static(scale * MaxBound(cal.wheel)));
  }

  RunResult result;
  result.trace.reserve(refs.size());
  result.cost.reserve(refs.size());
  result.reaching.reserve(refs.size());
  tracking::PhaseTrajectory traj;
  double delta_cmd = 0.0;
  std::array<double, plant::kNumWheels> last_torque{};
  double max_omega_error = 0.0;
  bool diverged = false;

  for (std::size_t k = 0; k < refs.size(); ++k) {
    const double t = static_cast<double>(k) * period;
    const plant::VehicleState state = plant.state();
    const plant::StateRates rates = plant.Rates();
    const double delta_meas = plant.steering();

    TraceRow row;
    row.t = t;
    row.x = state.x;
    row.y = state.y;
    row.psi = state.psi;
    row.v_x = state.v_x;
    row.v_y = state.v_y;
    row.omega_z = state.omega_z;
    row.beta = state.Beta();
    row.delta = delta_cmd;
    for (int i = 0; i < plant::kNumWheels; ++i) {
      row.sigma[i] = rates.tires[i].sigma;
      row.torque[i] = last_torque[i];
    }

    try {
      const tracking::DesiredMotion motion = lqr.Update(state, refs[k]);
      const tracking::TrackingError err = lqr.last_error();
      row.e_x = err.e_x;
      row.e_y = err.e_y;
      row.e_psi = err.e_psi;
      if (!(std::abs(err.e_y) <= sc.max_lateral_error) ||
          !(std::abs(row.beta) <= sc.max_beta)) {
        row.flags |= kFlagDiverged;
        diverged = true;
        result.trace.push_back(row);
        break;
      }

      if (arc) {
        const adapt::Measurement meas{rates.v_x_dot, rates.beta_dot,
                                      rates.omega_z_dot};
        const adapt::Regression reg =
            adapt::BuildRegressor(state, meas, delta_meas, theta, nominal);
        const adapt::RlsStepInfo info = adapt::RlsStep(rls, reg, rls_options);
        if (!info.updated) row.flags |= kFlagRlsSkipped;
        theta = {rls.theta[0], rls.theta[1]};
        range = ArcRange(rls, config);
      }
      const plant::VehicleParams model = WithTheta(nominal, theta);

      const tracking::BetaAllocation beta = tracking::AllocateBeta(
          state, plant::ComputeTireForces(state, delta_meas, model), model,
          config.w_beta, {motion.omega_des, period, traj.beta_des});
      if (beta.saturated) row.flags |= kFlagBetaSaturated;
      traj = tracking::UpdatePhaseTrajectory(
          traj, motion.v_des, motion.omega_des, beta.beta_dot, period);

      const control::LmiCommand lc = lmi.Update(state, traj, theta, range);
      const control::LmiStepInfo& li = lmi.last_step();
      if (li.infeasible) row.flags |= kFlagLmiInfeasible;
      if (li.stale) row.flags |= kFlagLmiStale;
      if (li.conservative) row.flags |= kFlagLmiConservative;
      delta_cmd =
          control::SteeringCommand(state, lc.alpha_des, model, delta_cmd);

      for (int i = 0; i < plant::kNumWheels; ++i) {
        (*features)[i] = WheelFeatures(rates.tires[i].sigma, last_torque[i]);
      }
      const control::SmcCommand smc_cmd =
          smc.Update(state, traj, lc.sigma_des, delta_cmd, theta);
      if (smc_cmd.bypass) row.flags |= kFlagSmcBypass;
      if (smc_cmd.allocation_failed) row.flags |= kFlagAllocationFailed;
      const std::array<double, plant::kNumWheels> sigma_ref{
          smc_cmd.sigma_left, smc_cmd.sigma_right, smc_cmd.sigma_left,
          smc_cmd.sigma_right};
      const control::BscCommand bc =
          bsc.Update(state, sigma_ref, delta_cmd, theta);

      row.delta = delta_cmd;
      row.torque = bc.torque;
      row.s = smc_cmd.s;
      last_torque = bc.torque;
      max_omega_error =
          std::max(max_omega_error, std::abs(state.omega_z - traj.omega_z_des));

      tune::CostSample cost;
      cost.z_e = {err.e_x, err.e_y, err.e_psi};
      cost.a_v = {rates.v_x_dot, rates.v_y_dot};
      for (int i = 0; i < plant::kNumWheels; ++i) {
        cost.phi_v[i] = Utilization(rates.tires[i], truth.mu);
      }
      result.cost.push_back(cost);
      result.trace.push_back(row);
      result.reaching.push_back({smc_cmd.s, 0.0});

      plant::PlantInput input;
      input.delta = delta_cmd;
      input.torque = bc.torque;
      for (int j = 0; j < kPlantSubsteps; ++j) {
        const double ts = t + j * dt;
        input.f_ey = schedule.Force(ts);
        input.m_ez = schedule.Moment(ts);
        plant.Advance(input, dt);
      }
    } catch (const std::exception&) {
      // Non-finite state or an exhausted fallback ladder ends the run.
      row.flags |= kFlagDiverged;
      diverged = true;
      result.trace.push_back(row);
      break;
    }
  }

  // Surface rate over each period: forward difference of the surface.
  for (std::size_t k = 0; k + 1 < result.reaching.size(); ++k) {
    result.reaching[k].s_dot =
        (result.reaching[k + 1].s - result.reaching[k].s) / period;
  }
  if (!result.reaching.empty()) result.reaching.pop_back();

  RunMetrics& m = result.metrics;
  m.scenario = Fingerprint(config);
  m.mode = ModeName(mode);
  m.seed = seed;
  SummarizeTrace(result.trace, m);
  m.diverged = diverged;
  m.max_omega_error = max_omega_error;
  m.j_g = tune::GlobalCost(result.cost, config.cost, diverged).value;
  m.lmi_infeasible = lmi.infeasible_count();
  m.lmi_fallbacks = lmi.fallback_count();
  m.smc_bypass = smc.bypass_count();
  m.allocation_failures = smc.allocation_failures();
  return result;
}

std::vector<RunResult> RunBatch(const Config& config, Mode mode,
                                const std::vector<std::uint64_t>& seeds,
                                const Calibration& calibration) {
  std::vector<RunResult> out(seeds.size());
  ParallelFor(seeds.size(), [&](std::size_t i) {
    out[i] = Run(config, mode, seeds[i], calibration);
  });
  return out;
}

tune::TuneResult TuneBoundaries(const Config& config,
                                const Calibration& calibration,
                                const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw ConfigError("tuning needs at least one seed");
  auto evaluate = [&](const std::vector<Vec>& alphas) {
    const std::size_t per = seeds.size();
    std::vector<tune::CostResult> runs(alphas.size() * per);
    ParallelFor(runs.size(), [&](std::size_t j) {
      Config c = config;
      const Vec& a = alphas[j / per];
      c.boundaries = {a[0], a[1], a[2]};
      const RunResult r = Run(c, Mode::kArc, seeds[j % per], calibration);
      runs[j] = {r.metrics.j_g, r.metrics.diverged};
    });
    std::vector<tune::CostResult> out(alphas.size());
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      for (std::size_t s = 0; s < per; ++s) {
        const tune::CostResult& r = runs[i * per + s];
        out[i].value += r.value;
        out[i].diverged = out[i].diverged || r.diverged;
      }
    }
    return out;
  };
  return tune::Tune(3, config.tune_iterations, config.tune, evaluate);
}

}  // namespace robust_track::harness
