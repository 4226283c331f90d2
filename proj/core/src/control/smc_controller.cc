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

#include "robust_track/control/smc_controller.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "robust_track/common/errors.h"
#include "robust_track/plant/dynamics.h"
#include "robust_track/plant/tire.h"

namespace robust_track::control {
namespace {

constexpr double kNewtonTol = 1e-6;
constexpr int kNewtonMaxIterations = 30;

// Tire-frame forces with a given slip per side and the measured side slip.
plant::TireForces NominalTires(
    const std::array<double, plant::kNumWheels>& sigma, double delta,
    const plant::VehicleState& state, const Theta& theta,
    const plant::VehicleParams& params) {
  const plant::SideSlip slip = plant::SideSlipAngles(state, delta, params);
  plant::TireForces out{};
  for (int i = 0; i < plant::kNumWheels; ++i) {
    const double alpha = plant::IsFront(i) ? slip.alpha_f : slip.alpha_r;
    const plant::TirePair f = plant::DugoffForce(
        sigma[i], alpha, params.Fz(), theta.c_sigma, theta.c_alpha, params.mu);
    out[i].f_x = f.f_x;
    out[i].f_y = f.f_y;
    out[i].f_z = params.Fz();
    out[i].sigma = sigma[i];
    out[i].alpha = alpha;
  }
  return out;
}

std::array<double, plant::kNumWheels> SideSlips(double left, double right) {
  std::array<double, plant::kNumWheels> s{};
  for (int i = 0; i < plant::kNumWheels; ++i) {
    s[i] = plant::IsLeft(i) ? left : right;
  }
  return s;
}

// Slip interval over which the Dugoff factor stays >= 1 at side slip alpha,
// from 4 ((C_s s)^2 + L^2) = (mu F_z)^2 (1 + s)^2. Empty when the lateral
// demand alone saturates the tire.
std::pair<double, double> UnsaturatedSlip(double alpha, double f_z,
                                          const Theta& theta, double mu) {
  const double m2 = std::pow(mu * f_z, 2);
  const double l2 = std::pow(theta.c_alpha * std::tan(alpha), 2);
  const double qa = 4.0 * theta.c_sigma * theta.c_sigma - m2;
  const double qc = 4.0 * l2 - m2;
  if (!(qa > 0.0) || !(qc < 0.0)) return {0.0, 0.0};
  const double disc = std::sqrt(m2 * m2 - qa * qc);
  return {(m2 - disc) / qa, (m2 + disc) / qa};
}

}  // namespace

void SlidingGains::Validate() const {
  if (!(xi > 0.0) || !(eta > 0.0) || !(eps >= 0.0) || !(kappa0 >= 0.0) ||
      !(boundary_layer > 0.0)) {
    throw std::invalid_argument("SlidingGains: gain out of range");
  }
}

MismatchEnvelope MismatchEnvelope::Static(double value) {
  MismatchEnvelope env;
  env.bound = [value](const plant::VehicleState&, double) { return value; };
  env.source = EnvelopeSource::kStatic;
  return env;
}

double MismatchEnvelope::operator()(const plant::VehicleState& state,
                                    double delta) const {
  const double value = bound ? bound(state, delta) : 0.0;
  if (!std::isfinite(value) || value < 0.0) {
    throw std::domain_error("MismatchEnvelope: bound must be finite and >= 0");
  }
  return value;
}

double Sat(double x, double layer) { return std::clamp(x / layer, -1.0, 1.0); }

double Surface(double beta, double omega_z,
               const tracking::PhaseTrajectory& traj, double xi) {
  return (omega_z - traj.omega_z_des) + xi * (beta - traj.beta_des);
}

double SurfaceRate(double beta_dot, double omega_z_dot,
                   const tracking::PhaseTrajectory& traj, double xi) {
  return (omega_z_dot - traj.omega_z_dot_des) +
         xi * (beta_dot - traj.beta_dot_des);
}

double SlidingControl(double s, double h_hat, double k_hat, double delta_bound,
                      const SlidingGains& gains) {
  if (!(k_hat > kMinInputGain)) {
    throw BypassError("sliding-mode input gain below its lower bound");
  }
  const double sat = Sat(s, gains.boundary_layer);
  const double equivalent = (-gains.eps * sat - gains.eta * s - h_hat) / k_hat;
  return equivalent - (delta_bound + gains.kappa0) * sat;
}

SurfaceModel NominalSurfaceModel(const plant::VehicleState& state,
                                 const tracking::PhaseTrajectory& traj,
                                 double sigma_des, double delta,
                                 const Theta& theta,
                                 const plant::VehicleParams& params,
                                 double xi) {
  const plant::TireForces tires = NominalTires(SideSlips(sigma_des, sigma_des),
                                               delta, state, theta, params);
  const plant::ChassisRates rates = plant::ChassisDerivatives(
      state, plant::ToBodyFrame(tires, delta), plant::PlantInput{}, params);
  const double speed_sq = state.v_x * state.v_x + state.v_y * state.v_y;
  SurfaceModel out;
  out.beta_dot =
      (state.v_x * rates.v_y_dot - state.v_y * rates.v_x_dot) / speed_sq;
  out.omega_z_dot = rates.omega_z_dot;
  out.h = SurfaceRate(out.beta_dot, out.omega_z_dot, traj, xi);
  out.k = 1000.0 / params.i_z;
  return out;
}

SideForces SplitSlipForces(double sigma_left, double sigma_right, double delta,
                           const plant::VehicleState& state, const Theta& theta,
                           const plant::VehicleParams& params) {
  const plant::BodyForces body =
      plant::ToBodyFrame(NominalTires(SideSlips(sigma_left, sigma_right), delta,
                                      state, theta, params),
                         delta);
  const auto& fx = body.f_x;
  using plant::kFrontLeft;
  using plant::kFrontRight;
  using plant::kRearLeft;
  using plant::kRearRight;
  SideForces out;
  out.sum_x =
      (fx[kFrontLeft] + fx[kFrontRight]) + (fx[kRearLeft] + fx[kRearRight]);
  out.yaw = params.d * ((fx[kFrontRight] + fx[kRearRight]) -
                        (fx[kFrontLeft] + fx[kRearLeft]));
  return out;
}

SlipAllocation AllocateSlip(double u_s, double sigma_des, double delta,
                            const plant::VehicleState& state,
                            const Theta& theta,
                            const plant::VehicleParams& params) {
  const double target_x =
      SplitSlipForces(sigma_des, sigma_des, delta, state, theta, params).sum_x;
  auto residual = [&](double l, double r) {
    const SideForces f = SplitSlipForces(l, r, delta, state, theta, params);
    return Eigen::Vector2d((f.sum_x - target_x) / 1000.0, f.yaw / 1000.0 - u_s);
  };

  // Differential slip stays where the tires keep their lateral grip.
  const plant::SideSlip slip = plant::SideSlipAngles(state, delta, params);
  const auto front =
      UnsaturatedSlip(slip.alpha_f, params.Fz(), theta, params.mu);
  const auto rear =
      UnsaturatedSlip(slip.alpha_r, params.Fz(), theta, params.mu);
  const double lo = std::max(
      std::min(std::max(front.first, rear.first), sigma_des), -kMaxSlipRef);
  const double hi = std::min(
      std::max(std::min(front.second, rear.second), sigma_des), kMaxSlipRef);

  SlipAllocation out;
  out.sigma_left = sigma_des;
  out.sigma_right = sigma_des;
  Eigen::Vector2d z(sigma_des, sigma_des);
  Eigen::Vector2d res = residual(z[0], z[1]);
  for (int it = 0; it < kNewtonMaxIterations; ++it) {
    if (res.cwiseAbs().maxCoeff() <= kNewtonTol) {
      out.sigma_left = z[0];
      out.sigma_right = z[1];
      out.converged = true;
      out.iterations = it;
      out.residual = res.cwiseAbs().maxCoeff();
      return out;
    }
    Eigen::Matrix2d jac;
    for (int j = 0; j < 2; ++j) {
      const double h = 1e-7;
      Eigen::Vector2d zp = z;
      Eigen::Vector2d zm = z;
      zp[j] += h;
      zm[j] -= h;
      jac.col(j) = (residual(zp[0], zp[1]) - residual(zm[0], zm[1])) / (2 * h);
    }
    if (std::abs(jac.determinant()) < 1e-12) break;
    const Eigen::Vector2d step = -jac.partialPivLu().solve(res);
    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k < 30; ++k, t *= 0.5) {
      Eigen::Vector2d trial = z + t * step;
      trial = trial.cwiseMax(lo).cwiseMin(hi);
      const Eigen::Vector2d trial_res = residual(trial[0], trial[1]);
      if (trial_res.norm() < (1.0 - 1e-4 * t) * res.norm()) {
        z = trial;
        res = trial_res;
        accepted = true;
        break;
      }
    }
    out.iterations = it + 1;
    if (!accepted) break;
  }
  if (res.cwiseAbs().maxCoeff() <= kNewtonTol) {
    out.sigma_left = z[0];
    out.sigma_right = z[1];
    out.converged = true;
  }
  out.residual = res.cwiseAbs().maxCoeff();
  return out;
}

ReachingReport CheckReaching(const std::vector<ReachingSample>& trace,
                             double boundary_layer) {
  ReachingReport report;
  for (const ReachingSample& sample : trace) {
    if (std::abs(sample.s) <= boundary_layer) continue;
    ++report.checked;
    if (sample.s * sample.s_dot >= 0.0) ++report.violations;
  }
  return report;
}

SmcController::SmcController(const plant::VehicleParams& nominal,
                             SmcOptions options)
    : nominal_(nominal),
      options_(options),
      envelope_(MismatchEnvelope::Static(0.0)) {
  nominal_.Validate();
  options_.gains.Validate();
}

void SmcController::set_envelope(MismatchEnvelope envelope) {
  envelope_ = std::move(envelope);
}

SmcCommand SmcController::Update(const plant::VehicleState& state,
                                 const tracking::PhaseTrajectory& traj,
                                 double sigma_des, double delta,
                                 const Theta& theta_hat) {
  const SlidingGains& g = options_.gains;
  SmcCommand cmd;
  cmd.sigma_left = sigma_des;
  cmd.sigma_right = sigma_des;
  cmd.s = Surface(state.Beta(), state.omega_z, traj, g.xi);
  if (std::abs(state.v_x) <= plant::kLowSpeed) {
    cmd.bypass = true;
    ++bypass_count_;
    return cmd;
  }
  const SurfaceModel model = NominalSurfaceModel(state, traj, sigma_des, delta,
                                                 theta_hat, nominal_, g.xi);
  cmd.h_hat = model.h;
  cmd.k_hat = model.k;
  cmd.delta_bound = envelope_(state, delta);
  try {
    cmd.u_s = SlidingControl(cmd.s, model.h, model.k, cmd.delta_bound, g);
  } catch (const BypassError&) {
    cmd.bypass = true;
    ++bypass_count_;
    return cmd;
  }
  SlipAllocation alloc =
      AllocateSlip(cmd.u_s, sigma_des, delta, state, theta_hat, nominal_);
  double applied = cmd.u_s;
  if (!alloc.converged) {
    cmd.allocation_failed = true;
    ++allocation_failures_;
    // Largest feasible fraction of u_s; zero moment is always feasible.
    SlipAllocation best;
    best.sigma_left = best.sigma_right = sigma_des;
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < options_.moment_backoff; ++i) {
      const double mid = 0.5 * (lo + hi);
      const SlipAllocation trial = AllocateSlip(mid * cmd.u_s, sigma_des, delta,
                                                state, theta_hat, nominal_);
      if (trial.converged) {
        lo = mid;
        best = trial;
      } else {
        hi = mid;
      }
    }
    alloc = best;
    applied = lo * cmd.u_s;
  }
  cmd.sigma_left = alloc.sigma_left;
  cmd.sigma_right = alloc.sigma_right;
  cmd.u_applied = applied;
  return cmd;
}

}  // namespace robust_track::control
