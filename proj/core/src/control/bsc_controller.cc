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

#include "robust_track/control/bsc_controller.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "robust_track/plant/tire.h"

namespace robust_track::control {

void WheelGains::Validate() const {
  if (!(k_omega > 0.0) || !(gamma0 >= 0.0) || !(boundary_layer > 0.0)) {
    throw std::invalid_argument("WheelGains: gain out of range");
  }
}

WheelEnvelope WheelEnvelope::Static(double value) {
  WheelEnvelope env;
  env.rho = [value](int, double) { return value; };
  return env;
}

double WheelEnvelope::operator()(int wheel, double e_omega) const {
  const double value = rho ? rho(wheel, e_omega) : 0.0;
  if (!std::isfinite(value) || value < 0.0) {
    throw std::domain_error("WheelEnvelope: bound must be finite and >= 0");
  }
  return value;
}

double WheelRefFromSlip(double sigma_ref, double v_wx, double r_w,
                        double previous) {
  if (std::abs(v_wx) <= plant::kLowSpeed) return previous;
  if (sigma_ref >= 0.0) return v_wx / (r_w * (1.0 - sigma_ref));
  return v_wx * (1.0 + sigma_ref) / r_w;
}

double TorqueLaw(double e_omega, double g_hat, double rho,
                 const WheelGains& gains) {
  const double sat = std::clamp(e_omega / gains.boundary_layer, -1.0, 1.0);
  const double u =
      -gains.k_omega * e_omega - g_hat - (rho + gains.gamma0) * sat;
  return std::clamp(u, -plant::kMaxTorque, plant::kMaxTorque);
}

double NominalWheelDrift(double w, double f_x_hat, double omega_ref_dot,
                         const plant::VehicleParams& nominal) {
  return -nominal.r_w * f_x_hat - nominal.b_e * w - nominal.j_w * omega_ref_dot;
}

LyapunovReport CheckWheelLyapunov(const std::vector<WheelSample>& trace,
                                  double boundary_layer) {
  LyapunovReport report;
  for (const WheelSample& sample : trace) {
    if (std::abs(sample.e) <= boundary_layer) continue;
    ++report.checked;
    if (sample.e * sample.e_dot > 0.0) ++report.violations;
  }
  return report;
}

BscController::BscController(const plant::VehicleParams& nominal,
                             WheelGains gains, double period)
    : nominal_(nominal),
      gains_(gains),
      period_(period),
      envelope_(WheelEnvelope::Static(0.0)) {
  nominal_.Validate();
  gains_.Validate();
  if (!(period_ > 0.0)) {
    throw std::invalid_argument("BscController: period must be > 0");
  }
}

void BscController::set_envelope(WheelEnvelope envelope) {
  envelope_ = std::move(envelope);
}

void BscController::Reset() { has_ref_ = false; }

BscCommand BscController::Update(
    const plant::VehicleState& state,
    const std::array<double, plant::kNumWheels>& sigma_ref, double delta,
    const Theta& theta_hat) {
  const auto v_wx = plant::WheelLongitudinalSpeeds(state, delta, nominal_);
  const bool moving = std::abs(state.v_x) > plant::kLowSpeed;
  plant::SideSlip slip;
  if (moving) slip = plant::SideSlipAngles(state, delta, nominal_);

  BscCommand cmd;
  for (int i = 0; i < plant::kNumWheels; ++i) {
    const double previous = has_ref_ ? last_ref_[i] : state.w[i];
    const double ref =
        WheelRefFromSlip(sigma_ref[i], v_wx[i], nominal_.r_w, previous);
    const double ref_dot = has_ref_ ? (ref - last_ref_[i]) / period_ : 0.0;
    double f_x_hat = 0.0;
    if (moving) {
      const double sigma = plant::SlipRatio(state.w[i], v_wx[i], nominal_.r_w);
      const double alpha = plant::IsFront(i) ? slip.alpha_f : slip.alpha_r;
      f_x_hat =
          plant::DugoffForce(sigma, alpha, nominal_.Fz(), theta_hat.c_sigma,
                             theta_hat.c_alpha, nominal_.mu)
              .f_x;
    }
    const double e = state.w[i] - ref;
    const double g_hat =
        NominalWheelDrift(state.w[i], f_x_hat, ref_dot, nominal_);
    cmd.omega_ref[i] = ref;
    cmd.e_omega[i] = e;
    cmd.g_hat[i] = g_hat;
    cmd.torque[i] = TorqueLaw(e, g_hat, envelope_(i, e), gains_);
    last_ref_[i] = ref;
  }
  has_ref_ = true;
  return cmd;
}

}  // namespace robust_track::control
