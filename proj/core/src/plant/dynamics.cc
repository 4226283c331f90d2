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

#include "robust_track/plant/dynamics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "robust_track/numerics/ode.h"
#include "state_packing.h"

namespace robust_track::plant {

ChassisRates ChassisDerivatives(const VehicleState& state,
                                const BodyForces& forces,
                                const PlantInput& input,
                                const VehicleParams& params) {
  const auto& fx = forces.f_x;
  const auto& fy = forces.f_y;
  // Pairwise sums keep left/right mirroring exact in floating point.
  const double sum_x =
      (fx[kFrontLeft] + fx[kFrontRight]) + (fx[kRearLeft] + fx[kRearRight]);
  const double front_y = fy[kFrontLeft] + fy[kFrontRight];
  const double rear_y = fy[kRearLeft] + fy[kRearRight];
  const double right_x = fx[kFrontRight] + fx[kRearRight];
  const double left_x = fx[kFrontLeft] + fx[kRearLeft];

  ChassisRates out;
  out.v_x_dot = (sum_x + input.f_ex) / params.m + state.v_y * state.omega_z;
  out.v_y_dot =
      (front_y + rear_y + input.f_ey) / params.m - state.v_x * state.omega_z;
  out.omega_z_dot = (params.d * (right_x - left_x) + params.a * front_y -
                     params.b * rear_y + input.m_ez) /
                    params.i_z;
  return out;
}

double WheelDerivative(double w, double torque, double f_x, double t_f,
                       const VehicleParams& params) {
  return (torque + t_f - params.r_w * f_x - params.b_e * w) / params.j_w;
}

double RollingResistance(double w, const VehicleParams& params) {
  // Sign of w smoothed over +-0.5 rad/s.
  const double direction = std::clamp(w / 0.5, -1.0, 1.0);
  return -params.rolling_coeff * direction * params.Fz() * params.r_w;
}

StateRates ComputeRates(const VehicleState& state, const PlantInput& input,
                        const VehicleParams& params) {
  StateRates out;
  out.tires = ComputeTireForces(state, input.delta, params);
  const BodyForces body = ToBodyFrame(out.tires, input.delta);
  const ChassisRates chassis = ChassisDerivatives(state, body, input, params);
  out.v_x_dot = chassis.v_x_dot;
  out.v_y_dot = chassis.v_y_dot;
  out.omega_z_dot = chassis.omega_z_dot;
  for (int i = 0; i < kNumWheels; ++i) {
    const double t_f = RollingResistance(state.w[i], params) + input.t_f;
    out.w_dot[i] = WheelDerivative(state.w[i], input.torque[i],
                                   out.tires[i].f_x, t_f, params);
  }
  const double speed_sq = state.v_x * state.v_x + state.v_y * state.v_y;
  if (speed_sq > kLowSpeed * kLowSpeed) {
    out.beta_dot =
        (state.v_x * out.v_y_dot - state.v_y * out.v_x_dot) / speed_sq;
  }
  const double speed = std::sqrt(speed_sq);
  out.x_dot = speed * std::cos(state.psi);
  out.y_dot = speed * std::sin(state.psi);
  out.psi_dot = state.omega_z + out.beta_dot;
  return out;
}

VehicleState Step(const VehicleState& state, const PlantInput& input, double dt,
                  const VehicleParams& params) {
  if (!(dt > 0.0 && dt <= 0.01)) {
    throw std::invalid_argument("Step: dt must lie in (0, 0.01]");
  }
  const PlantInput clamped = ClampInput(input);
  auto deriv = [&](const Vec& v) {
    return internal::PackRates(
        ComputeRates(internal::Unpack(v), clamped, params));
  };
  VehicleState next = internal::Unpack(
      numerics::IntegrateRk4(deriv, internal::Pack(state), dt));
  next.psi = WrapAngle(next.psi);
  return next;
}

double KineticEnergy(const VehicleState& state, const VehicleParams& params) {
  double wheels = 0.0;
  for (double w : state.w) wheels += w * w;
  return 0.5 * params.m * (state.v_x * state.v_x + state.v_y * state.v_y) +
         0.5 * params.i_z * state.omega_z * state.omega_z +
         0.5 * params.j_w * wheels;
}

}  // namespace robust_track::plant
