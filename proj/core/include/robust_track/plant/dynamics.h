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

#ifndef ROBUST_TRACK_PLANT_DYNAMICS_H_
#define ROBUST_TRACK_PLANT_DYNAMICS_H_

#include "robust_track/plant/tire.h"
#include "robust_track/plant/vehicle.h"

namespace robust_track::plant {

struct ChassisRates {
  double v_x_dot = 0.0;
  double v_y_dot = 0.0;
  double omega_z_dot = 0.0;
};

// Force and moment balance about the CoM with body-frame tire forces.
ChassisRates ChassisDerivatives(const VehicleState& state,
                                const BodyForces& forces,
                                const PlantInput& input,
                                const VehicleParams& params);

// Wheel spin acceleration (T + T_f - r_w F_x - B_e w) / J_w.
double WheelDerivative(double w, double torque, double f_x, double t_f,
                       const VehicleParams& params);

// Ground-truth rolling resistance moment of one wheel.
double RollingResistance(double w, const VehicleParams& params);

struct StateRates {
  double x_dot = 0.0;
  double y_dot = 0.0;
  double psi_dot = 0.0;
  double v_x_dot = 0.0;
  double v_y_dot = 0.0;
  double omega_z_dot = 0.0;
  double beta_dot = 0.0;
  std::array<double, kNumWheels> w_dot{};
  TireForces tires{};
};

// Full state derivative with the steering angle given by `input.delta`.
StateRates ComputeRates(const VehicleState& state, const PlantInput& input,
                        const VehicleParams& params);

// One RK4 step of the 7-DoF model; dt in (0, 0.01].
VehicleState Step(const VehicleState& state, const PlantInput& input, double dt,
                  const VehicleParams& params);

// Translational plus rotational kinetic energy.
double KineticEnergy(const VehicleState& state, const VehicleParams& params);

}  // namespace robust_track::plant

#endif  // ROBUST_TRACK_PLANT_DYNAMICS_H_
