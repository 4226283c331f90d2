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

#ifndef ROBUST_TRACK_PLANT_TIRE_H_
#define ROBUST_TRACK_PLANT_TIRE_H_

#include "robust_track/plant/vehicle.h"

namespace robust_track::plant {

// Signed slip ratio; positive when driving, negative when braking.
double SlipRatio(double w, double v_wx, double r_w);

struct SideSlip {
  double alpha_f = 0.0;
  double alpha_r = 0.0;
};

// Axle side-slip angles. Throws LowSpeedError when |v_x| <= kLowSpeed.
SideSlip SideSlipAngles(const VehicleState& state, double delta,
                        const VehicleParams& params);

struct TirePair {
  double f_x = 0.0;
  double f_y = 0.0;
};

// Dugoff reserve coefficient; +inf for zero slip.
double DugoffLambda(double sigma, double alpha, double f_z, double c_sigma,
                    double c_alpha, double mu);

// Dugoff force with the weighting f = lambda (2 - lambda) below lambda = 1.
TirePair DugoffForce(double sigma, double alpha, double f_z,
                     const VehicleParams& params);
TirePair DugoffForce(double sigma, double alpha, double f_z, double c_sigma,
                     double c_alpha, double mu);

// Ground speed of each wheel centre along its own rolling direction.
std::array<double, kNumWheels> WheelLongitudinalSpeeds(
    const VehicleState& state, double delta, const VehicleParams& params);

// Slip, side-slip and force of every wheel at the current state.
TireForces ComputeTireForces(const VehicleState& state, double delta,
                             const VehicleParams& params);

BodyForces ToBodyFrame(const TireForces& forces, double delta);

}  // namespace robust_track::plant

#endif  // ROBUST_TRACK_PLANT_TIRE_H_
