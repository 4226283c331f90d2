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

#ifndef ROBUST_TRACK_TRACKING_BETA_ALLOCATION_H_
#define ROBUST_TRACK_TRACKING_BETA_ALLOCATION_H_

#include <functional>
#include <optional>

#include "robust_track/numerics/types.h"
#include "robust_track/plant/vehicle.h"

namespace robust_track::tracking {

struct BetaAllocation {
  double beta_dot = 0.0;
  double cost = 0.0;
  // Some friction utilization exceeds 1 at the returned point.
  bool saturated = false;
};

// Utilizations phi_i as a function of the candidate beta rate.
using UtilizationFn = std::function<numerics::Vec(double)>;

// Minimizes sum(phi) + w_beta r^2 over r in [-0.5, 0.5]. Points with
// phi_i > 1 are penalized so the least-violating rate wins when no
// feasible rate exists.
BetaAllocation AllocateBeta(const UtilizationFn& utilization, double w_beta);

struct BetaContext {
  double omega_des = 0.0;  // desired yaw rate from the tracking layer
  double period = 0.01;    // prediction horizon T
  // Side slip the candidate rate is applied to; the measured one when empty.
  std::optional<double> beta_base;
};

// Utilizations re-predicted one period ahead under candidate rate r:
// linear rear lateral force from the shifted beta and omega_z, front
// lateral force closing the lateral balance m v_x omega_des, longitudinal
// forces held at their current values.
UtilizationFn PredictedUtilization(const plant::VehicleState& state,
                                   const plant::TireForces& forces,
                                   const plant::VehicleParams& params,
                                   const BetaContext& context);

BetaAllocation AllocateBeta(const plant::VehicleState& state,
                            const plant::TireForces& forces,
                            const plant::VehicleParams& params, double w_beta,
                            const BetaContext& context);

}  // namespace robust_track::tracking

#endif  // ROBUST_TRACK_TRACKING_BETA_ALLOCATION_H_
