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

#ifndef ROBUST_TRACK_PLANT_PLANT_H_
#define ROBUST_TRACK_PLANT_PLANT_H_

#include "robust_track/plant/dynamics.h"
#include "robust_track/plant/vehicle.h"

namespace robust_track::plant {

struct PlantOptions {
  // First-order steering actuator time constant; 0 disables the lag.
  double steering_lag = 0.0;
};

// Stateful simulator owning the vehicle state and the steering actuator.
class Plant {
 public:
  Plant(const VehicleParams& params, const PlantOptions& options,
        const VehicleState& initial);

  // Advances by dt with clamped actuator commands.
  const VehicleState& Advance(const PlantInput& command, double dt);

  const VehicleState& state() const { return state_; }
  const VehicleParams& params() const { return params_; }
  // Steering angle actually applied at the road wheels.
  double steering() const { return steering_; }
  // Rates evaluated at the current state with the last applied input.
  StateRates Rates() const;
  const PlantInput& last_input() const { return last_input_; }

 private:
  VehicleParams params_;
  PlantOptions options_;
  VehicleState state_;
  double steering_ = 0.0;
  PlantInput last_input_;
};

}  // namespace robust_track::plant

#endif  // ROBUST_TRACK_PLANT_PLANT_H_
