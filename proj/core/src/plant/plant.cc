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

#include "robust_track/plant/plant.h"

#include <stdexcept>

#include "robust_track/numerics/ode.h"
#include "state_packing.h"

namespace robust_track::plant {

Plant::Plant(const VehicleParams& params, const PlantOptions& options,
             const VehicleState& initial)
    : params_(params), options_(options), state_(initial) {
  params_.Validate();
  if (options_.steering_lag < 0.0) {
    throw std::invalid_argument("Plant: negative steering lag");
  }
}

const VehicleState& Plant::Advance(const PlantInput& command, double dt) {
  if (!(dt > 0.0 && dt <= 0.01)) {
    throw std::invalid_argument("Plant::Advance: dt must lie in (0, 0.01]");
  }
  const PlantInput clamped = ClampInput(command);
  if (options_.steering_lag <= 0.0) {
    PlantInput applied = clamped;
    state_ = Step(state_, applied, dt, params_);
    steering_ = applied.delta;
    last_input_ = applied;
    return state_;
  }

  const double tau = options_.steering_lag;
  auto deriv = [&](const Vec& v) {
    PlantInput applied = clamped;
    applied.delta = v[10];
    Vec out(11);
    out.head(10) = internal::PackRates(
        ComputeRates(internal::Unpack(v.head(10)), applied, params_));
    out[10] = (clamped.delta - v[10]) / tau;
    return out;
  };
  Vec x(11);
  x.head(10) = internal::Pack(state_);
  x[10] = steering_;
  const Vec next = numerics::IntegrateRk4(deriv, x, dt);
  state_ = internal::Unpack(next.head(10));
  state_.psi = WrapAngle(state_.psi);
  steering_ = next[10];
  last_input_ = clamped;
  last_input_.delta = steering_;
  return state_;
}

StateRates Plant::Rates() const {
  return ComputeRates(state_, last_input_, params_);
}

}  // namespace robust_track::plant
