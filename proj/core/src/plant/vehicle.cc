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

#include "robust_track/plant/vehicle.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace robust_track::plant {

void VehicleParams::Validate() const {
  const double positive[] = {m,   i_z,     a,       b,  d, r_w, j_w,
                             b_e, c_sigma, c_alpha, mu, h, g};
  for (double value : positive) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw std::invalid_argument("VehicleParams: fields must be positive");
    }
  }
  if (mu > 1.2) throw std::invalid_argument("VehicleParams: mu > 1.2");
  if (rolling_coeff < 0.0) {
    throw std::invalid_argument("VehicleParams: negative rolling coefficient");
  }
}

VehicleState VehicleState::Cruising(double speed, const VehicleParams& params) {
  VehicleState s;
  s.v_x = speed;
  s.w.fill(speed / params.r_w);
  return s;
}

PlantInput ClampInput(const PlantInput& input) {
  PlantInput out = input;
  out.delta = std::clamp(input.delta, -kMaxSteering, kMaxSteering);
  for (double& t : out.torque) t = std::clamp(t, -kMaxTorque, kMaxTorque);
  return out;
}

double WrapAngle(double angle) {
  constexpr double kPi = std::numbers::pi;
  double wrapped = std::remainder(angle, 2.0 * kPi);
  if (wrapped <= -kPi) wrapped += 2.0 * kPi;
  return wrapped;
}

}  // namespace robust_track::plant
