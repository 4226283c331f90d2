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

// Flat vector layout of the vehicle state for the integrator.

#ifndef ROBUST_TRACK_PLANT_STATE_PACKING_H_
#define ROBUST_TRACK_PLANT_STATE_PACKING_H_

#include "robust_track/numerics/types.h"
#include "robust_track/plant/dynamics.h"

namespace robust_track::plant {

using numerics::Vec;

namespace internal {

constexpr int kStateSize = 10;

inline Vec Pack(const VehicleState& s) {
  Vec v(kStateSize);
  v << s.x, s.y, s.psi, s.v_x, s.v_y, s.omega_z, s.w[0], s.w[1], s.w[2], s.w[3];
  return v;
}

inline VehicleState Unpack(const Vec& v) {
  VehicleState s;
  s.x = v[0];
  s.y = v[1];
  s.psi = v[2];
  s.v_x = v[3];
  s.v_y = v[4];
  s.omega_z = v[5];
  for (int i = 0; i < kNumWheels; ++i) s.w[i] = v[6 + i];
  return s;
}

inline Vec PackRates(const StateRates& r) {
  Vec v(kStateSize);
  v << r.x_dot, r.y_dot, r.psi_dot, r.v_x_dot, r.v_y_dot, r.omega_z_dot,
      r.w_dot[0], r.w_dot[1], r.w_dot[2], r.w_dot[3];
  return v;
}

}  // namespace internal

}  // namespace robust_track::plant

#endif  // ROBUST_TRACK_PLANT_STATE_PACKING_H_
