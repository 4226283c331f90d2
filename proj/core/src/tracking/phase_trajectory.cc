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

#include "robust_track/tracking/phase_trajectory.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace robust_track::tracking {

PhaseTrajectory UpdatePhaseTrajectory(const PhaseTrajectory& prev, double v_des,
                                      double omega_des, double beta_dot_des,
                                      double period) {
  if (!(period > 0.0)) {
    throw std::invalid_argument("UpdatePhaseTrajectory: period must be > 0");
  }
  PhaseTrajectory next;
  const double integrated = prev.beta_des + beta_dot_des * period;
  next.beta_des = std::clamp(integrated, -kMaxBetaDes, kMaxBetaDes);
  // A clamped step only realizes part of the requested rate.
  next.beta_dot_des = next.beta_des == integrated
                          ? beta_dot_des
                          : (next.beta_des - prev.beta_des) / period;
  next.v_x_des = v_des * std::cos(next.beta_des);
  next.omega_z_des = omega_des - next.beta_dot_des;
  if (prev.initialized) {
    next.v_x_dot_des = (next.v_x_des - prev.v_x_des) / period;
    next.omega_z_dot_des = (next.omega_z_des - prev.omega_z_des) / period;
  }
  next.initialized = true;
  return next;
}

}  // namespace robust_track::tracking
