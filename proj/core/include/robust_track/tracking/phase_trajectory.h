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

#ifndef ROBUST_TRACK_TRACKING_PHASE_TRAJECTORY_H_
#define ROBUST_TRACK_TRACKING_PHASE_TRAJECTORY_H_

#include "robust_track/tracking/types.h"

namespace robust_track::tracking {

// Integrates beta_des, splits the yaw rate and differentiates by backward
// difference. The first call of an uninitialized trajectory reports zero
// derivatives.
PhaseTrajectory UpdatePhaseTrajectory(const PhaseTrajectory& prev, double v_des,
                                      double omega_des, double beta_dot_des,
                                      double period);

}  // namespace robust_track::tracking

#endif  // ROBUST_TRACK_TRACKING_PHASE_TRAJECTORY_H_
