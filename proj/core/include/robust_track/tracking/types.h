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

#ifndef ROBUST_TRACK_TRACKING_TYPES_H_
#define ROBUST_TRACK_TRACKING_TYPES_H_

namespace robust_track::tracking {

struct ReferencePoint {
  double x_ref = 0.0;
  double y_ref = 0.0;
  double psi_ref = 0.0;
  double v_ref = 0.0;
  double omega_ref = 0.0;  // v_ref * curvature
  double curvature = 0.0;
};

// Pose error expressed in the vehicle frame.
struct TrackingError {
  double e_x = 0.0;
  double e_y = 0.0;
  double e_psi = 0.0;
};

struct DesiredMotion {
  double v_des = 0.0;
  double omega_des = 0.0;
};

// Desired (v_x, beta, omega_z) triple handed to the robust layer.
struct PhaseTrajectory {
  double v_x_des = 0.0;
  double beta_des = 0.0;
  double omega_z_des = 0.0;
  double v_x_dot_des = 0.0;
  double omega_z_dot_des = 0.0;
  double beta_dot_des = 0.0;
  bool initialized = false;
};

constexpr double kMaxBetaDes = 0.12;
constexpr double kMaxBetaRate = 0.5;

}  // namespace robust_track::tracking

#endif  // ROBUST_TRACK_TRACKING_TYPES_H_
