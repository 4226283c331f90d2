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

#ifndef ROBUST_TRACK_TRACKING_LQR_TRACKER_H_
#define ROBUST_TRACK_TRACKING_LQR_TRACKER_H_

#include <optional>

#include "robust_track/numerics/types.h"
#include "robust_track/plant/vehicle.h"
#include "robust_track/tracking/types.h"

namespace robust_track::tracking {

using numerics::Mat;

// z_e = R(psi) (z - z_ref), heading error wrapped to (-pi, pi].
TrackingError ComputeError(const plant::VehicleState& state,
                           const ReferencePoint& ref);

// Linearized error model about the reference.
Mat ErrorModelA(const ReferencePoint& ref);
Mat ErrorModelB();

// K = R^-1 B' P with P from the continuous Riccati equation. Throws
// ControllabilityError when v_ref and omega_ref are both zero and
// SynthesisError if the closed loop is not Hurwitz.
Mat LqrGain(const ReferencePoint& ref, const Mat& q_k, const Mat& r_k);

// u = -K z_e + (v_ref, omega_ref), v_des clamped at zero.
DesiredMotion ComputeDesiredMotion(const TrackingError& error, const Mat& k,
                                   const ReferencePoint& ref);

struct LqrTrackerOptions {
  Mat q_k;  // empty means diag(8, 12, 6)
  Mat r_k;  // empty means diag(1, 2)
  double resynth_dv = 0.5;
  double resynth_domega = 0.02;
};

// Gain-scheduled LQR: re-solves only when the reference moved enough.
class LqrTracker {
 public:
  explicit LqrTracker(const LqrTrackerOptions& options = {});

  DesiredMotion Update(const plant::VehicleState& state,
                       const ReferencePoint& ref);

  const Mat& gain() const { return gain_; }
  const TrackingError& last_error() const { return last_error_; }
  int synthesis_count() const { return synthesis_count_; }

 private:
  Mat q_k_;
  Mat r_k_;
  double resynth_dv_;
  double resynth_domega_;
  Mat gain_;
  std::optional<ReferencePoint> synthesized_for_;
  TrackingError last_error_;
  int synthesis_count_ = 0;
};

}  // namespace robust_track::tracking

#endif  // ROBUST_TRACK_TRACKING_LQR_TRACKER_H_
