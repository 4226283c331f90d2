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

#include "robust_track/tracking/lqr_tracker.h"

#include <algorithm>
#include <cmath>

#include "robust_track/common/errors.h"
#include "robust_track/numerics/riccati.h"

namespace robust_track::tracking {

TrackingError ComputeError(const plant::VehicleState& state,
                           const ReferencePoint& ref) {
  const double dx = state.x - ref.x_ref;
  const double dy = state.y - ref.y_ref;
  const double c = std::cos(state.psi);
  const double s = std::sin(state.psi);
  TrackingError e;
  e.e_x = c * dx + s * dy;
  e.e_y = -s * dx + c * dy;
  e.e_psi = plant::WrapAngle(state.psi - ref.psi_ref);
  return e;
}

Mat ErrorModelA(const ReferencePoint& ref) {
  Mat a = Mat::Zero(3, 3);
  a(0, 1) = ref.omega_ref;
  a(1, 0) = -ref.omega_ref;
  a(1, 2) = ref.v_ref;
  return a;
}

Mat ErrorModelB() {
  Mat b = Mat::Zero(3, 2);
  b(0, 0) = 1.0;
  b(2, 1) = 1.0;
  return b;
}

Mat LqrGain(const ReferencePoint& ref, const Mat& q_k, const Mat& r_k) {
  if (ref.v_ref == 0.0 && ref.omega_ref == 0.0) {
    throw ControllabilityError(
        "tracking error model is uncontrollable with zero reference motion");
  }
  const Mat a = ErrorModelA(ref);
  const Mat b = ErrorModelB();
  const Mat p = numerics::SolveCare(a, b, q_k, r_k);
  Mat k = r_k.ldlt().solve(b.transpose() * p);
  if (numerics::SpectralAbscissa(a - b * k) >= 0.0) {
    throw SynthesisError("LQR closed loop is not Hurwitz");
  }
  return k;
}

DesiredMotion ComputeDesiredMotion(const TrackingError& error, const Mat& k,
                                   const ReferencePoint& ref) {
  numerics::Vec z(3);
  z << error.e_x, error.e_y, error.e_psi;
  const numerics::Vec u_e = -k * z;
  DesiredMotion out;
  out.v_des = std::max(0.0, u_e[0] + ref.v_ref);
  out.omega_des = u_e[1] + ref.omega_ref;
  return out;
}

LqrTracker::LqrTracker(const LqrTrackerOptions& options)
    : q_k_(options.q_k),
      r_k_(options.r_k),
      resynth_dv_(options.resynth_dv),
      resynth_domega_(options.resynth_domega) {
  if (q_k_.size() == 0) q_k_ = Eigen::Vector3d(8.0, 12.0, 6.0).asDiagonal();
  if (r_k_.size() == 0) r_k_ = Eigen::Vector2d(1.0, 2.0).asDiagonal();
}

DesiredMotion LqrTracker::Update(const plant::VehicleState& state,
                                 const ReferencePoint& ref) {
  const bool stale =
      !synthesized_for_ ||
      std::abs(ref.v_ref - synthesized_for_->v_ref) > resynth_dv_ ||
      std::abs(ref.omega_ref - synthesized_for_->omega_ref) > resynth_domega_;
  if (stale) {
    gain_ = LqrGain(ref, q_k_, r_k_);
    synthesized_for_ = ref;
    ++synthesis_count_;
  }
  last_error_ = ComputeError(state, ref);
  return ComputeDesiredMotion(last_error_, gain_, ref);
}

}  // namespace robust_track::tracking
