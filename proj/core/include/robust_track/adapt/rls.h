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

#ifndef ROBUST_TRACK_ADAPT_RLS_H_
#define ROBUST_TRACK_ADAPT_RLS_H_

#include <deque>
#include <string>

#include "robust_track/control/lmi_controller.h"
#include "robust_track/numerics/types.h"
#include "robust_track/plant/vehicle.h"

namespace robust_track::adapt {

using numerics::Mat;
using numerics::Vec;

// Measured accelerations entering the regression.
struct Measurement {
  double v_x_dot = 0.0;
  double beta_dot = 0.0;
  double omega_z_dot = 0.0;
};

// y = phi theta with
//   y = [v_x_dot - v_y omega_z, beta_dot + omega_z, omega_z_dot],
// valid in the unsaturated tire region.
struct Regression {
  Vec y;
  Mat phi;
  bool accepted = false;
  std::string reject_reason;
};

// `theta_check` is only used to decide whether a tire is saturated.
Regression BuildRegressor(const plant::VehicleState& state,
                          const Measurement& measured, double delta,
                          const control::Theta& theta_check,
                          const plant::VehicleParams& params);

struct RlsOptions {
  double lambda_min = 0.95;
  double h = 0.9;
  double sigma_eps = 0.05;
  bool adaptive = true;
  double fixed_lambda = 1.0;  // used when !adaptive
  double p0 = 1e14;
  double theta_lo = 1e3;
  double theta_hi = 3e5;

  void Validate() const;
};

// lambda = lambda_min + (1 - lambda_min) h^q, q = floor((eps / sigma_eps)^2).
double AdaptLambda(double epsilon, const RlsOptions& options);

struct RlsState {
  Vec theta;
  Mat p;
  double residual_var = 0.0;  // running mean of |eps|^2 / rows
  long steps = 0;
  long skipped = 0;
  long resets = 0;

  static RlsState Initial(const Vec& theta0, double p0);
};

struct RlsStepInfo {
  bool updated = false;
  bool clamped = false;
  double epsilon = 0.0;  // prior residual norm
  double lambda = 1.0;
};

// One forgetting-factor update. Rejected samples and a singular innovation
// matrix skip the step; a parameter leaving the box is clamped and P is
// reset to p0 I. P is re-symmetrized every step and capped at trace p0 I.
RlsStepInfo RlsStep(RlsState& state, const Regression& reg,
                    const RlsOptions& options);

// Smallest singular value of the stacked regressors in a sliding window.
class ExcitationMonitor {
 public:
  explicit ExcitationMonitor(std::size_t window = 50) : window_(window) {}
  void Add(const Mat& phi);
  double SmallestSingularValue() const;
  std::size_t size() const { return recent_.size(); }

 private:
  std::size_t window_;
  std::deque<Mat> recent_;
};

// theta_hat +- n_sigma standard deviations, using the residual variance to
// scale P, kept inside the parameter box.
control::ThetaRange RangeFromCovariance(const RlsState& state, double n_sigma,
                                        const RlsOptions& options);

}  // namespace robust_track::adapt

#endif  // ROBUST_TRACK_ADAPT_RLS_H_
