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

#include "robust_track/adapt/rls.h"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "robust_track/plant/tire.h"

namespace robust_track::adapt {

Regression BuildRegressor(const plant::VehicleState& state,
                          const Measurement& measured, double delta,
                          const control::Theta& theta_check,
                          const plant::VehicleParams& params) {
  Regression reg;
  reg.y = Vec::Zero(3);
  reg.phi = Mat::Zero(3, 2);
  if (std::abs(state.v_x) <= plant::kLowSpeed) {
    reg.reject_reason = "low speed";
    return reg;
  }
  const plant::SideSlip slip = plant::SideSlipAngles(state, delta, params);
  const auto v_wx = plant::WheelLongitudinalSpeeds(state, delta, params);
  const double cd = std::cos(delta);
  const double sd = std::sin(delta);

  // Stiffness-multiplying factors of the body-frame force resultants.
  Eigen::RowVector2d fx_sum = Eigen::RowVector2d::Zero();
  Eigen::RowVector2d fy_sum = Eigen::RowVector2d::Zero();
  Eigen::RowVector2d yaw = Eigen::RowVector2d::Zero();
  for (int i = 0; i < plant::kNumWheels; ++i) {
    const double sigma = plant::SlipRatio(state.w[i], v_wx[i], params.r_w);
    const double alpha = plant::IsFront(i) ? slip.alpha_f : slip.alpha_r;
    const double lambda =
        plant::DugoffLambda(sigma, alpha, params.Fz(), theta_check.c_sigma,
                            theta_check.c_alpha, params.mu);
    if (lambda < 1.0) {
      reg.reject_reason = "saturated tire";
      return reg;
    }
    const double a_i = sigma / (1.0 + sigma);
    const double b_i = std::tan(alpha) / (1.0 + sigma);
    const double c = plant::IsFront(i) ? cd : 1.0;
    const double s = plant::IsFront(i) ? sd : 0.0;
    // Body lateral force is -F_y before the steering rotation.
    const Eigen::RowVector2d fx(a_i * c, b_i * s);
    const Eigen::RowVector2d fy(a_i * s, -b_i * c);
    fx_sum += fx;
    fy_sum += fy;
    const double side = plant::IsLeft(i) ? -1.0 : 1.0;
    const double arm = plant::IsFront(i) ? params.a : -params.b;
    yaw += params.d * side * fx + arm * fy;
  }
  const double speed_sq = state.v_x * state.v_x + state.v_y * state.v_y;
  reg.phi.row(0) = fx_sum / params.m;
  reg.phi.row(1) =
      (state.v_x * fy_sum - state.v_y * fx_sum) / (params.m * speed_sq);
  reg.phi.row(2) = yaw / params.i_z;
  reg.y << measured.v_x_dot - state.v_y * state.omega_z,
      measured.beta_dot + state.omega_z, measured.omega_z_dot;
  reg.accepted = reg.y.allFinite() && reg.phi.allFinite();
  if (!reg.accepted) reg.reject_reason = "non-finite sample";
  return reg;
}

void RlsOptions::Validate() const {
  if (!(lambda_min > 0.0 && lambda_min <= 1.0) || !(h > 0.0 && h < 1.0) ||
      !(sigma_eps > 0.0) || !(fixed_lambda > 0.0 && fixed_lambda <= 1.0) ||
      !(p0 > 0.0) || !(theta_lo < theta_hi)) {
    throw std::invalid_argument("RlsOptions: value out of range");
  }
}

double AdaptLambda(double epsilon, const RlsOptions& options) {
  const double ratio = epsilon / options.sigma_eps;
  const double q = std::floor(std::min(ratio * ratio, 1e6));
  return options.lambda_min +
         (1.0 - options.lambda_min) * std::pow(options.h, q);
}

RlsState RlsState::Initial(const Vec& theta0, double p0) {
  RlsState s;
  s.theta = theta0;
  s.p = p0 * Mat::Identity(theta0.size(), theta0.size());
  return s;
}

RlsStepInfo RlsStep(RlsState& state, const Regression& reg,
                    const RlsOptions& options) {
  RlsStepInfo info;
  if (!reg.accepted) {
    ++state.skipped;
    return info;
  }
  const Vec eps = reg.y - reg.phi * state.theta;
  info.epsilon = eps.norm();
  info.lambda = options.adaptive ? AdaptLambda(info.epsilon, options)
                                 : options.fixed_lambda;
  const auto rows = reg.phi.rows();
  const Mat innovation = info.lambda * Mat::Identity(rows, rows) +
                         reg.phi * state.p * reg.phi.transpose();
  Eigen::LDLT<Mat> ldlt(innovation);
  if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > 1e-14)) {
    ++state.skipped;
    return info;
  }
  const Mat gain = ldlt.solve(reg.phi * state.p).transpose();
  state.theta += gain * eps;
  const auto n = state.theta.size();
  Mat p = (Mat::Identity(n, n) - gain * reg.phi) * state.p / info.lambda;
  p = (0.5 * (p + p.transpose())).eval();
  const double cap = options.p0 * static_cast<double>(n);
  if (p.trace() > cap) p *= cap / p.trace();
  state.p = p;

  for (Eigen::Index i = 0; i < n; ++i) {
    const double clamped =
        std::clamp(state.theta[i], options.theta_lo, options.theta_hi);
    if (clamped != state.theta[i]) {
      state.theta[i] = clamped;
      info.clamped = true;
    }
  }
  if (info.clamped) {
    state.p = options.p0 * Mat::Identity(n, n);
    ++state.resets;
  }
  ++state.steps;
  const double sample_var = eps.squaredNorm() / static_cast<double>(rows);
  state.residual_var += (sample_var - state.residual_var) /
                        static_cast<double>(std::min<long>(state.steps, 200));
  info.updated = true;
  return info;
}

void ExcitationMonitor::Add(const Mat& phi) {
  recent_.push_back(phi);
  while (recent_.size() > window_) recent_.pop_front();
}

double ExcitationMonitor::SmallestSingularValue() const {
  if (recent_.empty()) return 0.0;
  const auto rows = recent_.front().rows();
  const auto cols = recent_.front().cols();
  Mat stack(rows * static_cast<Eigen::Index>(recent_.size()), cols);
  Eigen::Index r = 0;
  for (const Mat& phi : recent_) {
    stack.middleRows(r, rows) = phi;
    r += rows;
  }
  if (stack.rows() < cols) return 0.0;
  Eigen::JacobiSVD<Mat> svd(stack);
  return svd.singularValues().minCoeff();
}

control::ThetaRange RangeFromCovariance(const RlsState& state, double n_sigma,
                                        const RlsOptions& options) {
  if (state.theta.size() != 2) {
    throw std::invalid_argument("RangeFromCovariance: expected two parameters");
  }
  control::ThetaRange range;
  const double scale = std::max(state.residual_var, 0.0);
  const double sd0 = std::sqrt(scale * std::max(state.p(0, 0), 0.0));
  const double sd1 = std::sqrt(scale * std::max(state.p(1, 1), 0.0));
  auto in_box = [&](double v) {
    return std::clamp(v, options.theta_lo, options.theta_hi);
  };
  range.c_sigma_lo = in_box(state.theta[0] - n_sigma * sd0);
  range.c_sigma_hi = in_box(state.theta[0] + n_sigma * sd0);
  range.c_alpha_lo = in_box(state.theta[1] - n_sigma * sd1);
  range.c_alpha_hi = in_box(state.theta[1] + n_sigma * sd1);
  return range;
}

}  // namespace robust_track::adapt
