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

#include "robust_track/plant/tire.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "robust_track/common/errors.h"

namespace robust_track::plant {

double SlipRatio(double w, double v_wx, double r_w) {
  const double wheel = w * r_w;
  const double s = wheel - v_wx;
  if (wheel > v_wx && wheel != 0.0) return s / wheel;
  if (wheel < v_wx && v_wx != 0.0) return s / v_wx;
  return 0.0;
}

SideSlip SideSlipAngles(const VehicleState& state, double delta,
                        const VehicleParams& params) {
  if (std::abs(state.v_x) <= kLowSpeed) {
    throw LowSpeedError("side-slip angles undefined below the low-speed guard");
  }
  SideSlip out;
  out.alpha_f = (state.v_y + params.a * state.omega_z) / state.v_x - delta;
  out.alpha_r = (state.v_y - params.b * state.omega_z) / state.v_x;
  return out;
}

double DugoffLambda(double sigma, double alpha, double f_z, double c_sigma,
                    double c_alpha, double mu) {
  const double long_term = c_sigma * sigma;
  const double lat_term = c_alpha * std::tan(alpha);
  const double root = std::hypot(long_term, lat_term);
  if (root == 0.0) return std::numeric_limits<double>::infinity();
  return std::max(0.0, mu * f_z * (1.0 + sigma) / (2.0 * root));
}

TirePair DugoffForce(double sigma, double alpha, double f_z, double c_sigma,
                     double c_alpha, double mu) {
  const double long_term = c_sigma * sigma;
  const double lat_term = c_alpha * std::tan(alpha);
  const double root = std::hypot(long_term, lat_term);
  if (root == 0.0) return {};
  const double lambda = DugoffLambda(sigma, alpha, f_z, c_sigma, c_alpha, mu);
  if (lambda >= 1.0) {
    return {long_term / (1.0 + sigma), lat_term / (1.0 + sigma)};
  }
  // f / (1 + sigma) = mu F_z (2 - lambda) / (2 root), finite at sigma = -1.
  const double scale = mu * f_z * (2.0 - lambda) / (2.0 * root);
  return {long_term * scale, lat_term * scale};
}

TirePair DugoffForce(double sigma, double alpha, double f_z,
                     const VehicleParams& params) {
  return DugoffForce(sigma, alpha, f_z, params.c_sigma, params.c_alpha,
                     params.mu);
}

std::array<double, kNumWheels> WheelLongitudinalSpeeds(
    const VehicleState& state, double delta, const VehicleParams& params) {
  const double left = state.v_x - params.d * state.omega_z;
  const double right = state.v_x + params.d * state.omega_z;
  const double front_lateral = state.v_y + params.a * state.omega_z;
  const double c = std::cos(delta);
  const double s = std::sin(delta);
  return {left * c + front_lateral * s, right * c + front_lateral * s, left,
          right};
}

TireForces ComputeTireForces(const VehicleState& state, double delta,
                             const VehicleParams& params) {
  TireForces out;
  const double f_z = params.Fz();
  for (auto& tire : out) {
    tire.f_z = f_z;
    tire.lambda = std::numeric_limits<double>::infinity();
  }
  if (std::abs(state.v_x) <= kLowSpeed) return out;

  const SideSlip slip = SideSlipAngles(state, delta, params);
  const auto v_wx = WheelLongitudinalSpeeds(state, delta, params);
  for (int i = 0; i < kNumWheels; ++i) {
    TireForce& tire = out[i];
    tire.sigma = SlipRatio(state.w[i], v_wx[i], params.r_w);
    tire.alpha = IsFront(i) ? slip.alpha_f : slip.alpha_r;
    tire.lambda = DugoffLambda(tire.sigma, tire.alpha, f_z, params.c_sigma,
                               params.c_alpha, params.mu);
    const TirePair f = DugoffForce(tire.sigma, tire.alpha, f_z, params);
    tire.f_x = f.f_x;
    tire.f_y = f.f_y;
  }
  return out;
}

BodyForces ToBodyFrame(const TireForces& forces, double delta) {
  // Lateral tire force opposes the side-slip angle.
  BodyForces out;
  const double c = std::cos(delta);
  const double s = std::sin(delta);
  for (int i = 0; i < kNumWheels; ++i) {
    const double fx = forces[i].f_x;
    const double fy = -forces[i].f_y;
    if (IsFront(i)) {
      out.f_x[i] = fx * c - fy * s;
      out.f_y[i] = fx * s + fy * c;
    } else {
      out.f_x[i] = fx;
      out.f_y[i] = fy;
    }
  }
  return out;
}

}  // namespace robust_track::plant
