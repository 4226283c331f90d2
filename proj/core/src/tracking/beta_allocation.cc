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

#include "robust_track/tracking/beta_allocation.h"

#include <algorithm>
#include <cmath>

#include "robust_track/numerics/optimize.h"
#include "robust_track/tracking/types.h"

namespace robust_track::tracking {
namespace {

constexpr double kViolationPenalty = 1e6;

}  // namespace

BetaAllocation AllocateBeta(const UtilizationFn& utilization, double w_beta) {
  auto cost = [&](double r) {
    const numerics::Vec phi = utilization(r);
    double j = phi.sum() + w_beta * r * r;
    for (Eigen::Index i = 0; i < phi.size(); ++i) {
      j += kViolationPenalty * std::max(0.0, phi[i] - 1.0);
    }
    return j;
  };
  const numerics::ScalarMinimum best =
      numerics::GoldenSection(cost, -kMaxBetaRate, kMaxBetaRate, 1e-9);
  BetaAllocation out;
  out.beta_dot = std::clamp(best.x, -kMaxBetaRate, kMaxBetaRate);
  const numerics::Vec phi = utilization(out.beta_dot);
  out.cost = phi.sum() + w_beta * out.beta_dot * out.beta_dot;
  out.saturated = (phi.array() > 1.0).any();
  return out;
}

UtilizationFn PredictedUtilization(const plant::VehicleState& state,
                                   const plant::TireForces& forces,
                                   const plant::VehicleParams& params,
                                   const BetaContext& context) {
  const double v_x = std::max(std::abs(state.v_x), plant::kLowSpeed);
  const double beta = context.beta_base.value_or(state.Beta());
  std::array<double, plant::kNumWheels> f_x{};
  std::array<double, plant::kNumWheels> capacity{};
  for (int i = 0; i < plant::kNumWheels; ++i) {
    f_x[i] = forces[i].f_x;
    capacity[i] = params.mu * forces[i].f_z;
  }
  return [=](double r) {
    const double beta_c = beta + r * context.period;
    const double omega_c = context.omega_des - r;
    // Small-angle rear side slip and the lateral balance of the chassis.
    const double alpha_r = beta_c - params.b * omega_c / v_x;
    const double rear_y = -params.c_alpha * alpha_r;
    const double front_y =
        0.5 * (params.m * v_x * context.omega_des - 2.0 * rear_y);
    numerics::Vec phi(plant::kNumWheels);
    for (int i = 0; i < plant::kNumWheels; ++i) {
      const double f_y = plant::IsFront(i) ? front_y : rear_y;
      phi[i] = (f_x[i] * f_x[i] + f_y * f_y) / (capacity[i] * capacity[i]);
    }
    return phi;
  };
}

BetaAllocation AllocateBeta(const plant::VehicleState& state,
                            const plant::TireForces& forces,
                            const plant::VehicleParams& params, double w_beta,
                            const BetaContext& context) {
  return AllocateBeta(PredictedUtilization(state, forces, params, context),
                      w_beta);
}

}  // namespace robust_track::tracking
