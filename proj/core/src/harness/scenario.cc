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
#include "robust_track/harness/scenario.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace robust_track::harness {

DlcPath::DlcPath(const ScenarioConfig& scenario)
    : offset_(scenario.lateral_offset),
      up_start_(scenario.lead_in),
      down_start_(scenario.lead_in + scenario.transition + scenario.hold),
      transition_(scenario.transition),
      length_(scenario.PathLength()) {
  scenario.Validate();
}

void DlcPath::Eval(double x, double out[3]) const {
  out[0] = out[1] = out[2] = 0.0;
  double sign = 1.0;
  double base = 0.0;
  double start = up_start_;
  if (x >= down_start_) {
    sign = -1.0;
    base = offset_;
    start = down_start_;
  } else if (x >= up_start_ + transition_) {
    out[0] = offset_;
    return;
  }
  const double u = std::clamp((x - start) / transition_, 0.0, 1.0);
  const double l = transition_;
  // 10u^3 - 15u^4 + 6u^5 and its derivatives.
  const double p = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
  const double dp = 30.0 * u * u * (1.0 - u) * (1.0 - u);
  const double ddp = 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u);
  out[0] = base + sign * offset_ * p;
  out[1] = sign * offset_ * dp / l;
  out[2] = sign * offset_ * ddp / (l * l);
}

double DlcPath::Y(double x) const {
  double v[3];
  Eval(x, v);
  return v[0];
}

double DlcPath::Slope(double x) const {
  double v[3];
  Eval(x, v);
  return v[1];
}

double DlcPath::Curvature(double x) const {
  double v[3];
  Eval(x, v);
  return v[2] / std::pow(1.0 + v[1] * v[1], 1.5);
}

std::vector<tracking::ReferencePoint> GenerateReference(
    const ScenarioConfig& scenario, double period) {
  if (!(period > 0.0)) {
    throw std::invalid_argument("GenerateReference: period must be > 0");
  }
  const DlcPath path(scenario);
  const double ds = scenario.v_ref * period;
  constexpr int kSubsteps = 10;
  const double h = ds / kSubsteps;
  auto dx_ds = [&](double x) {
    const double slope = path.Slope(x);
    return 1.0 / std::sqrt(1.0 + slope * slope);
  };
  std::vector<tracking::ReferencePoint> out;
  double x = 0.0;
  while (x <= path.Length()) {
    tracking::ReferencePoint p;
    p.x_ref = x;
    p.y_ref = path.Y(x);
    p.psi_ref = std::atan(path.Slope(x));
    p.v_ref = scenario.v_ref;
    p.curvature = path.Curvature(x);
    p.omega_ref = scenario.v_ref * p.curvature;
    out.push_back(p);
    for (int i = 0; i < kSubsteps; ++i) {
      const double k1 = dx_ds(x);
      const double k2 = dx_ds(x + 0.5 * h * k1);
      const double k3 = dx_ds(x + 0.5 * h * k2);
      const double k4 = dx_ds(x + h * k3);
      x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  return out;
}

namespace {

// Uniform draws mapped so min -> -extreme and max -> +extreme exactly.
std::vector<double> SpreadToExtremes(std::vector<double> u, double extreme) {
  const auto [lo_it, hi_it] = std::minmax_element(u.begin(), u.end());
  const double lo = *lo_it;
  const double span = *hi_it - lo;
  for (double& v : u) {
    v = span > 0.0 ? -extreme + 2.0 * extreme * ((v - lo) / span) : 0.0;
    if (std::abs(v) > extreme) {
      throw std::logic_error("disturbance value outside its extreme");
    }
  }
  return u;
}

}  // namespace

DisturbanceSchedule DisturbanceSchedule::Generate(double duration, double hold,
                                                  double force_extreme,
                                                  double moment_extreme,
                                                  std::uint64_t seed) {
  if (!(hold > 0.0) || !(duration >= 0.0)) {
    throw std::invalid_argument("DisturbanceSchedule: bad duration or hold");
  }
  const std::size_t n =
      std::max<std::size_t>(2, static_cast<std::size_t>(duration / hold) + 1);
  std::mt19937_64 rng(seed);
  auto draw = [&] {
    std::vector<double> u(n);
    for (double& v : u) v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return u;
  };
  DisturbanceSchedule out;
  out.hold_ = hold;
  out.forces_ = SpreadToExtremes(draw(), force_extreme);
  out.moments_ = SpreadToExtremes(draw(), moment_extreme);
  return out;
}

DisturbanceSchedule DisturbanceSchedule::FromScenario(
    const ScenarioConfig& scenario, double duration, std::uint64_t seed) {
  if (!scenario.disturbances) return {};
  return Generate(duration, scenario.disturbance_hold, scenario.force_extreme,
                  scenario.moment_extreme, seed);
}

std::size_t DisturbanceSchedule::Index(double t) const {
  const double k = std::floor(std::max(t, 0.0) / hold_);
  return std::min(static_cast<std::size_t>(k), forces_.size() - 1);
}

double DisturbanceSchedule::Force(double t) const {
  return forces_.empty() ? 0.0 : forces_[Index(t)];
}

double DisturbanceSchedule::Moment(double t) const {
  return moments_.empty() ? 0.0 : moments_[Index(t)];
}

}  // namespace robust_track::harness
