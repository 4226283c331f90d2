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
#ifndef ROBUST_TRACK_HARNESS_SCENARIO_H_
#define ROBUST_TRACK_HARNESS_SCENARIO_H_

#include <cstdint>
#include <vector>

#include "robust_track/harness/config.h"
#include "robust_track/tracking/types.h"

namespace robust_track::harness {

// Lateral offset y(x) of the lane-change path: straight, quintic
// transition up, straight, quintic transition back, straight. The
// transitions have zero slope and curvature at both ends.
class DlcPath {
 public:
  explicit DlcPath(const ScenarioConfig& scenario);

  double Length() const { return length_; }  // along x
  double Y(double x) const;
  double Slope(double x) const;      // dy/dx
  double Curvature(double x) const;  // signed

 private:
  // Offset profile and its first two x-derivatives.
  void Eval(double x, double out[3]) const;

  double offset_;
  double up_start_;
  double down_start_;
  double transition_;
  double length_;
};

// Reference points at t = k * period for a vehicle moving along the path at
// v_ref, covering the whole path. The x(s) map is integrated with RK4.
std::vector<tracking::ReferencePoint> GenerateReference(
    const ScenarioConfig& scenario, double period);

// Piecewise-constant lateral force and yaw moment. Values are drawn
// uniformly and mapped affinely so the extremes are exactly +-extreme.
class DisturbanceSchedule {
 public:
  DisturbanceSchedule() = default;  // no disturbance
  static DisturbanceSchedule Generate(double duration, double hold,
                                      double force_extreme,
                                      double moment_extreme,
                                      std::uint64_t seed);
  static DisturbanceSchedule FromScenario(const ScenarioConfig& scenario,
                                          double duration, std::uint64_t seed);

  double Force(double t) const;
  double Moment(double t) const;
  const std::vector<double>& forces() const { return forces_; }
  const std::vector<double>& moments() const { return moments_; }
  double hold() const { return hold_; }

 private:
  std::size_t Index(double t) const;

  double hold_ = 1.0;
  std::vector<double> forces_;
  std::vector<double> moments_;
};

}  // namespace robust_track::harness

#endif  // ROBUST_TRACK_HARNESS_SCENARIO_H_
