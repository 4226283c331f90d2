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

#ifndef ROBUST_TRACK_PLANT_VEHICLE_H_
#define ROBUST_TRACK_PLANT_VEHICLE_H_

#include <array>
#include <cmath>

namespace robust_track::plant {

enum Wheel : int {
  kFrontLeft = 0,
  kFrontRight = 1,
  kRearLeft = 2,
  kRearRight = 3
};
constexpr int kNumWheels = 4;

inline bool IsFront(int wheel) { return wheel < 2; }
inline bool IsLeft(int wheel) { return wheel % 2 == 0; }

// Speed below which slip quantities are frozen at zero.
constexpr double kLowSpeed = 0.5;
constexpr double kMaxSteering = 0.6;
constexpr double kMaxTorque = 1500.0;

struct VehicleParams {
  double m = 1653.0;         // kg
  double i_z = 3234.0;       // kg m^2
  double a = 1.402;          // CoM to front axle, m
  double b = 1.646;          // CoM to rear axle, m
  double d = 0.8;            // half track, m
  double r_w = 0.3;          // effective tire radius, m
  double j_w = 1.2;          // wheel inertia, kg m^2
  double b_e = 0.05;         // wheel damping, N m s
  double c_sigma = 63292.5;  // N per unit slip
  double c_alpha = 64934.5;  // N/rad
  double mu = 0.85;
  double h = 0.57;  // CoM height, m
  double g = 9.81;
  double rolling_coeff = 0.012;

  // Static, equal vertical load per wheel.
  double Fz() const { return m * g / 4.0; }

  // Throws std::invalid_argument when a field is out of range.
  void Validate() const;
};

struct VehicleState {
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;  // course angle, wrapped to (-pi, pi]
  double v_x = 0.0;  // body frame
  double v_y = 0.0;
  double omega_z = 0.0;
  std::array<double, kNumWheels> w{};  // wheel speeds, rad/s

  double Beta() const { return std::atan2(v_y, v_x); }
  double Speed() const { return std::hypot(v_x, v_y); }

  // Straight running at `speed` with rolling wheels.
  static VehicleState Cruising(double speed, const VehicleParams& params);
};

struct PlantInput {
  double delta = 0.0;                       // steering, rad
  std::array<double, kNumWheels> torque{};  // N m
  double f_ex = 0.0;                        // N
  double f_ey = 0.0;                        // N
  double m_ez = 0.0;                        // N m
  double t_f = 0.0;                         // extra resistance moment, N m
};

// Steering and torque actuator limits.
PlantInput ClampInput(const PlantInput& input);

// Tire-frame force and slip quantities of one wheel.
struct TireForce {
  double f_x = 0.0;
  double f_y = 0.0;
  double f_z = 0.0;
  double sigma = 0.0;
  double alpha = 0.0;
  double lambda = 0.0;  // +inf when the slip is zero
};
using TireForces = std::array<TireForce, kNumWheels>;

// Tire forces rotated into the body frame.
struct BodyForces {
  std::array<double, kNumWheels> f_x{};
  std::array<double, kNumWheels> f_y{};
};

double WrapAngle(double angle);

}  // namespace robust_track::plant

#endif  // ROBUST_TRACK_PLANT_VEHICLE_H_
