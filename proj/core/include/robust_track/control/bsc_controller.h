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

#ifndef ROBUST_TRACK_CONTROL_BSC_CONTROLLER_H_
#define ROBUST_TRACK_CONTROL_BSC_CONTROLLER_H_

#include <array>
#include <functional>
#include <vector>

#include "robust_track/control/lmi_controller.h"
#include "robust_track/plant/vehicle.h"

namespace robust_track::control {

// The wheel error system is written in torque units,
//   J e_dot = g_e + T + T_f,
// so k_omega is in N m per rad/s and the envelope terms are in N m.
struct WheelGains {
  double k_omega = 8.0;
  double gamma0 = 0.2;
  double boundary_layer = 0.5;  // rad/s

  void Validate() const;
};

// Upper bound rho(e) on the wheel mismatch G(e), per wheel.
struct WheelEnvelope {
  std::function<double(int wheel, double e_omega)> rho;

  static WheelEnvelope Static(double value);
  double operator()(int wheel, double e_omega) const;
};

// Wheel speed that realizes sigma_ref at ground speed v_wx. Returns
// `previous` when |v_wx| <= kLowSpeed.
double WheelRefFromSlip(double sigma_ref, double v_wx, double r_w,
                        double previous);

// u = -k e - g_hat - (rho + gamma0) sat(e / layer), clamped to
// +-kMaxTorque.
double TorqueLaw(double e_omega, double g_hat, double rho,
                 const WheelGains& gains);

// Nominal drift -r F_x - B w - J w_ref_dot in N m.
double NominalWheelDrift(double w, double f_x_hat, double omega_ref_dot,
                         const plant::VehicleParams& nominal);

struct WheelSample {
  double e = 0.0;
  double e_dot = 0.0;
};

struct LyapunovReport {
  long checked = 0;
  long violations = 0;
  double ViolationFraction() const {
    return checked == 0 ? 0.0 : static_cast<double>(violations) / checked;
  }
};

// Counts samples outside the layer with e * e_dot > 0.
LyapunovReport CheckWheelLyapunov(const std::vector<WheelSample>& trace,
                                  double boundary_layer);

struct BscCommand {
  std::array<double, plant::kNumWheels> torque{};
  std::array<double, plant::kNumWheels> omega_ref{};
  std::array<double, plant::kNumWheels> e_omega{};
  std::array<double, plant::kNumWheels> g_hat{};
};

// Four independent wheel loops sharing the nominal wheel parameters.
class BscController {
 public:
  BscController(const plant::VehicleParams& nominal, WheelGains gains = {},
                double period = 0.01);

  void set_envelope(WheelEnvelope envelope);
  const WheelGains& gains() const { return gains_; }

  BscCommand Update(const plant::VehicleState& state,
                    const std::array<double, plant::kNumWheels>& sigma_ref,
                    double delta, const Theta& theta_hat);

  void Reset();

 private:
  plant::VehicleParams nominal_;
  WheelGains gains_;
  double period_;
  WheelEnvelope envelope_;
  std::array<double, plant::kNumWheels> last_ref_{};
  bool has_ref_ = false;
};

}  // namespace robust_track::control

#endif  // ROBUST_TRACK_CONTROL_BSC_CONTROLLER_H_
