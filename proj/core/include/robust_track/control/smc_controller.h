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

#ifndef ROBUST_TRACK_CONTROL_SMC_CONTROLLER_H_
#define ROBUST_TRACK_CONTROL_SMC_CONTROLLER_H_

#include <functional>
#include <vector>

#include "robust_track/control/lmi_controller.h"
#include "robust_track/plant/vehicle.h"
#include "robust_track/tracking/types.h"

namespace robust_track::control {

struct SlidingGains {
  double xi = 3.0;
  double eps = 0.05;
  double eta = 2.0;
  double kappa0 = 0.02;
  double boundary_layer = 0.01;

  // Throws std::invalid_argument on xi <= 0, eta <= 0, eps < 0, kappa0 < 0
  // or boundary_layer <= 0.
  void Validate() const;
};

enum class EnvelopeSource { kStatic, kGpr };

// Upper bound on the input-referred mismatch, in kN m.
struct MismatchEnvelope {
  std::function<double(const plant::VehicleState&, double delta)> bound;
  EnvelopeSource source = EnvelopeSource::kStatic;

  static MismatchEnvelope Static(double value);
  // Throws std::domain_error when the bound is negative or not finite.
  double operator()(const plant::VehicleState& state, double delta) const;
};

// x / layer clipped to [-1, 1].
double Sat(double x, double layer);

double Surface(double beta, double omega_z,
               const tracking::PhaseTrajectory& traj, double xi);
double SurfaceRate(double beta_dot, double omega_z_dot,
                   const tracking::PhaseTrajectory& traj, double xi);

constexpr double kMinInputGain = 1e-3;

// u_s = (-eps sat(s) - eta s - h_hat) / k_hat - (delta_bound + kappa0) sat(s).
// Throws BypassError when k_hat <= kMinInputGain.
double SlidingControl(double s, double h_hat, double k_hat, double delta_bound,
                      const SlidingGains& gains);

// Drift and input gain of the surface dynamics: s_dot = h + k u_s with u_s
// the differential longitudinal yaw moment in kN m.
struct SurfaceModel {
  double h = 0.0;
  double k = 0.0;
  double beta_dot = 0.0;
  double omega_z_dot = 0.0;
};

// Nominal model at the measured state with sigma_des on every wheel.
SurfaceModel NominalSurfaceModel(const plant::VehicleState& state,
                                 const tracking::PhaseTrajectory& traj,
                                 double sigma_des, double delta,
                                 const Theta& theta,
                                 const plant::VehicleParams& params, double xi);

struct SideForces {
  double sum_x = 0.0;  // body-frame longitudinal force, N
  double yaw = 0.0;    // d (right - left), N m
};

// Body-frame longitudinal resultant with sigma_left on the left wheels and
// sigma_right on the right wheels.
SideForces SplitSlipForces(double sigma_left, double sigma_right, double delta,
                           const plant::VehicleState& state, const Theta& theta,
                           const plant::VehicleParams& params);

struct SlipAllocation {
  double sigma_left = 0.0;
  double sigma_right = 0.0;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;  // max of the two residuals, kN and kN m
};

constexpr double kMaxSlipRef = 0.3;

// Damped Newton on (sigma_left, sigma_right): keep the longitudinal
// resultant of the symmetric command while the side difference produces
// u_s. Iterates are boxed to the slips that leave every tire unsaturated
// (widened to contain sigma_des). On failure the symmetric pair is returned.
SlipAllocation AllocateSlip(double u_s, double sigma_des, double delta,
                            const plant::VehicleState& state,
                            const Theta& theta,
                            const plant::VehicleParams& params);

struct ReachingSample {
  double s = 0.0;
  double s_dot = 0.0;
};

struct ReachingReport {
  long checked = 0;
  long violations = 0;
  double ViolationFraction() const {
    return checked == 0 ? 0.0 : static_cast<double>(violations) / checked;
  }
};

// Counts samples outside the layer with s * s_dot >= 0.
ReachingReport CheckReaching(const std::vector<ReachingSample>& trace,
                             double boundary_layer);

struct SmcOptions {
  SlidingGains gains;
  // Bisection steps on the feasible fraction of u_s after a failed
  // allocation; 0 falls straight back to symmetric slip. The applied moment
  // is reported in SmcCommand::u_applied.
  int moment_backoff = 8;
};

struct SmcCommand {
  double u_s = 0.0;        // kN m, from the control law
  double u_applied = 0.0;  // kN m, met by the allocation
  double s = 0.0;
  double h_hat = 0.0;
  double k_hat = 0.0;
  double delta_bound = 0.0;
  double sigma_left = 0.0;
  double sigma_right = 0.0;
  bool bypass = false;
  bool allocation_failed = false;
};

class SmcController {
 public:
  explicit SmcController(const plant::VehicleParams& nominal,
                         SmcOptions options = {});

  void set_envelope(MismatchEnvelope envelope);
  const SlidingGains& gains() const { return options_.gains; }

  SmcCommand Update(const plant::VehicleState& state,
                    const tracking::PhaseTrajectory& traj, double sigma_des,
                    double delta, const Theta& theta_hat);

  long bypass_count() const { return bypass_count_; }
  long allocation_failures() const { return allocation_failures_; }

 private:
  plant::VehicleParams nominal_;
  SmcOptions options_;
  MismatchEnvelope envelope_;
  long bypass_count_ = 0;
  long allocation_failures_ = 0;
};

}  // namespace robust_track::control

#endif  // ROBUST_TRACK_CONTROL_SMC_CONTROLLER_H_
