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
#ifndef ROBUST_TRACK_HARNESS_CALIBRATION_H_
#define ROBUST_TRACK_HARNESS_CALIBRATION_H_

#include <array>
#include <cstdint>
#include <vector>

#include "robust_track/adapt/envelope.h"
#include "robust_track/adapt/gpr.h"
#include "robust_track/adapt/rls.h"
#include "robust_track/harness/config.h"
#include "robust_track/plant/dynamics.h"

namespace robust_track::harness {

// One controller-period snapshot of an open-loop excitation run.
struct ExcitationSample {
  double t = 0.0;
  plant::VehicleState state;
  plant::PlantInput input;     // held over the period that ended here
  double delta_applied = 0.0;  // road-wheel angle after the actuator lag
  plant::StateRates truth;
};

// Chirp steering plus random per-wheel torque pulses on the mismatched
// plant, with a proportional speed hold around v_ref.
std::vector<ExcitationSample> ExcitationRun(const Config& config,
                                            bool disturbances,
                                            std::uint64_t seed);

struct RlsTraceRow {
  long step = 0;
  double c_sigma = 0.0;
  double c_alpha = 0.0;
  double lambda = 1.0;
  double epsilon = 0.0;
  double p_sigma = 0.0;
  double p_alpha = 0.0;
  bool updated = false;
};

// Runs RLS over the samples from the nominal stiffness.
adapt::RlsState Identify(const Config& config,
                         const std::vector<ExcitationSample>& samples,
                         std::vector<RlsTraceRow>* trace = nullptr);

// Envelope inputs of the chassis rows: beta, omega_z, delta, v_x.
numerics::Vec ChassisFeatures(const plant::VehicleState& state, double delta);
// Envelope inputs of one wheel: slip ratio, drive torque.
numerics::Vec WheelFeatures(double sigma, double torque);

// Identified stiffness and the mismatch envelopes fed to the robust layer.
struct Calibration {
  adapt::RlsState rls;
  std::vector<RlsTraceRow> rls_trace;
  adapt::StandardizedGpr gpr_beta_dot;
  adapt::StandardizedGpr gpr_omega_dot;
  adapt::StandardizedGpr gpr_wheel;
  adapt::EnvelopeTable beta_dot;   // rad/s^2
  adapt::EnvelopeTable omega_dot;  // rad/s^2
  adapt::EnvelopeTable wheel;      // N m
  // RMS prior residual norm of the identified model on the disturbed run.
  double residual_rms = 0.0;
};

// Identification run, then a disturbed run whose residuals against the
// identified model train the GPRs and the envelopes. Envelope alphas are
// left at 1; scaling happens at query time.
Calibration Calibrate(const Config& config);

}  // namespace robust_track::harness

#endif  // ROBUST_TRACK_HARNESS_CALIBRATION_H_
