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
#ifndef ROBUST_TRACK_HARNESS_CONFIG_H_
#define ROBUST_TRACK_HARNESS_CONFIG_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "robust_track/adapt/gpr.h"
#include "robust_track/adapt/rls.h"
#include "robust_track/control/bsc_controller.h"
#include "robust_track/control/lmi_controller.h"
#include "robust_track/control/smc_controller.h"
#include "robust_track/plant/vehicle.h"
#include "robust_track/tracking/lqr_tracker.h"
#include "robust_track/tune/bayes.h"

namespace robust_track::harness {

// Double-lane-change geometry, disturbance injection and the plant-side
// parameter offsets.
struct ScenarioConfig {
  double v_ref = 16.67;         // m/s
  double lateral_offset = 3.5;  // m
  double lead_in = 30.0;        // straight before the first transition, m
  double transition = 40.0;     // length of each lane change, m
  double hold = 20.0;           // straight in the offset lane, m
  double exit = 40.0;           // straight after the return, m
  bool disturbances = true;
  double force_extreme = 1000.0;   // N
  double moment_extreme = 1000.0;  // N m
  double disturbance_hold = 0.25;  // s per piecewise-constant value
  // Plant stiffness = nominal * (1 + offset).
  double c_sigma_offset = 0.15;
  double c_alpha_offset = -0.15;
  double steering_lag = 0.03;      // s
  double max_lateral_error = 5.0;  // divergence threshold, m
  double max_beta = 0.5;           // divergence threshold, rad

  double PathLength() const { return lead_in + 2.0 * transition + hold + exit; }
  void Validate() const;
};

struct CalibrationConfig {
  double duration = 20.0;  // excitation run, s (2000 samples at 10 ms)
  int bins = 3;            // envelope grid bins per input axis
  std::uint64_t seed = 7;
};

// Multipliers on the identified parameter range and the two envelopes.
struct BoundaryScaling {
  double alpha_theta = 1.0;
  double alpha_i = 1.0;
  double alpha_e = 1.0;
};

// Static boundaries of the fixed-boundary baseline.
struct BaselineConfig {
  double stiffness_fraction = 0.40;
  double envelope_scale = 2.0;
};

struct Config {
  plant::VehicleParams vehicle;  // controller-side nominal parameters
  ScenarioConfig scenario;
  double controller_period = 0.01;
  tracking::LqrTrackerOptions lqr;
  double w_beta = 1.0;
  control::LmiControllerOptions lmi;
  control::SlidingGains smc;
  int smc_moment_backoff = 8;
  control::WheelGains bsc;
  adapt::RlsOptions rls;
  double rls_n_sigma = 3.0;
  // Online sigma_eps becomes 3x the calibration residual RMS when set.
  bool rls_sigma_eps_auto = true;
  adapt::GprFitOptions gpr;
  CalibrationConfig calibration;
  tune::TuneOptions tune;
  int tune_iterations = 12;
  tune::CostWeights cost;
  BoundaryScaling boundaries;
  BaselineConfig baseline;

  // Defaults with every matrix spelled out.
  Config();
  // Throws ConfigError naming the offending field.
  void Validate() const;
  // Plant parameters: nominal with the scenario stiffness offsets.
  plant::VehicleParams TruthParams() const;
};

// Parses `key = value` lines; `#` starts a comment. Matrices are given by
// their diagonal as a comma-separated list. Unknown keys, malformed values
// and repeated keys raise ConfigError with `origin` and the line number.
Config ParseConfig(std::string_view text, const std::string& origin = "config");
Config LoadConfig(const std::string& path);

// Every key at full precision; ParseConfig(FormatConfig(c)) == c.
std::string FormatConfig(const Config& config);
std::vector<std::string> ConfigKeys();

// FNV-1a over FormatConfig, as 16 hex digits.
std::string Fingerprint(const Config& config);

}  // namespace robust_track::harness

#endif  // ROBUST_TRACK_HARNESS_CONFIG_H_
