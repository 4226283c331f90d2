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
#ifndef ROBUST_TRACK_HARNESS_RUNNER_H_
#define ROBUST_TRACK_HARNESS_RUNNER_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "robust_track/control/smc_controller.h"
#include "robust_track/harness/calibration.h"
#include "robust_track/harness/config.h"
#include "robust_track/harness/metrics.h"
#include "robust_track/harness/trace_io.h"
#include "robust_track/tune/bayes.h"

namespace robust_track::harness {

enum class Mode {
  kArc,       // online RLS, calibrated envelopes, tuned scalings
  kLmiFixed,  // nominal stiffness, wide static range and envelopes
};

std::string ModeName(Mode mode);
// Accepts "arc" and "lmi"; throws ConfigError otherwise.
Mode ParseMode(std::string_view name);

struct RunResult {
  Trace trace;
  std::vector<tune::CostSample> cost;
  // Surface value at each control update and its forward difference over
  // the following period.
  std::vector<control::ReachingSample> reaching;
  RunMetrics metrics;
};

// Widest stiffness fraction, up to baseline.stiffness_fraction, whose
// polytope around the nominal stiffness at cruise (v_ref, zero yaw rate)
// admits an LMI gain. Bisection to 1e-4; 0 when even the point model fails.
double BaselineStiffnessFraction(const Config& config);

// One closed-loop double lane change: tracking LQR, side-slip allocation,
// phase trajectory, LMI state feedback, sliding-mode slip reallocation and
// the wheel loops, ten plant steps per controller period with held inputs.
// The run stops at the first period that exceeds a divergence threshold;
// that row carries kFlagDiverged.
RunResult Run(const Config& config, Mode mode, std::uint64_t seed,
              const Calibration& calibration);

// Independent runs fanned out over ThreadBudget() threads, in seed order.
std::vector<RunResult> RunBatch(const Config& config, Mode mode,
                                const std::vector<std::uint64_t>& seeds,
                                const Calibration& calibration);

// Boundary scalings (alpha_theta, alpha_i, alpha_e) minimizing the summed
// cost of ARC runs over `seeds`.
tune::TuneResult TuneBoundaries(const Config& config,
                                const Calibration& calibration,
                                const std::vector<std::uint64_t>& seeds);

}  // namespace robust_track::harness

#endif  // ROBUST_TRACK_HARNESS_RUNNER_H_
