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

#ifndef ROBUST_TRACK_CONTROL_LMI_CONTROLLER_H_
#define ROBUST_TRACK_CONTROL_LMI_CONTROLLER_H_

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "robust_track/numerics/types.h"
#include "robust_track/plant/vehicle.h"
#include "robust_track/tracking/types.h"

namespace robust_track::control {

using numerics::Mat;
using numerics::Vec;

// Tire stiffness pair.
struct Theta {
  double c_sigma = 63292.5;
  double c_alpha = 64934.5;
};

struct ThetaRange {
  double c_sigma_lo = 63292.5;
  double c_sigma_hi = 63292.5;
  double c_alpha_lo = 64934.5;
  double c_alpha_hi = 64934.5;

  static ThetaRange Around(const Theta& center, double fraction);
  bool Contains(const Theta& theta) const;
  // Throws std::invalid_argument when lo > hi or a bound is non-positive.
  void Validate() const;
};

constexpr double kMaxSigmaDes = 0.15;
constexpr double kMaxAlphaDes = 0.12;

// Measured quantities the (v_x, omega_z) model treats as exogenous.
struct LateralContext {
  double v_y = 0.0;
};

// Nominal longitudinal and yaw rates with equal slip on all wheels, the
// commanded front side-slip angle and the rear angle from the context:
// x = (v_x, omega_z), u = (sigma, alpha_f).
Vec LongitudinalYawRates(const Vec& x, const Vec& u, const Theta& theta,
                         const LateralContext& context,
                         const plant::VehicleParams& params);

struct Linearization {
  Mat a;
  Mat b;
  // False when some tire sits in the saturated Dugoff region at the
  // reference, where the linear model is unreliable.
  bool valid = true;
};

using RateFn = std::function<Vec(const Vec& x, const Vec& u)>;

// A = I + T df/dx, B = T df/du by central differences with relative step
// 1e-6.
Linearization LinearizeFunction(const RateFn& f, const Vec& x, const Vec& u,
                                double period);

Linearization Linearize(const Vec& x_ref, const Vec& u_ref, const Theta& theta,
                        double period, const LateralContext& context,
                        const plant::VehicleParams& params);

// Input whose nominal rates match x_dot_ref, clamped to the command box.
Vec ReferenceInput(const Vec& x_ref, const Vec& x_dot_ref, const Theta& theta,
                   const LateralContext& context,
                   const plant::VehicleParams& params);

struct PolytopicModel {
  Mat a_hat;
  Mat b_hat;
  std::array<Mat, 4> a_vertices;  // A(theta_p) - A_hat
  std::array<Mat, 4> b_vertices;
  Mat m;   // [I I I I]
  Mat na;  // stacked a_vertices
  Mat nb;  // stacked b_vertices
  bool degenerate = false;
  bool linearization_valid = true;

  // Every entry of the zero error matrix lies between the vertex minimum
  // and maximum of that entry.
  bool NominalInsideHull() const;
};

PolytopicModel BuildPolytope(const ThetaRange& range, const Theta& theta_hat,
                             const Vec& x_ref, const Vec& u_ref, double period,
                             const LateralContext& context,
                             const plant::VehicleParams& params);

struct LmiGain {
  Mat k;  // u = K x
  Mat p;
  Mat y;
  double eps = 0.0;
  double margin = 0.0;
  long synthesized_at = 0;
  // Produced by the robustless fallback instead of the LMI.
  bool conservative = false;
};

struct SynthesisResult {
  std::optional<LmiGain> gain;
  std::string reason;
};

// Solves the robust LMI, then rejects gains that fail the vertex spectral
// radius check.
SynthesisResult Synthesize(const PolytopicModel& model, const Mat& q,
                           const Mat& r, long step,
                           double strictness_tol = 1e-7);

// Discrete LQR on the vertex-averaged model, returned in u = K x form.
LmiGain VertexAveragedLqr(const PolytopicModel& model, const Mat& q,
                          const Mat& r, long step);

// Largest closed-loop spectral radius over the four vertex systems.
double WorstVertexRadius(const PolytopicModel& model, const Mat& k);

struct LmiCommand {
  double sigma_des = 0.0;
  double alpha_des = 0.0;
  bool sigma_saturated = false;
  bool alpha_saturated = false;
};

constexpr int kMaxStalePeriods = 5;

// u = K (x - x_ref) + u_ref with the command box applied. Throws
// StaleGainError when the gain has gone unverified for more than
// kMaxStalePeriods periods.
LmiCommand Control(const LmiGain& gain, const Vec& x, const Vec& x_ref,
                   const Vec& u_ref, int staleness = 0);

// delta = (v_y + omega_z l_f) / v_x - alpha_des; holds `previous` at low
// speed.
double SteeringCommand(const plant::VehicleState& state, double alpha_des,
                       const plant::VehicleParams& params, double previous);

struct LmiControllerOptions {
  Mat q;  // empty means diag(4, 10)
  Mat r;  // empty means diag(2, 2)
  double period = 0.01;
  int resynth_period = 50;
  double resynth_theta_change = 0.10;
  double strictness_tol = 1e-7;
};

struct LmiStepInfo {
  Vec x_ref;
  Vec u_ref;
  bool synthesized = false;
  bool infeasible = false;
  bool stale = false;
  bool conservative = false;
  bool linearization_valid = true;
};

// Scheduled synthesis plus the fallback ladder: previous gain for up to
// kMaxStalePeriods periods, then the vertex-averaged LQR.
class LmiController {
 public:
  LmiController(const plant::VehicleParams& nominal,
                const LmiControllerOptions& options = {});

  LmiCommand Update(const plant::VehicleState& state,
                    const tracking::PhaseTrajectory& traj,
                    const Theta& theta_hat, const ThetaRange& range);

  const std::optional<LmiGain>& gain() const { return gain_; }
  const LmiStepInfo& last_step() const { return last_; }
  int infeasible_count() const { return infeasible_count_; }
  int fallback_count() const { return fallback_count_; }
  int synthesis_count() const { return synthesis_count_; }

 private:
  bool NeedsSynthesis(const Theta& theta_hat) const;

  plant::VehicleParams nominal_;
  Mat q_;
  Mat r_;
  LmiControllerOptions options_;
  std::optional<LmiGain> gain_;
  Theta theta_at_synthesis_;
  long step_ = 0;
  long last_attempt_ = -1;
  int staleness_ = 0;
  int infeasible_count_ = 0;
  int fallback_count_ = 0;
  int synthesis_count_ = 0;
  LmiStepInfo last_;
};

}  // namespace robust_track::control

#endif  // ROBUST_TRACK_CONTROL_LMI_CONTROLLER_H_
