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

#ifndef ROBUST_TRACK_TUNE_BAYES_H_
#define ROBUST_TRACK_TUNE_BAYES_H_

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "robust_track/control/lmi_controller.h"
#include "robust_track/numerics/types.h"

namespace robust_track::tune {

using numerics::Mat;
using numerics::Vec;

struct CostWeights {
  Mat w_e = Eigen::Vector3d(1.0, 100.0, 10.0).asDiagonal();
  Mat w_a = Eigen::Vector2d(0.5, 0.5).asDiagonal();
  Mat w_phi = 5.0 * Mat::Identity(4, 4);
};

// One controller period of the global objective.
struct CostSample {
  std::array<double, 3> z_e{};    // e_x, e_y, e_psi
  std::array<double, 2> a_v{};    // v_x_dot, v_y_dot
  std::array<double, 4> phi_v{};  // friction utilization per tire
};

constexpr double kDivergencePenalty = 1e9;

struct CostResult {
  double value = 0.0;
  bool diverged = false;
};

// Sum of weighted squared norms; a diverged or non-finite trace gives
// kDivergencePenalty with the flag set.
CostResult GlobalCost(const std::vector<CostSample>& trace,
                      const CostWeights& weights, bool diverged = false);

// Expands a parameter box: hi * alpha, lo / alpha. A box that would invert
// (alpha < 1 on a narrow box) collapses to its midpoint.
control::ThetaRange ScaleRange(const control::ThetaRange& range, double alpha);

struct TuneOptions {
  double kappa = 2.0;
  double lo = 0.1;
  double hi = 5.0;
  int candidates = 4096;
  int seed_points = 6;
  std::uint64_t seed = 0;
  // Minimize mu + kappa sigma as literally written instead of the lower
  // confidence bound.
  bool literal_ucb = false;

  void Validate() const;
};

struct Evaluation {
  Vec alpha;
  double cost = 0.0;
  bool diverged = false;
};

// Surrogate-driven minimization over a box in `dims` dimensions.
class BayesTuner {
 public:
  BayesTuner(int dims, TuneOptions options);

  // Unit scaling first, then a Latin hypercube.
  std::vector<Vec> SeedPoints();

  void Record(const Vec& alpha, double cost, bool diverged = false);

  // Minimizer of the acquisition over random candidates. Falls back to a
  // random candidate when the surrogate cannot be fitted.
  Vec Propose();

  const std::vector<Evaluation>& history() const { return history_; }
  // Best cost after each recorded evaluation.
  std::vector<double> BestSoFar() const;
  const Evaluation& best() const;
  int dims() const { return dims_; }
  long fallback_count() const { return fallbacks_; }

 private:
  double Uniform01();
  Vec RandomPoint();

  int dims_;
  TuneOptions options_;
  std::mt19937_64 rng_;
  std::vector<Evaluation> history_;
  long fallbacks_ = 0;
};

struct TuneResult {
  Vec alpha;
  double cost = 0.0;
  std::vector<Evaluation> history;
  std::vector<double> best_so_far;
  bool all_diverged = false;
};

// Evaluates a batch of candidates; results align with the input order.
using BatchEvaluator =
    std::function<std::vector<CostResult>(const std::vector<Vec>& alphas)>;

// Seeds, then `iterations` propose/evaluate rounds.
TuneResult Tune(int dims, int iterations, const TuneOptions& options,
                const BatchEvaluator& evaluate);

}  // namespace robust_track::tune

#endif  // ROBUST_TRACK_TUNE_BAYES_H_
