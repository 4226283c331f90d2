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

#include "robust_track/tune/bayes.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "robust_track/adapt/gpr.h"
#include "robust_track/common/errors.h"

namespace robust_track::tune {

CostResult GlobalCost(const std::vector<CostSample>& trace,
                      const CostWeights& weights, bool diverged) {
  CostResult out;
  if (diverged) {
    out.value = kDivergencePenalty;
    out.diverged = true;
    return out;
  }
  double total = 0.0;
  for (const CostSample& s : trace) {
    const Eigen::Map<const Eigen::Vector3d> z(s.z_e.data());
    const Eigen::Map<const Eigen::Vector2d> a(s.a_v.data());
    const Eigen::Map<const Eigen::Vector4d> phi(s.phi_v.data());
    total += z.dot(weights.w_e * z) + a.dot(weights.w_a * a) +
             phi.dot(weights.w_phi * phi);
  }
  if (!std::isfinite(total)) {
    out.value = kDivergencePenalty;
    out.diverged = true;
    return out;
  }
  out.value = total;
  return out;
}

control::ThetaRange ScaleRange(const control::ThetaRange& range, double alpha) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("ScaleRange: alpha must be > 0");
  }
  auto scale = [alpha](double& lo, double& hi) {
    const double mid = 0.5 * (lo + hi);
    lo /= alpha;
    hi *= alpha;
    if (lo > hi) lo = hi = mid;
  };
  control::ThetaRange out = range;
  scale(out.c_sigma_lo, out.c_sigma_hi);
  scale(out.c_alpha_lo, out.c_alpha_hi);
  return out;
}

void TuneOptions::Validate() const {
  if (!(lo > 0.0 && lo < hi) || !(kappa >= 0.0) || candidates < 1 ||
      seed_points < 1) {
    throw std::invalid_argument("TuneOptions: value out of range");
  }
}

BayesTuner::BayesTuner(int dims, TuneOptions options)
    : dims_(dims), options_(options), rng_(options.seed) {
  if (dims_ < 1) throw std::invalid_argument("BayesTuner: dims must be >= 1");
  options_.Validate();
}

double BayesTuner::Uniform01() {
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

Vec BayesTuner::RandomPoint() {
  Vec p(dims_);
  for (int d = 0; d < dims_; ++d) {
    p[d] = options_.lo + (options_.hi - options_.lo) * Uniform01();
  }
  return p;
}

std::vector<Vec> BayesTuner::SeedPoints() {
  std::vector<Vec> points;
  Vec unit = Vec::Ones(dims_);
  unit = unit.cwiseMax(options_.lo).cwiseMin(options_.hi);
  points.push_back(unit);
  const int n = options_.seed_points - 1;
  if (n <= 0) return points;
  std::vector<std::vector<int>> strata(static_cast<std::size_t>(dims_));
  for (auto& perm : strata) {
    perm.resize(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      const int j =
          static_cast<int>(rng_() % static_cast<std::uint64_t>(i + 1));
      std::swap(perm[static_cast<std::size_t>(i)],
                perm[static_cast<std::size_t>(j)]);
    }
  }
  for (int i = 0; i < n; ++i) {
    Vec p(dims_);
    for (int d = 0; d < dims_; ++d) {
      const double u =
          (strata[static_cast<std::size_t>(d)][static_cast<std::size_t>(i)] +
           Uniform01()) /
          n;
      p[d] = options_.lo + (options_.hi - options_.lo) * u;
    }
    points.push_back(p);
  }
  return points;
}

void BayesTuner::Record(const Vec& alpha, double cost, bool diverged) {
  if (alpha.size() != dims_) {
    throw std::invalid_argument("BayesTuner::Record: dimension mismatch");
  }
  if (!std::isfinite(cost)) {
    throw std::invalid_argument("BayesTuner::Record: cost must be finite");
  }
  history_.push_back({alpha, cost, diverged});
}

Vec BayesTuner::Propose() {
  const auto n = static_cast<Eigen::Index>(history_.size());
  const double width = options_.hi - options_.lo;
  // Surrogate targets: diverged runs are replaced by twice the worst
  // finite cost so the penalty does not swamp the fit.
  double worst = 0.0;
  bool any_finite = false;
  for (const Evaluation& e : history_) {
    if (!e.diverged) {
      worst = std::max(worst, e.cost);
      any_finite = true;
    }
  }
  const double replacement = any_finite ? 2.0 * worst + 1.0 : 1.0;
  Mat x(n, dims_);
  Vec y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Evaluation& e = history_[static_cast<std::size_t>(i)];
    x.row(i) = ((e.alpha.array() - options_.lo) / width).transpose();
    y[i] = e.diverged ? replacement : e.cost;
  }

  std::function<adapt::GprPrediction(const Vec&)> predict;
  adapt::StandardizedGpr fitted;
  adapt::GprModel prior;
  try {
    if (n >= 2) {
      adapt::GprFitOptions fo;
      fo.seed = options_.seed;
      fitted = adapt::StandardizedGpr::Fit(x, y, fo);
      predict = [&fitted](const Vec& q) { return fitted.Predict(q); };
    } else if (n == 1) {
      prior = adapt::GprModel(x, Vec::Zero(1), adapt::GprHyper{0.2, 1.0, 1e-8});
      predict = [&prior](const Vec& q) { return prior.Predict(q); };
    }
  } catch (const FitError&) {
    predict = nullptr;
  }
  if (!predict) {
    ++fallbacks_;
    return RandomPoint();
  }

  const double sign = options_.literal_ucb ? 1.0 : -1.0;
  Vec best;
  double best_value = std::numeric_limits<double>::infinity();
  for (int c = 0; c < options_.candidates; ++c) {
    const Vec alpha = RandomPoint();
    const Vec q = (alpha.array() - options_.lo) / width;
    const adapt::GprPrediction p = predict(q);
    const double acq =
        p.mean + sign * options_.kappa * std::sqrt(std::max(p.variance, 0.0));
    if (acq < best_value) {
      best_value = acq;
      best = alpha;
    }
  }
  return best;
}

std::vector<double> BayesTuner::BestSoFar() const {
  std::vector<double> out;
  double best = std::numeric_limits<double>::infinity();
  for (const Evaluation& e : history_) {
    best = std::min(best, e.cost);
    out.push_back(best);
  }
  return out;
}

const Evaluation& BayesTuner::best() const {
  if (history_.empty()) throw std::logic_error("BayesTuner: no evaluations");
  return *std::min_element(
      history_.begin(), history_.end(),
      [](const Evaluation& a, const Evaluation& b) { return a.cost < b.cost; });
}

TuneResult Tune(int dims, int iterations, const TuneOptions& options,
                const BatchEvaluator& evaluate) {
  BayesTuner tuner(dims, options);
  const std::vector<Vec> seeds = tuner.SeedPoints();
  const std::vector<CostResult> seed_costs = evaluate(seeds);
  if (seed_costs.size() != seeds.size()) {
    throw std::logic_error("Tune: evaluator returned the wrong batch size");
  }
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    tuner.Record(seeds[i], seed_costs[i].value, seed_costs[i].diverged);
  }
  for (int it = 0; it < iterations; ++it) {
    const Vec alpha = tuner.Propose();
    const CostResult r = evaluate({alpha}).at(0);
    tuner.Record(alpha, r.value, r.diverged);
  }
  TuneResult out;
  out.alpha = tuner.best().alpha;
  out.cost = tuner.best().cost;
  out.history = tuner.history();
  out.best_so_far = tuner.BestSoFar();
  out.all_diverged =
      std::all_of(out.history.begin(), out.history.end(),
                  [](const Evaluation& e) { return e.diverged; });
  return out;
}

}  // namespace robust_track::tune
