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

#ifndef ROBUST_TRACK_ADAPT_GPR_H_
#define ROBUST_TRACK_ADAPT_GPR_H_

#include <Eigen/Cholesky>
#include <cstdint>
#include <string>

#include "robust_track/numerics/types.h"

namespace robust_track::adapt {

using numerics::Mat;
using numerics::Vec;

struct GprHyper {
  double length = 1.0;
  double sigma_f2 = 1.0;
  double sigma_eps2 = 1e-4;

  void Validate() const;
};

// sigma_f2 exp(-|x - x'|^2 / (2 l^2)).
double RbfKernel(const Vec& x, const Vec& x_prime, const GprHyper& hyper);
Mat KernelMatrix(const Mat& a, const Mat& b, const GprHyper& hyper);

constexpr double kMaxJitter = 1e-6;

struct GprPrediction {
  double mean = 0.0;
  double variance = 0.0;
};

// Zero-mean GP on the given rows. The factorization of
// K(X, X) + sigma_eps2 I (plus jitter up to kMaxJitter if needed) is cached.
class GprModel {
 public:
  GprModel() = default;
  // Throws FitError when the kernel stays indefinite after max jitter.
  GprModel(Mat x, Vec y, const GprHyper& hyper);

  GprPrediction Predict(const Vec& x_star) const;
  double PredictMean(const Vec& x_star) const;

  const Mat& x() const { return x_; }
  const Vec& y() const { return y_; }
  const GprHyper& hyper() const { return hyper_; }
  double jitter() const { return jitter_; }
  bool fitted() const { return x_.rows() > 0; }

  // 0.5 y^T a + sum log L_ii + n/2 log 2 pi.
  double NegLogMarginalLikelihood() const;

 private:
  Mat x_;
  Vec y_;
  GprHyper hyper_;
  double jitter_ = 0.0;
  Eigen::LLT<Mat> llt_;
  Vec weights_;  // [K + sigma_eps2 I]^-1 y
};

struct GprFitOptions {
  int restarts = 5;
  int max_iterations = 150;  // per Nelder-Mead restart
  int subset_cap = 500;
  std::uint64_t seed = 0;
  double min_sigma_eps2 = 1e-8;
};

// Standardized inputs and targets around a zero-mean GP whose
// hyperparameters minimize the negative log marginal likelihood.
class StandardizedGpr {
 public:
  StandardizedGpr() = default;

  // Requires at least two rows. Throws FitError on failure.
  static StandardizedGpr Fit(const Mat& x, const Vec& y,
                             const GprFitOptions& options = {});

  GprPrediction Predict(const Vec& x_star) const;
  double PredictMean(const Vec& x_star) const { return Predict(x_star).mean; }

  const GprModel& inner() const { return model_; }
  const Vec& x_mean() const { return x_mean_; }
  const Vec& x_scale() const { return x_scale_; }
  double y_mean() const { return y_mean_; }
  double y_scale() const { return y_scale_; }
  bool fitted() const { return model_.fitted(); }

  // Flat CSV dump: standardization rows, hyperparameters, then X|Y rows.
  void Save(const std::string& path) const;
  static StandardizedGpr Load(const std::string& path);

 private:
  GprModel model_;
  Vec x_mean_;
  Vec x_scale_;
  double y_mean_ = 0.0;
  double y_scale_ = 1.0;
};

// Multi-start search over log-hyperparameters: a coarse grid, then
// Nelder-Mead from the best `restarts` grid points.
GprHyper FitHyper(const Mat& x, const Vec& y, const GprFitOptions& options);

}  // namespace robust_track::adapt

#endif  // ROBUST_TRACK_ADAPT_GPR_H_
