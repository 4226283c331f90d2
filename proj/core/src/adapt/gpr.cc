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

#include "robust_track/adapt/gpr.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "robust_track/common/errors.h"
#include "robust_track/numerics/optimize.h"

namespace robust_track::adapt {
namespace {

constexpr double kLog2Pi = 1.8378770664093453;

GprHyper FromLog(const Vec& z, double min_sigma_eps2) {
  GprHyper h;
  h.length = std::exp(z[0]);
  h.sigma_f2 = std::exp(z[1]);
  h.sigma_eps2 = std::max(std::exp(z[2]), min_sigma_eps2);
  return h;
}

double Nll(const Mat& x, const Vec& y, const GprHyper& h) {
  try {
    return GprModel(x, y, h).NegLogMarginalLikelihood();
  } catch (const FitError&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

void GprHyper::Validate() const {
  if (!(length > 0.0) || !(sigma_f2 > 0.0) || !(sigma_eps2 >= 0.0)) {
    throw std::invalid_argument("GprHyper: hyperparameters must be positive");
  }
}

double RbfKernel(const Vec& x, const Vec& x_prime, const GprHyper& hyper) {
  const double d2 = (x - x_prime).squaredNorm();
  return hyper.sigma_f2 * std::exp(-d2 / (2.0 * hyper.length * hyper.length));
}

Mat KernelMatrix(const Mat& a, const Mat& b, const GprHyper& hyper) {
  Mat k(a.rows(), b.rows());
  const double inv = 1.0 / (2.0 * hyper.length * hyper.length);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      k(i, j) =
          hyper.sigma_f2 * std::exp(-(a.row(i) - b.row(j)).squaredNorm() * inv);
    }
  }
  return k;
}

GprModel::GprModel(Mat x, Vec y, const GprHyper& hyper)
    : x_(std::move(x)), y_(std::move(y)), hyper_(hyper) {
  hyper_.Validate();
  if (x_.rows() != y_.size() || x_.rows() == 0) {
    throw std::invalid_argument(
        "GprModel: X and Y sizes disagree or are empty");
  }
  Mat k = KernelMatrix(x_, x_, hyper_);
  k.diagonal().array() += hyper_.sigma_eps2;
  for (double jitter : {0.0, 1e-12, 1e-10, 1e-8, kMaxJitter}) {
    Mat kj = k;
    kj.diagonal().array() += jitter;
    llt_.compute(kj);
    if (llt_.info() == Eigen::Success && llt_.matrixLLT().allFinite() &&
        llt_.matrixLLT().diagonal().minCoeff() > 0.0) {
      jitter_ = jitter;
      weights_ = llt_.solve(y_);
      return;
    }
  }
  throw FitError("kernel matrix not positive definite after maximum jitter");
}

GprPrediction GprModel::Predict(const Vec& x_star) const {
  Vec k_star(x_.rows());
  for (Eigen::Index i = 0; i < x_.rows(); ++i) {
    k_star[i] = RbfKernel(x_.row(i).transpose(), x_star, hyper_);
  }
  GprPrediction out;
  out.mean = k_star.dot(weights_);
  const Vec v = llt_.matrixL().solve(k_star);
  out.variance = hyper_.sigma_f2 - v.squaredNorm();
  return out;
}

double GprModel::PredictMean(const Vec& x_star) const {
  double mean = 0.0;
  for (Eigen::Index i = 0; i < x_.rows(); ++i) {
    mean += RbfKernel(x_.row(i).transpose(), x_star, hyper_) * weights_[i];
  }
  return mean;
}

double GprModel::NegLogMarginalLikelihood() const {
  const double log_det = llt_.matrixLLT().diagonal().array().log().sum();
  return 0.5 * y_.dot(weights_) + log_det +
         0.5 * static_cast<double>(y_.size()) * kLog2Pi;
}

GprHyper FitHyper(const Mat& x, const Vec& y, const GprFitOptions& options) {
  struct Candidate {
    double nll;
    Vec z;
  };
  std::vector<Candidate> grid;
  for (double ll : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    for (double lf : {-1.0, 0.0, 1.0}) {
      for (double le : {-9.0, -6.0, -3.0, -1.0}) {
        Vec z(3);
        z << ll, lf, le;
        grid.push_back({Nll(x, y, FromLog(z, options.min_sigma_eps2)), z});
      }
    }
  }
  std::sort(
      grid.begin(), grid.end(),
      [](const Candidate& a, const Candidate& b) { return a.nll < b.nll; });
  if (!std::isfinite(grid.front().nll)) {
    throw FitError("no hyperparameter candidate gave a finite likelihood");
  }
  Candidate best = grid.front();
  const int restarts =
      std::min<int>(options.restarts, static_cast<int>(grid.size()));
  for (int r = 0; r < restarts; ++r) {
    if (!std::isfinite(grid[r].nll)) break;
    const auto result = numerics::NelderMead(
        [&](const Vec& z) {
          // Keep the search inside a sane box of log values.
          if (z.cwiseAbs().maxCoeff() > 20.0) {
            return std::numeric_limits<double>::infinity();
          }
          return Nll(x, y, FromLog(z, options.min_sigma_eps2));
        },
        grid[r].z, Vec::Constant(3, 0.5), options.max_iterations, 1e-4);
    if (result.value < best.nll) best = {result.value, result.x};
  }
  return FromLog(best.z, options.min_sigma_eps2);
}

StandardizedGpr StandardizedGpr::Fit(const Mat& x, const Vec& y,
                                     const GprFitOptions& options) {
  if (x.rows() < 2 || x.rows() != y.size()) {
    throw FitError("GPR fit needs at least two aligned samples");
  }
  if (!x.allFinite() || !y.allFinite()) {
    throw FitError("GPR fit data contains non-finite values");
  }
  // Random thinning to the subset cap.
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(x.rows()));
  std::iota(rows.begin(), rows.end(), 0);
  const std::size_t cap =
      static_cast<std::size_t>(std::max(options.subset_cap, 2));
  if (rows.size() > cap) {
    std::mt19937_64 rng(options.seed);
    for (std::size_t i = rows.size() - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
      std::swap(rows[i], rows[j]);
    }
    rows.resize(cap);
    std::sort(rows.begin(), rows.end());
  }
  Mat xs(static_cast<Eigen::Index>(rows.size()), x.cols());
  Vec ys(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    xs.row(static_cast<Eigen::Index>(i)) = x.row(rows[i]);
    ys[static_cast<Eigen::Index>(i)] = y[rows[i]];
  }

  StandardizedGpr out;
  out.x_mean_ = xs.colwise().mean().transpose();
  out.x_scale_ = Vec::Ones(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double sd =
        std::sqrt((xs.col(j).array() - out.x_mean_[j]).square().mean());
    if (sd > 1e-12) out.x_scale_[j] = sd;
  }
  out.y_mean_ = ys.mean();
  const double y_sd = std::sqrt((ys.array() - out.y_mean_).square().mean());
  out.y_scale_ = y_sd > 1e-12 ? y_sd : 1.0;

  Mat xn = xs;
  for (Eigen::Index i = 0; i < xn.rows(); ++i) {
    xn.row(i) =
        ((xs.row(i).transpose() - out.x_mean_).array() / out.x_scale_.array())
            .transpose();
  }
  const Vec yn = (ys.array() - out.y_mean_) / out.y_scale_;
  const GprHyper hyper = FitHyper(xn, yn, options);
  out.model_ = GprModel(xn, yn, hyper);
  return out;
}

GprPrediction StandardizedGpr::Predict(const Vec& x_star) const {
  const Vec xn = (x_star - x_mean_).array() / x_scale_.array();
  GprPrediction p = model_.Predict(xn);
  p.mean = y_mean_ + y_scale_ * p.mean;
  p.variance *= y_scale_ * y_scale_;
  return p;
}

void StandardizedGpr::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  const Mat& x = model_.x();
  out << "dims," << x.cols() << "\n";
  out << "x_mean";
  for (Eigen::Index j = 0; j < x.cols(); ++j) out << ',' << put(x_mean_[j]);
  out << "\nx_scale";
  for (Eigen::Index j = 0; j < x.cols(); ++j) out << ',' << put(x_scale_[j]);
  out << "\ny," << put(y_mean_) << ',' << put(y_scale_) << "\n";
  const GprHyper& h = model_.hyper();
  out << "hyper," << put(h.length) << ',' << put(h.sigma_f2) << ','
      << put(h.sigma_eps2) << "\n";
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) out << put(x(i, j)) << ',';
    out << put(model_.y()[i]) << "\n";
  }
  if (!out) throw IoError("write failed for " + path);
}

StandardizedGpr StandardizedGpr::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  auto fields = [&](const std::string& line) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    return f;
  };
  auto num = [&](const std::string& s) {
    try {
      return std::stod(s);
    } catch (const std::exception&) {
      throw IoError("malformed number '" + s + "' in " + path);
    }
  };
  std::string line;
  std::vector<std::vector<std::string>> head;
  for (int k = 0; k < 5; ++k) {
    if (!std::getline(in, line)) throw IoError("truncated GPR file " + path);
    head.push_back(fields(line));
  }
  const int dims = static_cast<int>(num(head[0].at(1)));
  StandardizedGpr out;
  out.x_mean_.resize(dims);
  out.x_scale_.resize(dims);
  for (int j = 0; j < dims; ++j) {
    out.x_mean_[j] = num(head[1].at(j + 1));
    out.x_scale_[j] = num(head[2].at(j + 1));
  }
  out.y_mean_ = num(head[3].at(1));
  out.y_scale_ = num(head[3].at(2));
  GprHyper h{num(head[4].at(1)), num(head[4].at(2)), num(head[4].at(3))};
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> r;
    for (const std::string& c : fields(line)) r.push_back(num(c));
    if (static_cast<int>(r.size()) != dims + 1) {
      throw IoError("row width mismatch in " + path);
    }
    rows.push_back(std::move(r));
  }
  Mat x(static_cast<Eigen::Index>(rows.size()), dims);
  Vec y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < dims; ++j)
      x(static_cast<Eigen::Index>(i), j) = rows[i][j];
    y[static_cast<Eigen::Index>(i)] = rows[i][dims];
  }
  out.model_ = GprModel(std::move(x), std::move(y), h);
  return out;
}

}  // namespace robust_track::adapt
