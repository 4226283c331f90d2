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

#ifndef ROBUST_TRACK_NUMERICS_OPTIMIZE_H_
#define ROBUST_TRACK_NUMERICS_OPTIMIZE_H_

#include <functional>

#include "robust_track/numerics/types.h"

namespace robust_track::numerics {

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

// Golden-section search for the minimum of a unimodal function on [lo, hi].
ScalarMinimum GoldenSection(const std::function<double(double)>& f, double lo,
                            double hi, double x_tol = 1e-9,
                            int max_iterations = 200);

struct SimplexMinimum {
  Vec x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Derivative-free Nelder-Mead minimization (GSL nmsimplex2).
SimplexMinimum NelderMead(const std::function<double(const Vec&)>& f,
                          const Vec& start, const Vec& step,
                          int max_iterations = 300, double size_tol = 1e-6);

}  // namespace robust_track::numerics

#endif  // ROBUST_TRACK_NUMERICS_OPTIMIZE_H_
