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

#ifndef ROBUST_TRACK_NUMERICS_TYPES_H_
#define ROBUST_TRACK_NUMERICS_TYPES_H_

#include <Eigen/Dense>

namespace robust_track::numerics {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline bool AllFinite(const Eigen::Ref<const Mat>& m) { return m.allFinite(); }

// Spectral radius of a square matrix.
double SpectralRadius(const Eigen::Ref<const Mat>& a);

// Largest real part over the spectrum.
double SpectralAbscissa(const Eigen::Ref<const Mat>& a);

// Largest eigenvalue of the symmetric part of `m`.
double MaxSymmetricEigenvalue(const Eigen::Ref<const Mat>& m);

// Smallest eigenvalue of the symmetric part of `m`.
double MinSymmetricEigenvalue(const Eigen::Ref<const Mat>& m);

// Frobenius-norm relative comparison: ||a - b|| <= tol * (1 + ||b||).
bool ApproxEqual(const Eigen::Ref<const Mat>& a, const Eigen::Ref<const Mat>& b,
                 double rel_tol = 1e-8);

}  // namespace robust_track::numerics

#endif  // ROBUST_TRACK_NUMERICS_TYPES_H_
