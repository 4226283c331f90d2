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

#include "robust_track/numerics/types.h"

#include <algorithm>

namespace robust_track::numerics {

double SpectralRadius(const Eigen::Ref<const Mat>& a) {
  Eigen::EigenSolver<Mat> solver(a, /*computeEigenvectors=*/false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double SpectralAbscissa(const Eigen::Ref<const Mat>& a) {
  Eigen::EigenSolver<Mat> solver(a, /*computeEigenvectors=*/false);
  return solver.eigenvalues().real().maxCoeff();
}

double MaxSymmetricEigenvalue(const Eigen::Ref<const Mat>& m) {
  const Mat sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

double MinSymmetricEigenvalue(const Eigen::Ref<const Mat>& m) {
  const Mat sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool ApproxEqual(const Eigen::Ref<const Mat>& a, const Eigen::Ref<const Mat>& b,
                 double rel_tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a - b).norm() <= rel_tol * (1.0 + b.norm());
}

}  // namespace robust_track::numerics
