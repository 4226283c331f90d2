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

#include "robust_track/numerics/riccati.h"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "robust_track/common/errors.h"

namespace robust_track::numerics {
namespace {

using CMat = Eigen::MatrixXcd;
using Complex = std::complex<double>;

void CheckDimensions(const Mat& a, const Mat& b, const Mat& q, const Mat& r) {
  const auto n = a.rows();
  if (a.cols() != n || b.rows() != n || q.rows() != n || q.cols() != n ||
      r.rows() != b.cols() || r.cols() != b.cols() || n == 0 || b.cols() == 0) {
    throw std::invalid_argument("Riccati: inconsistent matrix dimensions");
  }
}

// Exchanges the diagonal entries k and k+1 of the upper triangular Schur
// factor with a unitary rotation, keeping T = U^H H U.
void SwapDiagonal(CMat& t, CMat& u, Eigen::Index k) {
  const Complex t11 = t(k, k);
  const Complex t22 = t(k + 1, k + 1);
  // Eigenvector of the leading 2x2 block belonging to t22.
  Complex x1 = t(k, k + 1);
  Complex x2 = t22 - t11;
  const double norm = std::hypot(std::abs(x1), std::abs(x2));
  if (norm == 0.0) return;
  x1 /= norm;
  x2 /= norm;
  Eigen::Matrix2cd g;
  g << x1, -std::conj(x2), x2, std::conj(x1);
  t.middleRows(k, 2) = (g.adjoint() * t.middleRows(k, 2)).eval();
  t.middleCols(k, 2) = (t.middleCols(k, 2) * g).eval();
  u.middleCols(k, 2) = (u.middleCols(k, 2) * g).eval();
  t(k + 1, k) = Complex(0.0, 0.0);
}

// Solves A_c' X + X A_c = -C for symmetric C via the Kronecker form.
Mat SolveLyapunov(const Mat& ac, const Mat& c) {
  const auto n = ac.rows();
  const Mat eye = Mat::Identity(n, n);
  Mat kron(n * n, n * n);
  // vec(A'X) = (I kron A') vec(X), vec(X A) = (A' kron I) vec(X).
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      kron.block(i * n, j * n, n, n) =
          eye(i, j) * ac.transpose() + ac(j, i) * eye;
    }
  }
  const Eigen::Map<const Vec> rhs(c.data(), n * n);
  Vec x = kron.fullPivLu().solve(-rhs);
  Mat out = Eigen::Map<Mat>(x.data(), n, n);
  return 0.5 * (out + out.transpose());
}

}  // namespace

Mat CareResidual(const Mat& a, const Mat& b, const Mat& q, const Mat& r,
                 const Mat& p) {
  const Mat rinv_bt = r.ldlt().solve(b.transpose());
  return a.transpose() * p + p * a + q - p * b * rinv_bt * p;
}

Mat SolveCare(const Mat& a, const Mat& b, const Mat& q, const Mat& r) {
  CheckDimensions(a, b, q, r);
  const auto n = a.rows();
  const Mat rinv_bt = r.ldlt().solve(b.transpose());
  const Mat s = b * rinv_bt;

  Mat h(2 * n, 2 * n);
  h << a, -s, -q, -a.transpose();

  Eigen::ComplexSchur<Mat> schur(h, /*computeU=*/true);
  if (schur.info() != Eigen::Success) {
    throw SynthesisError("SolveCare: Schur decomposition did not converge");
  }
  CMat t = schur.matrixT();
  CMat u = schur.matrixU();

  const double scale = 1.0 + h.norm();
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    if (std::abs(t(i, i).real()) <= 1e-11 * scale) {
      throw SynthesisError(
          "SolveCare: Hamiltonian has eigenvalues on the imaginary axis");
    }
  }

  // Bubble the stable eigenvalues to the leading block.
  bool swapped = true;
  while (swapped) {
    swapped = false;
    for (Eigen::Index k = 0; k + 1 < 2 * n; ++k) {
      if (t(k, k).real() > 0.0 && t(k + 1, k + 1).real() < 0.0) {
        SwapDiagonal(t, u, k);
        swapped = true;
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (t(i, i).real() >= 0.0) {
      throw SynthesisError(
          "SolveCare: stable/unstable eigenvalue split failed");
    }
  }

  const CMat u11 = u.topLeftCorner(n, n);
  const CMat u21 = u.bottomLeftCorner(n, n);
  Eigen::FullPivLU<CMat> lu(u11);
  if (!lu.isInvertible() || lu.rcond() < 1e-13) {
    throw SynthesisError("SolveCare: (A, B) is not stabilizable");
  }
  const CMat pc = u21 * lu.inverse();
  Mat p = pc.real();
  p = 0.5 * (p + p.transpose());

  // Newton (Kleinman) refinement on the residual.
  for (int iter = 0; iter < 3; ++iter) {
    const Mat res = CareResidual(a, b, q, r, p);
    if (res.norm() <= 1e-13 * (1.0 + p.norm())) break;
    const Mat ac = a - s * p;
    const Mat dp = SolveLyapunov(ac, res);
    if (!dp.allFinite()) break;
    p += dp;
  }

  if (!p.allFinite()) {
    throw SynthesisError("SolveCare: non-finite solution");
  }
  return p;
}

Mat SolveDare(const Mat& a, const Mat& b, const Mat& q, const Mat& r,
              int max_iterations, double tol) {
  CheckDimensions(a, b, q, r);
  Mat p = q;
  for (int k = 0; k < max_iterations; ++k) {
    const Mat btp = b.transpose() * p;
    const Mat gain = (r + btp * b).ldlt().solve(btp * a);
    Mat next = q + a.transpose() * p * a - a.transpose() * p * b * gain;
    next = 0.5 * (next + next.transpose());
    if (!next.allFinite()) break;
    const double change = (next - p).norm();
    p = std::move(next);
    if (change <= tol * (1.0 + p.norm())) return p;
  }
  throw SynthesisError("SolveDare: Riccati iteration did not converge");
}

Mat DiscreteLqrGain(const Mat& a, const Mat& b, const Mat& q, const Mat& r) {
  const Mat p = SolveDare(a, b, q, r);
  const Mat btp = b.transpose() * p;
  return (r + btp * b).ldlt().solve(btp * a);
}

}  // namespace robust_track::numerics
