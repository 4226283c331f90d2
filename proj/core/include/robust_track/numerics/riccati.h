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

#ifndef ROBUST_TRACK_NUMERICS_RICCATI_H_
#define ROBUST_TRACK_NUMERICS_RICCATI_H_

#include "robust_track/numerics/types.h"

namespace robust_track::numerics {

/// Stabilizing solution of the continuous algebraic Riccati equation
///
///   A'P + PA + Q - P B R^-1 B' P = 0
///
/// computed from the stable invariant subspace of the Hamiltonian matrix.
/// The subspace is extracted with a complex Schur decomposition whose
/// diagonal is reordered so that eigenvalues with negative real part come
/// first. Throws SynthesisError when the pair (A, B) is not stabilizable or
/// the eigenvalue split fails (eigenvalues on the imaginary axis).
Mat SolveCare(const Mat& a, const Mat& b, const Mat& q, const Mat& r);

/// Residual A'P + PA + Q - P B R^-1 B' P.
Mat CareResidual(const Mat& a, const Mat& b, const Mat& q, const Mat& r,
                 const Mat& p);

/// Stabilizing solution of the discrete algebraic Riccati equation by
/// fixed-point iteration of the Riccati difference equation. Only meant for
/// the small fallback designs in the controllers.
Mat SolveDare(const Mat& a, const Mat& b, const Mat& q, const Mat& r,
              int max_iterations = 10000, double tol = 1e-12);

/// Discrete LQR gain K for u = -K x from the DARE solution.
Mat DiscreteLqrGain(const Mat& a, const Mat& b, const Mat& q, const Mat& r);

}  // namespace robust_track::numerics

#endif  // ROBUST_TRACK_NUMERICS_RICCATI_H_
