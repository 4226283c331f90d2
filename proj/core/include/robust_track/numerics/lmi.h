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

#ifndef ROBUST_TRACK_NUMERICS_LMI_H_
#define ROBUST_TRACK_NUMERICS_LMI_H_

#include <string>

#include "robust_track/numerics/types.h"

namespace robust_track::numerics {

/// Robust guaranteed-cost state-feedback synthesis problem for
///
///   x(k+1) = (A + D F N_a) x(k) + (B + D F N_b) u(k),  F'F <= I,
///
/// posed as one symmetric block matrix affine in the unknowns P (n x n,
/// symmetric), Y (m x n) and eps (scalar):
///
///   [ -P + eps D D'   AP + BY        0       0      0    ]
///   [ (AP + BY)'      -P        (N_a P + N_b Y)'  P    Y' ]
///   [ 0          N_a P + N_b Y    -eps I     0      0    ]  <  0
///   [ 0               P             0     -Q^-1     0    ]
///   [ 0               Y             0       0    -R^-1   ]
///
/// Feasible points give the gain K = Y P^-1 for u = K x. Among feasible
/// points the solver minimizes trace(W P^-1), the guaranteed cost bound
/// summed over the directions encoded by W.
struct SdpProblem {
  Mat a;            // n x n
  Mat b;            // n x m
  Mat d;            // n x p, uncertainty structure matrix
  Mat na;           // p x n
  Mat nb;           // p x m
  Mat q;            // n x n, positive definite
  Mat r;            // m x m, positive definite
  Mat cost_weight;  // n x n, positive semidefinite; empty means identity
  double strictness_tol = 1e-7;
  int max_newton_iterations = 600;

  int n() const { return static_cast<int>(a.rows()); }
  int m() const { return static_cast<int>(b.cols()); }
  int p() const { return static_cast<int>(na.rows()); }

  // Throws std::invalid_argument if block dimensions are inconsistent.
  void Validate() const;
};

struct LmiSolution {
  bool feasible = false;
  Mat p;
  Mat y;
  double eps = 0.0;
  // -lambda_max of the block matrix at the returned point.
  double margin = 0.0;
  // Guaranteed-cost objective trace(W P^-1).
  double objective = 0.0;
  int newton_iterations = 0;
  std::string reason;

  Mat Gain() const { return y * p.inverse(); }
};

/// Solves the feasibility + guaranteed-cost problem with a two-phase
/// log-det barrier method. A point is reported feasible only after
/// VerifyLmi() on the explicitly assembled block matrix passes.
LmiSolution SolveLmi(const SdpProblem& problem);

/// Block matrix assembled directly from (P, Y, eps).
Mat AssembleLmiBlock(const SdpProblem& problem, const Mat& p, const Mat& y,
                     double eps);

struct LmiCheck {
  bool ok = false;
  double margin = 0.0;  // -lambda_max(block)
  double p_min_eigenvalue = 0.0;
};

/// Independent eigenvalue check: block <= -strictness_tol * I, P > 0 and
/// eps > 0.
LmiCheck VerifyLmi(const SdpProblem& problem, const Mat& p, const Mat& y,
                   double eps);

}  // namespace robust_track::numerics

#endif  // ROBUST_TRACK_NUMERICS_LMI_H_
