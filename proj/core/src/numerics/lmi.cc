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

#include "robust_track/numerics/lmi.h"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace robust_track::numerics {
namespace {

// Upper bound on eps kept by the barrier so the problem stays bounded when
// eps only enters through a zero D.
constexpr double kEpsUpperBound = 1e4;

struct Layout {
  int n, m, p;
  int o0, o1, o2, o3, o4, size;
  int num_p, num_y;
  int num_vars() const { return num_p + num_y + 1; }
};

Layout MakeLayout(const SdpProblem& pr) {
  Layout l{};
  l.n = pr.n();
  l.m = pr.m();
  l.p = pr.p();
  l.o0 = 0;
  l.o1 = l.n;
  l.o2 = 2 * l.n;
  l.o3 = 2 * l.n + l.p;
  l.o4 = 3 * l.n + l.p;
  l.size = 3 * l.n + l.p + l.m;
  l.num_p = l.n * (l.n + 1) / 2;
  l.num_y = l.m * l.n;
  return l;
}

// Affine description of the block matrix: G(v) = g0 + sum_i v_i basis[i].
// The two trailing diagonal entries carry -eps < 0 and eps - eps_max < 0.
struct AffineForm {
  Mat g0;
  std::vector<Mat> basis;
};

void AddSymmetricBlock(Mat& g, int row, int col, const Mat& block) {
  g.block(row, col, block.rows(), block.cols()) += block;
  if (row != col) {
    g.block(col, row, block.cols(), block.rows()) += block.transpose();
  }
}

AffineForm BuildAffineForm(const SdpProblem& pr, const Layout& l) {
  const int total = l.size + 2;
  AffineForm form;
  form.g0 = Mat::Zero(total, total);
  form.g0.block(l.o3, l.o3, l.n, l.n) = -pr.q.inverse();
  form.g0.block(l.o4, l.o4, l.m, l.m) = -pr.r.inverse();
  form.g0(l.size + 1, l.size + 1) = -kEpsUpperBound;

  for (int i = 0; i < l.n; ++i) {
    for (int j = i; j < l.n; ++j) {
      Mat e = Mat::Zero(l.n, l.n);
      e(i, j) = 1.0;
      e(j, i) = 1.0;
      Mat g = Mat::Zero(total, total);
      g.block(l.o0, l.o0, l.n, l.n) -= e;
      AddSymmetricBlock(g, l.o0, l.o1, pr.a * e);
      g.block(l.o1, l.o1, l.n, l.n) -= e;
      if (l.p > 0) AddSymmetricBlock(g, l.o2, l.o1, pr.na * e);
      AddSymmetricBlock(g, l.o3, l.o1, e);
      form.basis.push_back(std::move(g));
    }
  }
  for (int j = 0; j < l.n; ++j) {
    for (int i = 0; i < l.m; ++i) {
      Mat f = Mat::Zero(l.m, l.n);
      f(i, j) = 1.0;
      Mat g = Mat::Zero(total, total);
      AddSymmetricBlock(g, l.o0, l.o1, pr.b * f);
      if (l.p > 0) AddSymmetricBlock(g, l.o2, l.o1, pr.nb * f);
      AddSymmetricBlock(g, l.o4, l.o1, f);
      form.basis.push_back(std::move(g));
    }
  }
  Mat g = Mat::Zero(total, total);
  g.block(l.o0, l.o0, l.n, l.n) += pr.d * pr.d.transpose();
  if (l.p > 0) g.block(l.o2, l.o2, l.p, l.p) -= Mat::Identity(l.p, l.p);
  g(l.size, l.size) = -1.0;
  g(l.size + 1, l.size + 1) = 1.0;
  form.basis.push_back(std::move(g));
  return form;
}

Vec Pack(const Layout& l, const Mat& p, const Mat& y, double eps) {
  Vec v(l.num_vars());
  int k = 0;
  for (int i = 0; i < l.n; ++i) {
    for (int j = i; j < l.n; ++j) v[k++] = (i == j) ? p(i, i) : p(i, j);
  }
  for (int j = 0; j < l.n; ++j) {
    for (int i = 0; i < l.m; ++i) v[k++] = y(i, j);
  }
  v[k] = eps;
  return v;
}

void Unpack(const Layout& l, const Vec& v, Mat* p, Mat* y, double* eps) {
  *p = Mat::Zero(l.n, l.n);
  *y = Mat::Zero(l.m, l.n);
  int k = 0;
  for (int i = 0; i < l.n; ++i) {
    for (int j = i; j < l.n; ++j) {
      (*p)(i, j) = v[k];
      (*p)(j, i) = v[k];
      ++k;
    }
  }
  for (int j = 0; j < l.n; ++j) {
    for (int i = 0; i < l.m; ++i) (*y)(i, j) = v[k++];
  }
  *eps = v[k];
}

// Objective f(v) with gradient and Hessian; returns false outside its domain.
using Objective = std::function<bool(const Vec&, double*, Vec*, Mat*)>;

struct BarrierProblem {
  // Strict constraint: S(v) = -(g0 + sum_i v_i basis[i]) > 0.
  Mat g0;
  std::vector<Mat> basis;
  Objective objective;
};

Mat Slack(const BarrierProblem& bp, const Vec& v) {
  Mat s = -bp.g0;
  for (std::size_t i = 0; i < bp.basis.size(); ++i) {
    s.noalias() -= v[static_cast<Eigen::Index>(i)] * bp.basis[i];
  }
  return s;
}

// -log det S(v), or +inf when S(v) is not positive definite.
double LogBarrier(const BarrierProblem& bp, const Vec& v,
                  Eigen::LLT<Mat>* llt_out = nullptr) {
  Eigen::LLT<Mat> llt(Slack(bp, v));
  if (llt.info() != Eigen::Success) {
    return std::numeric_limits<double>::infinity();
  }
  const Vec diag = llt.matrixLLT().diagonal();
  double value = 0.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (!(diag[i] > 0.0)) return std::numeric_limits<double>::infinity();
    value -= 2.0 * std::log(diag[i]);
  }
  if (llt_out != nullptr) *llt_out = std::move(llt);
  return value;
}

// Damped Newton minimization of t f(v) + barrier(v). Consumes iterations
// from `budget`; stops early when `stop(v)` holds.
void Center(const BarrierProblem& bp, double t, Vec& v, int& budget,
            const std::function<bool(const Vec&)>& stop) {
  const auto k = static_cast<Eigen::Index>(bp.basis.size());
  while (budget > 0) {
    Eigen::LLT<Mat> llt;
    const double phi = LogBarrier(bp, v, &llt);
    double f = 0.0;
    Vec gf;
    Mat hf;
    if (!std::isfinite(phi) || !bp.objective(v, &f, &gf, &hf)) return;
    --budget;

    const Mat s_inv = llt.solve(Mat::Identity(bp.g0.rows(), bp.g0.cols()));
    std::vector<Mat> z(static_cast<std::size_t>(k));
    Vec grad = t * gf;
    Mat hess = t * hf;
    for (Eigen::Index i = 0; i < k; ++i) {
      z[i] = s_inv * bp.basis[i];
      grad[i] += z[i].trace();
    }
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index j = i; j < k; ++j) {
        const double h = (z[i].array() * z[j].transpose().array()).sum();
        hess(i, j) += h;
        if (i != j) hess(j, i) += h;
      }
    }

    Eigen::LDLT<Mat> ldlt(hess);
    Vec dv = ldlt.solve(-grad);
    if (ldlt.info() != Eigen::Success || !dv.allFinite()) {
      const double reg = 1e-12 * (1.0 + hess.diagonal().cwiseAbs().maxCoeff());
      dv = (hess + reg * Mat::Identity(k, k)).ldlt().solve(-grad);
      if (!dv.allFinite()) return;
    }
    const double decrement = -grad.dot(dv);
    if (decrement < 0.0 || 0.5 * decrement < 1e-10) return;

    const double merit = t * f + phi;
    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Vec trial = v + alpha * dv;
      const double trial_phi = LogBarrier(bp, trial);
      double trial_f = 0.0;
      if (std::isfinite(trial_phi) &&
          bp.objective(trial, &trial_f, nullptr, nullptr)) {
        if (t * trial_f + trial_phi <= merit - 0.25 * alpha * decrement) {
          v = trial;
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!accepted) return;
    if (stop && stop(v)) return;
  }
}

}  // namespace

void SdpProblem::Validate() const {
  const auto nn = a.rows();
  const auto mm = b.cols();
  const auto pp = na.rows();
  auto fail = [](const char* what) {
    throw std::invalid_argument(std::string("SdpProblem: ") + what);
  };
  if (nn == 0 || a.cols() != nn) fail("A must be square and non-empty");
  if (b.rows() != nn || mm == 0) fail("B has wrong shape");
  if (d.rows() != nn || d.cols() != pp) fail("D must be n x p");
  if (na.cols() != nn) fail("N_a must be p x n");
  if (nb.rows() != pp || nb.cols() != mm) fail("N_b must be p x m");
  if (q.rows() != nn || q.cols() != nn) fail("Q must be n x n");
  if (r.rows() != mm || r.cols() != mm) fail("R must be m x m");
  if (cost_weight.size() != 0 &&
      (cost_weight.rows() != nn || cost_weight.cols() != nn)) {
    fail("cost weight must be n x n");
  }
  if (MinSymmetricEigenvalue(q) <= 0.0) fail("Q must be positive definite");
  if (MinSymmetricEigenvalue(r) <= 0.0) fail("R must be positive definite");
  if (!(strictness_tol > 0.0)) fail("strictness tolerance must be > 0");
}

Mat AssembleLmiBlock(const SdpProblem& problem, const Mat& p, const Mat& y,
                     double eps) {
  const int n = problem.n();
  const int m = problem.m();
  const int q = problem.p();
  const int size = 3 * n + q + m;
  const Mat closed = problem.a * p + problem.b * y;
  Mat block = Mat::Zero(size, size);

  block.topLeftCorner(n, n) = -p + eps * problem.d * problem.d.transpose();
  block.block(0, n, n, n) = closed;
  block.block(n, 0, n, n) = closed.transpose();
  block.block(n, n, n, n) = -p;
  if (q > 0) {
    const Mat unc = problem.na * p + problem.nb * y;
    block.block(n, 2 * n, n, q) = unc.transpose();
    block.block(2 * n, n, q, n) = unc;
    block.block(2 * n, 2 * n, q, q) = -eps * Mat::Identity(q, q);
  }
  block.block(n, 2 * n + q, n, n) = p;
  block.block(2 * n + q, n, n, n) = p;
  block.block(n, 3 * n + q, n, m) = y.transpose();
  block.block(3 * n + q, n, m, n) = y;
  block.block(2 * n + q, 2 * n + q, n, n) = -problem.q.inverse();
  block.block(3 * n + q, 3 * n + q, m, m) = -problem.r.inverse();
  return block;
}

LmiCheck VerifyLmi(const SdpProblem& problem, const Mat& p, const Mat& y,
                   double eps) {
  LmiCheck check;
  if (!p.allFinite() || !y.allFinite() || !std::isfinite(eps)) return check;
  const Mat block = AssembleLmiBlock(problem, p, y, eps);
  Eigen::SelfAdjointEigenSolver<Mat> solver(0.5 * (block + block.transpose()),
                                            Eigen::EigenvaluesOnly);
  check.margin = -solver.eigenvalues().maxCoeff();
  check.p_min_eigenvalue = MinSymmetricEigenvalue(p);
  check.ok = check.margin >= problem.strictness_tol &&
             check.p_min_eigenvalue > 0.0 && eps > 0.0;
  return check;
}

LmiSolution SolveLmi(const SdpProblem& problem) {
  problem.Validate();
  const Layout layout = MakeLayout(problem);
  const AffineForm form = BuildAffineForm(problem, layout);
  const int k = layout.num_vars();
  const int total = layout.size + 2;
  const double margin = 1.5 * problem.strictness_tol;
  int budget = problem.max_newton_iterations;

  LmiSolution result;

  // Phase I: minimize s subject to G(v) < s I (slack only on the LMI rows).
  BarrierProblem phase1;
  phase1.g0 = form.g0;
  phase1.basis = form.basis;
  Mat s_basis = Mat::Zero(total, total);
  s_basis.topLeftCorner(layout.size, layout.size) =
      -Mat::Identity(layout.size, layout.size);
  phase1.basis.push_back(s_basis);
  phase1.objective = [k](const Vec& v, double* f, Vec* g, Mat* h) {
    *f = v[k];
    if (g != nullptr) {
      *g = Vec::Zero(k + 1);
      (*g)[k] = 1.0;
    }
    if (h != nullptr) *h = Mat::Zero(k + 1, k + 1);
    return true;
  };

  const double p0 = 1.0 / (1.0 + MaxSymmetricEigenvalue(problem.q));
  Vec v1(k + 1);
  v1.head(k) = Pack(layout, p0 * Mat::Identity(layout.n, layout.n),
                    Mat::Zero(layout.m, layout.n), 1e-3 * p0);
  {
    Mat g = form.g0;
    for (int i = 0; i < k; ++i) g += v1[i] * form.basis[i];
    v1[k] =
        MaxSymmetricEigenvalue(g.topLeftCorner(layout.size, layout.size)) + 1.0;
  }
  auto phase1_done = [&](const Vec& v) { return v[k] < -2.0 * margin; };
  double t = 1.0;
  const double barrier_order = static_cast<double>(total);
  while (budget > 0 && !phase1_done(v1)) {
    Center(phase1, t, v1, budget, phase1_done);
    if (phase1_done(v1)) break;
    if (barrier_order / t < 1e-10 * (1.0 + std::abs(v1[k]))) break;
    t *= 10.0;
  }
  result.newton_iterations = problem.max_newton_iterations - budget;
  if (!phase1_done(v1)) {
    result.feasible = false;
    result.reason = budget > 0
                        ? "infeasible: phase I optimum is non-negative"
                        : "infeasible: Newton iteration budget exhausted";
    result.margin = -v1[k];
    Unpack(layout, v1.head(k), &result.p, &result.y, &result.eps);
    return result;
  }

  // Phase II: minimize trace(W P^-1) subject to G(v) <= -margin I.
  const Mat weight = problem.cost_weight.size() == 0
                         ? Mat::Identity(layout.n, layout.n)
                         : problem.cost_weight;
  BarrierProblem phase2;
  phase2.g0 = form.g0;
  phase2.g0.topLeftCorner(layout.size, layout.size) +=
      margin * Mat::Identity(layout.size, layout.size);
  phase2.basis = form.basis;
  std::vector<Mat> p_basis;
  for (int i = 0; i < layout.n; ++i) {
    for (int j = i; j < layout.n; ++j) {
      Mat e = Mat::Zero(layout.n, layout.n);
      e(i, j) = 1.0;
      e(j, i) = 1.0;
      p_basis.push_back(std::move(e));
    }
  }
  phase2.objective = [&layout, &weight, &p_basis, k](const Vec& v, double* f,
                                                     Vec* g, Mat* h) {
    Mat p, y;
    double eps;
    Unpack(layout, v, &p, &y, &eps);
    Eigen::LLT<Mat> llt(p);
    if (llt.info() != Eigen::Success) return false;
    const Mat p_inv = llt.solve(Mat::Identity(layout.n, layout.n));
    *f = (weight * p_inv).trace();
    if (g == nullptr && h == nullptr) return true;
    const int np = layout.num_p;
    std::vector<Mat> mi(static_cast<std::size_t>(np));
    for (int i = 0; i < np; ++i) mi[i] = p_inv * p_basis[i];
    const Mat wp = p_inv * weight;
    if (g != nullptr) {
      *g = Vec::Zero(k);
      for (int i = 0; i < np; ++i) (*g)[i] = -(wp * mi[i]).trace();
    }
    if (h != nullptr) {
      *h = Mat::Zero(k, k);
      for (int i = 0; i < np; ++i) {
        for (int j = i; j < np; ++j) {
          const double value =
              (wp * mi[i] * mi[j]).trace() + (wp * mi[j] * mi[i]).trace();
          (*h)(i, j) = value;
          (*h)(j, i) = value;
        }
      }
    }
    return true;
  };

  Vec v2 = v1.head(k);
  Vec best = v2;
  double f0 = 0.0;
  phase2.objective(v2, &f0, nullptr, nullptr);
  t = 1.0 / std::max(std::abs(f0), 1e-12);
  while (budget > 0) {
    Center(phase2, t, v2, budget, nullptr);
    if (std::isfinite(LogBarrier(phase2, v2))) best = v2;
    double f = 0.0;
    phase2.objective(best, &f, nullptr, nullptr);
    if (barrier_order / t < 1e-8 * (1.0 + std::abs(f))) break;
    t *= 10.0;
  }
  result.newton_iterations = problem.max_newton_iterations - budget;

  Unpack(layout, best, &result.p, &result.y, &result.eps);
  const LmiCheck check = VerifyLmi(problem, result.p, result.y, result.eps);
  result.margin = check.margin;
  result.feasible = check.ok;
  if (check.ok) {
    result.objective = (weight * result.p.inverse()).trace();
  } else {
    result.reason = "solver point failed the eigenvalue re-check";
  }
  return result;
}

}  // namespace robust_track::numerics
