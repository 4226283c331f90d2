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

#include "robust_track/control/lmi_controller.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "robust_track/common/errors.h"
#include "robust_track/numerics/lmi.h"
#include "robust_track/numerics/riccati.h"
#include "robust_track/plant/tire.h"

namespace robust_track::control {
namespace {

std::array<Theta, 4> Corners(const ThetaRange& r) {
  return {Theta{r.c_sigma_lo, r.c_alpha_lo}, Theta{r.c_sigma_lo, r.c_alpha_hi},
          Theta{r.c_sigma_hi, r.c_alpha_lo}, Theta{r.c_sigma_hi, r.c_alpha_hi}};
}

double RearSlip(const Vec& x, const LateralContext& context,
                const plant::VehicleParams& params) {
  const double v_x = std::max(std::abs(x[0]), plant::kLowSpeed);
  return (context.v_y - params.b * x[1]) / v_x;
}

}  // namespace

ThetaRange ThetaRange::Around(const Theta& center, double fraction) {
  ThetaRange r;
  r.c_sigma_lo = center.c_sigma * (1.0 - fraction);
  r.c_sigma_hi = center.c_sigma * (1.0 + fraction);
  r.c_alpha_lo = center.c_alpha * (1.0 - fraction);
  r.c_alpha_hi = center.c_alpha * (1.0 + fraction);
  return r;
}

bool ThetaRange::Contains(const Theta& t) const {
  return t.c_sigma >= c_sigma_lo && t.c_sigma <= c_sigma_hi &&
         t.c_alpha >= c_alpha_lo && t.c_alpha <= c_alpha_hi;
}

void ThetaRange::Validate() const {
  if (!(c_sigma_lo > 0.0 && c_alpha_lo > 0.0)) {
    throw std::invalid_argument("ThetaRange: bounds must be positive");
  }
  if (c_sigma_lo > c_sigma_hi || c_alpha_lo > c_alpha_hi) {
    throw std::invalid_argument("ThetaRange: lo > hi");
  }
}

Vec LongitudinalYawRates(const Vec& x, const Vec& u, const Theta& theta,
                         const LateralContext& context,
                         const plant::VehicleParams& params) {
  const double f_z = params.Fz();
  const double sigma = u[0];
  const double alpha_r = RearSlip(x, context, params);
  const plant::TirePair front = plant::DugoffForce(
      sigma, u[1], f_z, theta.c_sigma, theta.c_alpha, params.mu);
  const plant::TirePair rear = plant::DugoffForce(
      sigma, alpha_r, f_z, theta.c_sigma, theta.c_alpha, params.mu);
  Vec rates(2);
  rates[0] = 2.0 * (front.f_x + rear.f_x) / params.m + context.v_y * x[1];
  // Body lateral force is the negative of the tire-frame force.
  rates[1] =
      (-2.0 * params.a * front.f_y + 2.0 * params.b * rear.f_y) / params.i_z;
  return rates;
}

Linearization LinearizeFunction(const RateFn& f, const Vec& x, const Vec& u,
                                double period) {
  if (!(period > 0.0)) {
    throw std::invalid_argument("LinearizeFunction: period must be > 0");
  }
  const auto n = x.size();
  const auto m = u.size();
  Linearization out;
  out.a = Mat::Identity(n, n);
  out.b = Mat::Zero(n, m);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
    Vec xp = x;
    Vec xm = x;
    xp[j] += h;
    xm[j] -= h;
    out.a.col(j) += period * (f(xp, u) - f(xm, u)) / (2.0 * h);
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(u[j]));
    Vec up = u;
    Vec um = u;
    up[j] += h;
    um[j] -= h;
    out.b.col(j) = period * (f(x, up) - f(x, um)) / (2.0 * h);
  }
  return out;
}

Linearization Linearize(const Vec& x_ref, const Vec& u_ref, const Theta& theta,
                        double period, const LateralContext& context,
                        const plant::VehicleParams& params) {
  Linearization out = LinearizeFunction(
      [&](const Vec& x, const Vec& u) {
        return LongitudinalYawRates(x, u, theta, context, params);
      },
      x_ref, u_ref, period);
  const double f_z = params.Fz();
  const double lam_f = plant::DugoffLambda(
      u_ref[0], u_ref[1], f_z, theta.c_sigma, theta.c_alpha, params.mu);
  const double lam_r =
      plant::DugoffLambda(u_ref[0], RearSlip(x_ref, context, params), f_z,
                          theta.c_sigma, theta.c_alpha, params.mu);
  out.valid = lam_f >= 1.0 && lam_r >= 1.0;
  return out;
}

Vec ReferenceInput(const Vec& x_ref, const Vec& x_dot_ref, const Theta& theta,
                   const LateralContext& context,
                   const plant::VehicleParams& params) {
  auto residual = [&](const Vec& u) {
    return Vec(LongitudinalYawRates(x_ref, u, theta, context, params) -
               x_dot_ref);
  };
  Vec u = Vec::Zero(2);
  for (int iter = 0; iter < 20; ++iter) {
    const Vec g = residual(u);
    if (g.norm() < 1e-10) break;
    Mat jac(2, 2);
    for (int j = 0; j < 2; ++j) {
      const double h = 1e-7;
      Vec up = u;
      Vec um = u;
      up[j] += h;
      um[j] -= h;
      jac.col(j) = (residual(up) - residual(um)) / (2.0 * h);
    }
    Eigen::FullPivLU<Mat> lu(jac);
    if (!lu.isInvertible()) break;
    Vec next = u - lu.solve(g);
    next[0] = std::clamp(next[0], -kMaxSigmaDes, kMaxSigmaDes);
    next[1] = std::clamp(next[1], -kMaxAlphaDes, kMaxAlphaDes);
    if ((next - u).norm() < 1e-14) {
      u = next;
      break;
    }
    u = next;
  }
  return u;
}

bool PolytopicModel::NominalInsideHull() const {
  for (Eigen::Index i = 0; i < a_hat.rows(); ++i) {
    for (Eigen::Index j = 0; j < a_hat.cols(); ++j) {
      double lo = a_vertices[0](i, j);
      double hi = lo;
      for (const Mat& v : a_vertices) {
        lo = std::min(lo, v(i, j));
        hi = std::max(hi, v(i, j));
      }
      if (lo > 1e-12 || hi < -1e-12) return false;
    }
    for (Eigen::Index j = 0; j < b_hat.cols(); ++j) {
      double lo = b_vertices[0](i, j);
      double hi = lo;
      for (const Mat& v : b_vertices) {
        lo = std::min(lo, v(i, j));
        hi = std::max(hi, v(i, j));
      }
      if (lo > 1e-12 || hi < -1e-12) return false;
    }
  }
  return true;
}

PolytopicModel BuildPolytope(const ThetaRange& range, const Theta& theta_hat,
                             const Vec& x_ref, const Vec& u_ref, double period,
                             const LateralContext& context,
                             const plant::VehicleParams& params) {
  range.Validate();
  PolytopicModel model;
  const Linearization nominal =
      Linearize(x_ref, u_ref, theta_hat, period, context, params);
  model.a_hat = nominal.a;
  model.b_hat = nominal.b;
  model.linearization_valid = nominal.valid;
  model.degenerate = range.c_sigma_lo == range.c_sigma_hi &&
                     range.c_alpha_lo == range.c_alpha_hi;
  const auto n = nominal.a.rows();
  const auto m = nominal.b.cols();
  const auto corners = Corners(range);
  for (int p = 0; p < 4; ++p) {
    if (model.degenerate) {
      model.a_vertices[p] = Mat::Zero(n, n);
      model.b_vertices[p] = Mat::Zero(n, m);
      continue;
    }
    const Linearization v =
        Linearize(x_ref, u_ref, corners[p], period, context, params);
    model.a_vertices[p] = v.a - nominal.a;
    model.b_vertices[p] = v.b - nominal.b;
  }
  model.m = Mat::Zero(n, 4 * n);
  model.na = Mat::Zero(4 * n, n);
  model.nb = Mat::Zero(4 * n, m);
  for (int p = 0; p < 4; ++p) {
    model.m.block(0, p * n, n, n) = Mat::Identity(n, n);
    model.na.block(p * n, 0, n, n) = model.a_vertices[p];
    model.nb.block(p * n, 0, n, m) = model.b_vertices[p];
  }
  return model;
}

double WorstVertexRadius(const PolytopicModel& model, const Mat& k) {
  double worst = numerics::SpectralRadius(model.a_hat + model.b_hat * k);
  for (int p = 0; p < 4; ++p) {
    const Mat closed = model.a_hat + model.a_vertices[p] +
                       (model.b_hat + model.b_vertices[p]) * k;
    worst = std::max(worst, numerics::SpectralRadius(closed));
  }
  return worst;
}

SynthesisResult Synthesize(const PolytopicModel& model, const Mat& q,
                           const Mat& r, long step, double strictness_tol) {
  numerics::SdpProblem problem;
  problem.a = model.a_hat;
  problem.b = model.b_hat;
  problem.d = model.m;
  problem.na = model.na;
  problem.nb = model.nb;
  problem.q = q;
  problem.r = r;
  problem.strictness_tol = strictness_tol;
  const numerics::LmiSolution sol = numerics::SolveLmi(problem);
  SynthesisResult out;
  if (!sol.feasible) {
    out.reason = sol.reason;
    return out;
  }
  LmiGain gain;
  gain.p = sol.p;
  gain.y = sol.y;
  gain.eps = sol.eps;
  gain.margin = sol.margin;
  gain.k = sol.y * sol.p.inverse();
  gain.synthesized_at = step;
  if (!(WorstVertexRadius(model, gain.k) < 1.0)) {
    out.reason = "vertex closed loop not Schur stable";
    return out;
  }
  out.gain = gain;
  return out;
}

LmiGain VertexAveragedLqr(const PolytopicModel& model, const Mat& q,
                          const Mat& r, long step) {
  Mat a = model.a_hat;
  Mat b = model.b_hat;
  for (int p = 0; p < 4; ++p) {
    a += 0.25 * model.a_vertices[p];
    b += 0.25 * model.b_vertices[p];
  }
  LmiGain gain;
  gain.k = -numerics::DiscreteLqrGain(a, b, q, r);
  gain.synthesized_at = step;
  gain.conservative = true;
  return gain;
}

LmiCommand Control(const LmiGain& gain, const Vec& x, const Vec& x_ref,
                   const Vec& u_ref, int staleness) {
  if (staleness > kMaxStalePeriods) {
    throw StaleGainError("LMI gain unverified for " +
                         std::to_string(staleness) + " periods");
  }
  const Vec u = gain.k * (x - x_ref) + u_ref;
  LmiCommand cmd;
  cmd.sigma_des = std::clamp(u[0], -kMaxSigmaDes, kMaxSigmaDes);
  cmd.alpha_des = std::clamp(u[1], -kMaxAlphaDes, kMaxAlphaDes);
  cmd.sigma_saturated = cmd.sigma_des != u[0];
  cmd.alpha_saturated = cmd.alpha_des != u[1];
  return cmd;
}

double SteeringCommand(const plant::VehicleState& state, double alpha_des,
                       const plant::VehicleParams& params, double previous) {
  if (std::abs(state.v_x) <= plant::kLowSpeed) return previous;
  return (state.v_y + state.omega_z * params.a) / state.v_x - alpha_des;
}

LmiController::LmiController(const plant::VehicleParams& nominal,
                             const LmiControllerOptions& options)
    : nominal_(nominal), q_(options.q), r_(options.r), options_(options) {
  if (q_.size() == 0) q_ = Eigen::Vector2d(4.0, 10.0).asDiagonal();
  if (r_.size() == 0) r_ = Eigen::Vector2d(2.0, 2.0).asDiagonal();
}

bool LmiController::NeedsSynthesis(const Theta& theta_hat) const {
  if (!gain_) return true;
  if (staleness_ > 0) return true;
  if (step_ - last_attempt_ >= options_.resynth_period) return true;
  const double ds = std::abs(theta_hat.c_sigma - theta_at_synthesis_.c_sigma) /
                    theta_at_synthesis_.c_sigma;
  const double da = std::abs(theta_hat.c_alpha - theta_at_synthesis_.c_alpha) /
                    theta_at_synthesis_.c_alpha;
  return std::max(ds, da) > options_.resynth_theta_change;
}

LmiCommand LmiController::Update(const plant::VehicleState& state,
                                 const tracking::PhaseTrajectory& traj,
                                 const Theta& theta_hat,
                                 const ThetaRange& range) {
  LmiStepInfo info;
  const LateralContext context{state.v_y};
  info.x_ref = Vec(2);
  info.x_ref << traj.v_x_des, traj.omega_z_des;
  Vec x_dot_ref(2);
  x_dot_ref << traj.v_x_dot_des, traj.omega_z_dot_des;
  info.u_ref =
      ReferenceInput(info.x_ref, x_dot_ref, theta_hat, context, nominal_);

  if (NeedsSynthesis(theta_hat)) {
    const PolytopicModel model =
        BuildPolytope(range, theta_hat, info.x_ref, info.u_ref, options_.period,
                      context, nominal_);
    info.linearization_valid = model.linearization_valid;
    last_attempt_ = step_;
    SynthesisResult result =
        Synthesize(model, q_, r_, step_, options_.strictness_tol);
    ++synthesis_count_;
    if (result.gain) {
      gain_ = std::move(result.gain);
      theta_at_synthesis_ = theta_hat;
      staleness_ = 0;
      info.synthesized = true;
    } else {
      ++infeasible_count_;
      info.infeasible = true;
      if (gain_ && !gain_->conservative && staleness_ < kMaxStalePeriods) {
        ++staleness_;
      } else {
        gain_ = VertexAveragedLqr(model, q_, r_, step_);
        theta_at_synthesis_ = theta_hat;
        staleness_ = 0;
        ++fallback_count_;
      }
    }
  }
  info.stale = staleness_ > 0;
  info.conservative = gain_->conservative;
  Vec x(2);
  x << state.v_x, state.omega_z;
  const LmiCommand cmd = Control(*gain_, x, info.x_ref, info.u_ref, staleness_);
  ++step_;
  last_ = info;
  return cmd;
}

}  // namespace robust_track::control
