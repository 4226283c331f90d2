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

#include "robust_track/numerics/optimize.h"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace robust_track::numerics {

ScalarMinimum GoldenSection(const std::function<double(double)>& f, double lo,
                            double hi, double x_tol, int max_iterations) {
  if (!(hi >= lo)) throw std::invalid_argument("GoldenSection: hi < lo");
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  ScalarMinimum out;
  double a = lo;
  double b = hi;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = f(c);
  double fd = f(d);
  out.evaluations = 2;
  for (int i = 0; i < max_iterations && (b - a) > x_tol; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = f(d);
    }
    ++out.evaluations;
  }
  out.x = fc < fd ? c : d;
  out.value = std::min(fc, fd);
  // Endpoints are admissible minimizers too.
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  out.evaluations += 2;
  if (f_lo < out.value) {
    out.x = lo;
    out.value = f_lo;
  }
  if (f_hi < out.value) {
    out.x = hi;
    out.value = f_hi;
  }
  return out;
}

namespace {

struct Closure {
  const std::function<double(const Vec&)>* f;
  int evaluations = 0;
};

double Trampoline(const gsl_vector* x, void* params) {
  auto* closure = static_cast<Closure*>(params);
  Vec v(static_cast<Eigen::Index>(x->size));
  for (std::size_t i = 0; i < x->size; ++i) {
    v[static_cast<Eigen::Index>(i)] = gsl_vector_get(x, i);
  }
  ++closure->evaluations;
  const double value = (*closure->f)(v);
  return std::isfinite(value) ? value : std::numeric_limits<double>::max();
}

}  // namespace

SimplexMinimum NelderMead(const std::function<double(const Vec&)>& f,
                          const Vec& start, const Vec& step, int max_iterations,
                          double size_tol) {
  const auto n = static_cast<std::size_t>(start.size());
  if (n == 0 || step.size() != start.size()) {
    throw std::invalid_argument("NelderMead: bad start/step dimensions");
  }
  gsl_set_error_handler_off();
  Closure closure{&f, 0};
  gsl_multimin_function fn{&Trampoline, n, &closure};

  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(gsl_vector_alloc(n),
                                                            &gsl_vector_free);
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> ss(
      gsl_vector_alloc(n), &gsl_vector_free);
  for (std::size_t i = 0; i < n; ++i) {
    gsl_vector_set(x.get(), i, start[static_cast<Eigen::Index>(i)]);
    gsl_vector_set(ss.get(), i, step[static_cast<Eigen::Index>(i)]);
  }
  std::unique_ptr<gsl_multimin_fminimizer,
                  decltype(&gsl_multimin_fminimizer_free)>
      solver(
          gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n),
          &gsl_multimin_fminimizer_free);
  gsl_multimin_fminimizer_set(solver.get(), &fn, x.get(), ss.get());

  SimplexMinimum out;
  for (int iter = 0; iter < max_iterations; ++iter) {
    if (gsl_multimin_fminimizer_iterate(solver.get()) != GSL_SUCCESS) break;
    const double size = gsl_multimin_fminimizer_size(solver.get());
    if (gsl_multimin_test_size(size, size_tol) == GSL_SUCCESS) {
      out.converged = true;
      break;
    }
  }
  out.x.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    out.x[static_cast<Eigen::Index>(i)] = gsl_vector_get(solver->x, i);
  }
  out.value = solver->fval;
  out.evaluations = closure.evaluations;
  return out;
}

}  // namespace robust_track::numerics
