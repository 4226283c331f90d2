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

#include "robust_track/numerics/ode.h"

#include <cmath>
#include <stdexcept>

#include "robust_track/common/errors.h"

namespace robust_track::numerics {
namespace {

Vec CheckedStage(const DerivativeFn& deriv, const Vec& x) {
  Vec k = deriv(x);
  for (Eigen::Index i = 0; i < k.size(); ++i) {
    if (!std::isfinite(k[i])) {
      throw IntegrationError(static_cast<std::size_t>(i), k[i]);
    }
  }
  return k;
}

}  // namespace

Vec IntegrateRk4(const DerivativeFn& deriv, const Vec& x0, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("IntegrateRk4: dt must be > 0");
  const Vec k1 = CheckedStage(deriv, x0);
  if (k1.size() != x0.size()) {
    throw std::invalid_argument("IntegrateRk4: derivative size mismatch");
  }
  const Vec k2 = CheckedStage(deriv, x0 + 0.5 * dt * k1);
  const Vec k3 = CheckedStage(deriv, x0 + 0.5 * dt * k2);
  const Vec k4 = CheckedStage(deriv, x0 + dt * k3);
  return x0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace robust_track::numerics
