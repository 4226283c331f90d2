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

#ifndef ROBUST_TRACK_NUMERICS_ODE_H_
#define ROBUST_TRACK_NUMERICS_ODE_H_

#include <functional>

#include "robust_track/numerics/types.h"

namespace robust_track::numerics {

using DerivativeFn = std::function<Vec(const Vec&)>;

// One classical fourth-order Runge-Kutta step of an autonomous system.
// Throws IntegrationError naming the first non-finite stage component.
Vec IntegrateRk4(const DerivativeFn& deriv, const Vec& x0, double dt);

}  // namespace robust_track::numerics

#endif  // ROBUST_TRACK_NUMERICS_ODE_H_
