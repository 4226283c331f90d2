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
#ifndef ROBUST_TRACK_HARNESS_PARALLEL_H_
#define ROBUST_TRACK_HARNESS_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace robust_track::harness {

// ROBUST_TRACK_THREADS when set to a positive integer, else the hardware
// concurrency; at least 1.
int ThreadBudget();

// Calls body(i) for i in [0, n) on up to ThreadBudget() threads. The first
// exception thrown by any call is rethrown after all threads finish.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace robust_track::harness

#endif  // ROBUST_TRACK_HARNESS_PARALLEL_H_
