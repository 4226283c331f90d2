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
#ifndef ROBUST_TRACK_HARNESS_METRICS_H_
#define ROBUST_TRACK_HARNESS_METRICS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "robust_track/harness/trace_io.h"

namespace robust_track::harness {

struct RunMetrics {
  std::string scenario;  // config fingerprint
  std::string mode;
  std::uint64_t seed = 0;
  bool diverged = false;
  long steps = 0;
  double max_e_y = 0.0;              // m
  double rms_e_y = 0.0;              // m
  double max_beta = 0.0;             // rad
  double max_omega_error = 0.0;      // rad/s
  double steering_smoothness = 0.0;  // sum |delta_k - delta_{k-1}|, rad
  double j_g = 0.0;
  long lmi_infeasible = 0;
  long lmi_fallbacks = 0;
  long smc_bypass = 0;
  long allocation_failures = 0;

  bool operator==(const RunMetrics&) const = default;
};

// Lateral error, side slip and steering statistics of a complete trace.
void SummarizeTrace(const Trace& trace, RunMetrics& metrics);

// `key = value` lines; ParseMetrics(FormatMetrics(m)) == m.
std::string FormatMetrics(const RunMetrics& metrics);
RunMetrics ParseMetrics(const std::string& text);

struct MetricDelta {
  std::string name;
  double a = 0.0;
  double b = 0.0;
  double delta = 0.0;   // a - b
  int improvement = 0;  // +1 when a is lower, -1 when b is lower
};

struct ComparisonReport {
  std::string label_a;
  std::string label_b;
  std::size_t runs = 1;
  std::vector<MetricDelta> rows;

  const MetricDelta& Row(const std::string& name) const;
  // Fixed-width summary table.
  std::string Table() const;
};

// Throws ComparisonError unless both runs share scenario and seed.
ComparisonReport Compare(const RunMetrics& a, const RunMetrics& b);
// Medians over runs; both sides must cover the same scenario and seed set.
ComparisonReport CompareBatches(const std::vector<RunMetrics>& a,
                                const std::vector<RunMetrics>& b);

double Median(std::vector<double> values);

}  // namespace robust_track::harness

#endif  // ROBUST_TRACK_HARNESS_METRICS_H_
