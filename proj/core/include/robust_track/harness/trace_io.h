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
#ifndef ROBUST_TRACK_HARNESS_TRACE_IO_H_
#define ROBUST_TRACK_HARNESS_TRACE_IO_H_

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "robust_track/harness/calibration.h"
#include "robust_track/plant/vehicle.h"
#include "robust_track/tune/bayes.h"

namespace robust_track::harness {

// Bits of TraceRow::flags.
enum TraceFlag : unsigned {
  kFlagLmiInfeasible = 1u << 0,
  kFlagLmiStale = 1u << 1,
  kFlagLmiConservative = 1u << 2,
  kFlagSmcBypass = 1u << 3,
  kFlagAllocationFailed = 1u << 4,
  kFlagBetaSaturated = 1u << 5,
  kFlagRlsSkipped = 1u << 6,
  kFlagDiverged = 1u << 7,
};

// One controller period: state at the tick and the commands issued there.
struct TraceRow {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;
  double v_x = 0.0;
  double v_y = 0.0;
  double omega_z = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  std::array<double, plant::kNumWheels> sigma{};   // measured slip
  std::array<double, plant::kNumWheels> torque{};  // commanded, N m
  double e_x = 0.0;
  double e_y = 0.0;
  double e_psi = 0.0;
  double s = 0.0;
  unsigned flags = 0;

  bool operator==(const TraceRow&) const = default;
};

using Trace = std::vector<TraceRow>;

constexpr int kTraceColumnCount = 22;
const std::array<const char*, kTraceColumnCount>& TraceColumns();

// Header plus one row per period, doubles at 17 significant digits.
void WriteTraceCsv(const Trace& trace, std::ostream& out);
// Throws IoError on a bad header, a short row or an unparsable cell.
Trace ReadTraceCsv(std::istream& in);

// File forms; IO failures name the path.
void SaveTrace(const Trace& trace, const std::string& path);
Trace LoadTrace(const std::string& path);

// step, theta, lambda, epsilon, P diagonal.
void SaveRlsTrace(const std::vector<RlsTraceRow>& rows,
                  const std::string& path);

// iteration, alpha triple, cost, diverged.
void SaveTuningHistory(const std::vector<tune::Evaluation>& history,
                       const std::string& path);

// Matplotlib script drawing path, lateral error, steering, side slip and yaw
// rate panels from the trace CSVs given on its command line.
std::string PlotScript();
void SavePlotScript(const std::string& path);

// Writes `text` to `path`, replacing it.
void SaveText(const std::string& text, const std::string& path);
std::string LoadText(const std::string& path);

}  // namespace robust_track::harness

#endif  // ROBUST_TRACK_HARNESS_TRACE_IO_H_
