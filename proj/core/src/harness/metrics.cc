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
#include "robust_track/harness/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "robust_track/common/errors.h"

namespace robust_track::harness {

namespace {

struct Field {
  const char* name;
  std::function<double(const RunMetrics&)> get;
};

const std::vector<Field>& ComparedFields() {
  static const std::vector<Field> kFields = {
      {"max_e_y", [](const RunMetrics& m) { return m.max_e_y; }},
      {"rms_e_y", [](const RunMetrics& m) { return m.rms_e_y; }},
      {"max_beta", [](const RunMetrics& m) { return m.max_beta; }},
      {"max_omega_error",
       [](const RunMetrics& m) { return m.max_omega_error; }},
      {"steering_smoothness",
       [](const RunMetrics& m) { return m.steering_smoothness; }},
      {"j_g", [](const RunMetrics& m) { return m.j_g; }},
      {"diverged", [](const RunMetrics& m) { return m.diverged ? 1.0 : 0.0; }},
      {"lmi_infeasible",
       [](const RunMetrics& m) { return double(m.lmi_infeasible); }},
      {"lmi_fallbacks",
       [](const RunMetrics& m) { return double(m.lmi_fallbacks); }},
      {"smc_bypass", [](const RunMetrics& m) { return double(m.smc_bypass); }},
      {"allocation_failures",
       [](const RunMetrics& m) { return double(m.allocation_failures); }},
  };
  return kFields;
}

std::string Num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

MetricDelta MakeDelta(const std::string& name, double a, double b) {
  MetricDelta d{name, a, b, a - b, 0};
  if (a < b) d.improvement = 1;
  if (b < a) d.improvement = -1;
  return d;
}

}  // namespace

void SummarizeTrace(const Trace& trace, RunMetrics& m) {
  m.steps = static_cast<long>(trace.size());
  m.max_e_y = m.rms_e_y = m.max_beta = m.steering_smoothness = 0.0;
  double sum_sq = 0.0;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const TraceRow& r = trace[k];
    m.max_e_y = std::max(m.max_e_y, std::abs(r.e_y));
    m.max_beta = std::max(m.max_beta, std::abs(r.beta));
    sum_sq += r.e_y * r.e_y;
    if (k > 0) m.steering_smoothness += std::abs(r.delta - trace[k - 1].delta);
    if (r.flags & kFlagDiverged) m.diverged = true;
  }
  if (!trace.empty()) m.rms_e_y = std::sqrt(sum_sq / trace.size());
}

std::string FormatMetrics(const RunMetrics& m) {
  std::ostringstream out;
  out << "scenario = " << m.scenario << '\n'
      << "mode = " << m.mode << '\n'
      << "seed = " << m.seed << '\n'
      << "diverged = " << (m.diverged ? "true" : "false") << '\n'
      << "steps = " << m.steps << '\n'
      << "max_e_y = " << Num(m.max_e_y) << '\n'
      << "rms_e_y = " << Num(m.rms_e_y) << '\n'
      << "max_beta = " << Num(m.max_beta) << '\n'
      << "max_omega_error = " << Num(m.max_omega_error) << '\n'
      << "steering_smoothness = " << Num(m.steering_smoothness) << '\n'
      << "j_g = " << Num(m.j_g) << '\n'
      << "lmi_infeasible = " << m.lmi_infeasible << '\n'
      << "lmi_fallbacks = " << m.lmi_fallbacks << '\n'
      << "smc_bypass = " << m.smc_bypass << '\n'
      << "allocation_failures = " << m.allocation_failures << '\n';
  return out.str();
}

RunMetrics ParseMetrics(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    kv[line.substr(0, eq)] = line.substr(eq + 3);
  }
  auto get = [&](const char* key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw IoError(std::string("metrics: missing ") + key);
    return it->second;
  };
  auto num = [&](const char* key) {
    try {
      return std::stod(get(key));
    } catch (const std::logic_error&) {
      throw IoError(std::string("metrics: bad value for ") + key);
    }
  };
  auto integer = [&](const char* key) {
    try {
      return std::stol(get(key));
    } catch (const std::logic_error&) {
      throw IoError(std::string("metrics: bad value for ") + key);
    }
  };
  RunMetrics m;
  m.scenario = get("scenario");
  m.mode = get("mode");
  try {
    m.seed = std::stoull(get("seed"));
  } catch (const std::logic_error&) {
    throw IoError("metrics: bad value for seed");
  }
  m.diverged = get("diverged") == "true";
  m.steps = integer("steps");
  m.max_e_y = num("max_e_y");
  m.rms_e_y = num("rms_e_y");
  m.max_beta = num("max_beta");
  m.max_omega_error = num("max_omega_error");
  m.steering_smoothness = num("steering_smoothness");
  m.j_g = num("j_g");
  m.lmi_infeasible = integer("lmi_infeasible");
  m.lmi_fallbacks = integer("lmi_fallbacks");
  m.smc_bypass = integer("smc_bypass");
  m.allocation_failures = integer("allocation_failures");
  return m;
}

const MetricDelta& ComparisonReport::Row(const std::string& name) const {
  for (const MetricDelta& d : rows) {
    if (d.name == name) return d;
  }
  throw std::out_of_range("ComparisonReport: no metric " + name);
}

std::string ComparisonReport::Table() const {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-22s %14s %14s %14s  %s\n", "metric",
                label_a.c_str(), label_b.c_str(), "a - b", "lower");
  out << buf;
  for (const MetricDelta& d : rows) {
    const char* who = d.improvement > 0   ? label_a.c_str()
                      : d.improvement < 0 ? label_b.c_str()
                                          : "=";
    std::snprintf(buf, sizeof buf, "%-22s %14.6g %14.6g %14.6g  %s\n",
                  d.name.c_str(), d.a, d.b, d.delta, who);
    out << buf;
  }
  if (runs > 1) out << "(medians over " << runs << " runs)\n";
  return out.str();
}

ComparisonReport Compare(const RunMetrics& a, const RunMetrics& b) {
  return CompareBatches({a}, {b});
}

ComparisonReport CompareBatches(const std::vector<RunMetrics>& a,
                                const std::vector<RunMetrics>& b) {
  if (a.empty() || a.size() != b.size()) {
    throw ComparisonError("comparison needs equally sized, non-empty sets");
  }
  std::set<std::uint64_t> seeds_a, seeds_b;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].scenario != a[0].scenario || b[i].scenario != a[0].scenario) {
      throw ComparisonError("runs come from different scenarios (" +
                            a[i].scenario + " vs " + b[i].scenario + ")");
    }
    seeds_a.insert(a[i].seed);
    seeds_b.insert(b[i].seed);
  }
  if (seeds_a != seeds_b) throw ComparisonError("seed sets differ");
  ComparisonReport report;
  report.label_a = a[0].mode.empty() ? "a" : a[0].mode;
  report.label_b = b[0].mode.empty() ? "b" : b[0].mode;
  if (report.label_a == report.label_b) {
    report.label_a += "[a]";
    report.label_b += "[b]";
  }
  report.runs = a.size();
  for (const Field& f : ComparedFields()) {
    std::vector<double> va, vb;
    for (const RunMetrics& m : a) va.push_back(f.get(m));
    for (const RunMetrics& m : b) vb.push_back(f.get(m));
    report.rows.push_back(MakeDelta(f.name, Median(va), Median(vb)));
  }
  return report;
}

double Median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("Median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace robust_track::harness
