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
#include "robust_track/harness/trace_io.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "robust_track/common/errors.h"

namespace robust_track::harness {

namespace {

std::string Num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double ParseCell(const std::string& cell, std::size_t line) {
  double v;
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw IoError("trace line " + std::to_string(line) + ": bad value `" +
                  cell + "`");
  }
  return v;
}

std::vector<std::string> Split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

void Finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace

const std::array<const char*, kTraceColumnCount>& TraceColumns() {
  static const std::array<const char*, kTraceColumnCount> kColumns = {
      "t",         "x",         "y",        "psi",       "v_x",
      "v_y",       "omega_z",   "beta",     "delta",     "sigma_fl",
      "sigma_fr",  "sigma_rl",  "sigma_rr", "torque_fl", "torque_fr",
      "torque_rl", "torque_rr", "e_x",      "e_y",       "e_psi",
      "s",         "flags"};
  return kColumns;
}

void WriteTraceCsv(const Trace& trace, std::ostream& out) {
  const auto& cols = TraceColumns();
  for (int i = 0; i < kTraceColumnCount; ++i) {
    out << (i ? "," : "") << cols[i];
  }
  out << '\n';
  for (const TraceRow& r : trace) {
    out << Num(r.t) << ',' << Num(r.x) << ',' << Num(r.y) << ',' << Num(r.psi)
        << ',' << Num(r.v_x) << ',' << Num(r.v_y) << ',' << Num(r.omega_z)
        << ',' << Num(r.beta) << ',' << Num(r.delta);
    for (double v : r.sigma) out << ',' << Num(v);
    for (double v : r.torque) out << ',' << Num(v);
    out << ',' << Num(r.e_x) << ',' << Num(r.e_y) << ',' << Num(r.e_psi) << ','
        << Num(r.s) << ',' << r.flags << '\n';
  }
}

Trace ReadTraceCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("trace: missing header");
  const std::vector<std::string> header = Split(line);
  const auto& cols = TraceColumns();
  if (header.size() != cols.size()) throw IoError("trace: wrong column count");
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (header[i] != cols[i]) {
      throw IoError("trace: unexpected column `" + header[i] + "`");
    }
  }
  Trace trace;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> cells = Split(line);
    if (cells.size() != cols.size()) {
      throw IoError("trace line " + std::to_string(line_no) + ": expected " +
                    std::to_string(kTraceColumnCount) + " columns");
    }
    double v[kTraceColumnCount - 1];
    for (int i = 0; i < kTraceColumnCount - 1; ++i) {
      v[i] = ParseCell(cells[i], line_no);
    }
    TraceRow r;
    r.t = v[0];
    r.x = v[1];
    r.y = v[2];
    r.psi = v[3];
    r.v_x = v[4];
    r.v_y = v[5];
    r.omega_z = v[6];
    r.beta = v[7];
    r.delta = v[8];
    for (int i = 0; i < plant::kNumWheels; ++i) {
      r.sigma[i] = v[9 + i];
      r.torque[i] = v[13 + i];
    }
    r.e_x = v[17];
    r.e_y = v[18];
    r.e_psi = v[19];
    r.s = v[20];
    const std::string& f = cells.back();
    const auto [ptr, ec] =
        std::from_chars(f.data(), f.data() + f.size(), r.flags);
    if (ec != std::errc() || ptr != f.data() + f.size()) {
      throw IoError("trace line " + std::to_string(line_no) + ": bad flags");
    }
    trace.push_back(r);
  }
  return trace;
}

void SaveTrace(const Trace& trace, const std::string& path) {
  std::ofstream out = OpenOut(path);
  WriteTraceCsv(trace, out);
  Finish(out, path);
}

Trace LoadTrace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  try {
    return ReadTraceCsv(in);
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

void SaveRlsTrace(const std::vector<RlsTraceRow>& rows,
                  const std::string& path) {
  std::ofstream out = OpenOut(path);
  out << "step,c_sigma,c_alpha,lambda,epsilon,p_sigma,p_alpha,updated\n";
  for (const RlsTraceRow& r : rows) {
    out << r.step << ',' << Num(r.c_sigma) << ',' << Num(r.c_alpha) << ','
        << Num(r.lambda) << ',' << Num(r.epsilon) << ',' << Num(r.p_sigma)
        << ',' << Num(r.p_alpha) << ',' << (r.updated ? 1 : 0) << '\n';
  }
  Finish(out, path);
}

void SaveTuningHistory(const std::vector<tune::Evaluation>& history,
                       const std::string& path) {
  std::ofstream out = OpenOut(path);
  out << "iteration,alpha_theta,alpha_i,alpha_e,cost,diverged\n";
  for (std::size_t i = 0; i < history.size(); ++i) {
    const tune::Evaluation& e = history[i];
    out << i;
    for (Eigen::Index j = 0; j < 3; ++j) {
      out << ',' << (j < e.alpha.size() ? Num(e.alpha[j]) : "");
    }
    out << ',' << Num(e.cost) << ',' << (e.diverged ? 1 : 0) << '\n';
  }
  Finish(out, path);
}

std::string PlotScript() {
  return R"PY(#!/usr/bin/env python3
"""Plots trace CSVs: path, lateral error, steering, side slip, yaw rate."""
import argparse
import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def load(path):
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    return {k: [float(r[k]) for r in rows] for k in rows[0]} if rows else {}


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("traces", nargs="+")
    parser.add_argument("--out", default=None)
    args = parser.parse_args()
    fig, axes = plt.subplots(5, 1, figsize=(8, 14))
    panels = [("x", "y", "y [m]"), ("t", "e_y", "e_y [m]"),
              ("t", "delta", "delta [rad]"), ("t", "beta", "beta [rad]"),
              ("t", "omega_z", "omega_z [rad/s]")]
    for path in args.traces:
        data = load(path)
        if not data:
            continue
        label = os.path.basename(os.path.dirname(os.path.abspath(path)))
        for ax, (xk, yk, _) in zip(axes, panels):
            ax.plot(data[xk], data[yk], label=label)
    for ax, (xk, _, ylabel) in zip(axes, panels):
        ax.set_xlabel("x [m]" if xk == "x" else "t [s]")
        ax.set_ylabel(ylabel)
        ax.grid(True)
    axes[0].legend()
    fig.tight_layout()
    out = args.out or os.path.splitext(args.traces[0])[0] + ".png"
    fig.savefig(out, dpi=120)
    print(out)


if __name__ == "__main__":
    main()
)PY";
}

void SavePlotScript(const std::string& path) { SaveText(PlotScript(), path); }

void SaveText(const std::string& text, const std::string& path) {
  std::ofstream out = OpenOut(path);
  out << text;
  Finish(out, path);
}

std::string LoadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace robust_track::harness
