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

// Command line front end: scenario runs, tuning, identification, GPR fits,
// run comparison and plot-script emission.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "robust_track/common/errors.h"
#include "robust_track/harness/calibration.h"
#include "robust_track/harness/config.h"
#include "robust_track/harness/metrics.h"
#include "robust_track/harness/runner.h"
#include "robust_track/harness/trace_io.h"

namespace fs = std::filesystem;
namespace rh = robust_track::harness;

namespace {

// Lateral-error figures of an external simulator study, shown for context.
constexpr double kReferenceArcMaxEy = 0.043;
constexpr double kReferenceFixedMaxEy = 0.104;

constexpr const char* kTraceFile = "trace.csv";
constexpr const char* kMetricsFile = "metrics.txt";
constexpr const char* kConfigFile = "config.cfg";

rh::Config LoadScenario(const std::string& path) {
  return path.empty() ? rh::Config() : rh::LoadConfig(path);
}

fs::path PrepareOut(const std::string& dir) {
  fs::create_directories(dir);
  return fs::path(dir);
}

std::string Path(const fs::path& dir, const char* name) {
  return (dir / name).string();
}

rh::Calibration CalibrateVerbose(const rh::Config& config) {
  std::cerr << "calibrating (identification + GPR fits)...\n";
  return rh::Calibrate(config);
}

int CmdRun(const std::string& scenario, const std::string& mode_name,
           std::uint64_t seed, const std::string& out_dir) {
  const rh::Config config = LoadScenario(scenario);
  const rh::Mode mode = rh::ParseMode(mode_name);
  const rh::Calibration cal = CalibrateVerbose(config);
  const rh::RunResult result = rh::Run(config, mode, seed, cal);
  const fs::path out = PrepareOut(out_dir);
  rh::SaveTrace(result.trace, Path(out, kTraceFile));
  rh::SaveText(rh::FormatMetrics(result.metrics), Path(out, kMetricsFile));
  rh::SaveText(rh::FormatConfig(config), Path(out, kConfigFile));
  std::cout << rh::FormatMetrics(result.metrics);
  return result.metrics.diverged ? 3 : 0;
}

int CmdTune(const std::string& scenario,
            const std::vector<std::uint64_t>& seeds,
            const std::string& out_dir) {
  rh::Config config = LoadScenario(scenario);
  const rh::Calibration cal = CalibrateVerbose(config);
  const auto result = rh::TuneBoundaries(config, cal, seeds);
  const fs::path out = PrepareOut(out_dir);
  rh::SaveTuningHistory(result.history, Path(out, "tuning_history.csv"));
  config.boundaries = {result.alpha[0], result.alpha[1], result.alpha[2]};
  rh::SaveText(rh::FormatConfig(config), Path(out, "tuned.cfg"));
  std::printf(
      "alpha_theta = %.6g\nalpha_i = %.6g\nalpha_e = %.6g\n"
      "cost = %.9g\nevaluations = %zu\n",
      result.alpha[0], result.alpha[1], result.alpha[2], result.cost,
      result.history.size());
  return result.all_diverged ? 3 : 0;
}

int CmdIdentify(const std::string& scenario, std::uint64_t seed,
                const std::string& out_dir) {
  const rh::Config config = LoadScenario(scenario);
  std::vector<rh::RlsTraceRow> rows;
  const auto samples = rh::ExcitationRun(config, false, seed);
  const auto state = rh::Identify(config, samples, &rows);
  const fs::path out = PrepareOut(out_dir);
  rh::SaveRlsTrace(rows, Path(out, "rls_trace.csv"));
  const auto truth = config.TruthParams();
  std::ostringstream text;
  text.precision(17);
  text << "samples = " << samples.size() << "\n"
       << "c_sigma = " << state.theta[0] << "\n"
       << "c_alpha = " << state.theta[1] << "\n"
       << "c_sigma_truth = " << truth.c_sigma << "\n"
       << "c_alpha_truth = " << truth.c_alpha << "\n"
       << "skipped = " << state.skipped << "\n";
  rh::SaveText(text.str(), Path(out, "identified.txt"));
  std::cout << text.str();
  return 0;
}

void SaveTable(const robust_track::adapt::EnvelopeTable& table,
               const fs::path& out, const std::string& stem) {
  table.internal.SaveCsv((out / (stem + "_internal.csv")).string());
  table.external.SaveCsv((out / (stem + "_external.csv")).string());
}

int CmdFitGpr(const std::string& scenario, const std::string& out_dir) {
  const rh::Config config = LoadScenario(scenario);
  const rh::Calibration cal = CalibrateVerbose(config);
  const fs::path out = PrepareOut(out_dir);
  cal.gpr_beta_dot.Save(Path(out, "gpr_beta_dot.csv"));
  cal.gpr_omega_dot.Save(Path(out, "gpr_omega_dot.csv"));
  cal.gpr_wheel.Save(Path(out, "gpr_wheel.csv"));
  SaveTable(cal.beta_dot, out, "envelope_beta_dot");
  SaveTable(cal.omega_dot, out, "envelope_omega_dot");
  SaveTable(cal.wheel, out, "envelope_wheel");
  std::ostringstream text;
  text.precision(9);
  auto describe = [&](const char* name,
                      const robust_track::adapt::StandardizedGpr& gpr,
                      const robust_track::adapt::EnvelopeTable& table) {
    const auto& h = gpr.inner().hyper();
    double max_i = 0.0;
    double max_e = 0.0;
    for (double v : table.internal.values()) max_i = std::max(max_i, v);
    for (double v : table.external.values()) max_e = std::max(max_e, v);
    text << name << ".length = " << h.length << "\n"
         << name << ".sigma_f2 = " << h.sigma_f2 << "\n"
         << name << ".sigma_eps2 = " << h.sigma_eps2 << "\n"
         << name << ".train_points = " << gpr.inner().x().rows() << "\n"
         << name << ".max_internal = " << max_i << "\n"
         << name << ".max_external = " << max_e << "\n";
  };
  describe("beta_dot", cal.gpr_beta_dot, cal.beta_dot);
  describe("omega_dot", cal.gpr_omega_dot, cal.omega_dot);
  describe("wheel", cal.gpr_wheel, cal.wheel);
  rh::SaveText(text.str(), Path(out, "gpr_summary.txt"));
  std::cout << text.str();
  return 0;
}

int CmdCompare(const std::string& dir_a, const std::string& dir_b) {
  const rh::RunMetrics a =
      rh::ParseMetrics(rh::LoadText(Path(fs::path(dir_a), kMetricsFile)));
  const rh::RunMetrics b =
      rh::ParseMetrics(rh::LoadText(Path(fs::path(dir_b), kMetricsFile)));
  rh::ComparisonReport report = rh::Compare(a, b);
  report.label_a = dir_a;
  report.label_b = dir_b;
  std::cout << report.Table();
  std::printf(
      "reference max|e_y| (context only): adaptive %.3f m, "
      "fixed-boundary %.3f m\n",
      kReferenceArcMaxEy, kReferenceFixedMaxEy);
  return 0;
}

int CmdPlot(const std::string& trace, const std::string& out) {
  rh::LoadTrace(trace);  // validates the file before emitting the script
  const fs::path script = fs::path(trace).parent_path() / "plot_trace.py";
  rh::SavePlotScript(script.string());
  const std::string image =
      out.empty() ? (fs::path(trace).replace_extension(".png")).string() : out;
  std::printf("python3 %s %s --out %s\n", script.string().c_str(),
              trace.c_str(), image.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust path tracking: closed-loop double lane change runs"};
  app.require_subcommand(1);

  std::string scenario;
  std::string mode = "arc";
  std::uint64_t seed = 0;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "one closed-loop scenario run");
  run->add_option("--scenario", scenario, "config file (defaults if omitted)");
  run->add_option("--mode", mode, "arc or lmi")
      ->check(CLI::IsMember({"arc", "lmi"}));
  run->add_option("--seed", seed, "disturbance seed");
  run->add_option("--out", out_dir, "output directory")->required();

  std::vector<std::uint64_t> tune_seeds{100, 101, 102};
  auto* tune = app.add_subcommand("tune", "Bayesian tuning of the scalings");
  tune->add_option("--scenario", scenario, "config file");
  tune->add_option("--seeds", tune_seeds, "evaluation seeds")->delimiter(',');
  tune->add_option("--out", out_dir, "output directory")->required();

  auto* identify = app.add_subcommand("identify", "RLS on an excitation run");
  identify->add_option("--scenario", scenario, "config file");
  identify->add_option("--seed", seed, "excitation seed");
  identify->add_option("--out", out_dir, "output directory")->required();

  auto* fit = app.add_subcommand("fit-gpr", "calibrate GPRs and envelopes");
  fit->add_option("--scenario", scenario, "config file");
  fit->add_option("--out", out_dir, "output directory")->required();

  std::string dir_a;
  std::string dir_b;
  auto* compare = app.add_subcommand("compare", "metric deltas of two runs");
  compare->add_option("--a", dir_a, "run directory")->required();
  compare->add_option("--b", dir_b, "run directory")->required();

  std::string trace;
  std::string image;
  auto* plot = app.add_subcommand("plot", "emit a matplotlib script");
  plot->add_option("--trace", trace, "trace CSV")->required();
  plot->add_option("--out", image, "image path for the script");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return CmdRun(scenario, mode, seed, out_dir);
    if (*tune) return CmdTune(scenario, tune_seeds, out_dir);
    if (*identify) return CmdIdentify(scenario, seed, out_dir);
    if (*fit) return CmdFitGpr(scenario, out_dir);
    if (*compare) return CmdCompare(dir_a, dir_b);
    if (*plot) return CmdPlot(trace, image);
  } catch (const robust_track::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
