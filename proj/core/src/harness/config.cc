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
#include "robust_track/harness/config.h"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <variant>

#include "robust_track/common/errors.h"

namespace robust_track::harness {

namespace {

using numerics::Mat;
using Slot = std::variant<double*, int*, bool*, std::uint64_t*, Mat*>;

struct Binding {
  const char* key;
  Slot slot;
};

std::vector<Binding> Bindings(Config& c) {
  plant::VehicleParams& v = c.vehicle;
  ScenarioConfig& s = c.scenario;
  return {
      {"vehicle.m", &v.m},
      {"vehicle.i_z", &v.i_z},
      {"vehicle.a", &v.a},
      {"vehicle.b", &v.b},
      {"vehicle.d", &v.d},
      {"vehicle.r_w", &v.r_w},
      {"vehicle.j_w", &v.j_w},
      {"vehicle.b_e", &v.b_e},
      {"vehicle.c_sigma", &v.c_sigma},
      {"vehicle.c_alpha", &v.c_alpha},
      {"vehicle.mu", &v.mu},
      {"vehicle.h", &v.h},
      {"vehicle.g", &v.g},
      {"vehicle.rolling_coeff", &v.rolling_coeff},
      {"scenario.v_ref", &s.v_ref},
      {"scenario.lateral_offset", &s.lateral_offset},
      {"scenario.lead_in", &s.lead_in},
      {"scenario.transition", &s.transition},
      {"scenario.hold", &s.hold},
      {"scenario.exit", &s.exit},
      {"scenario.disturbances", &s.disturbances},
      {"scenario.force_extreme", &s.force_extreme},
      {"scenario.moment_extreme", &s.moment_extreme},
      {"scenario.disturbance_hold", &s.disturbance_hold},
      {"scenario.c_sigma_offset", &s.c_sigma_offset},
      {"scenario.c_alpha_offset", &s.c_alpha_offset},
      {"scenario.steering_lag", &s.steering_lag},
      {"scenario.max_lateral_error", &s.max_lateral_error},
      {"scenario.max_beta", &s.max_beta},
      {"timing.controller_period", &c.controller_period},
      {"lqr.q_k", &c.lqr.q_k},
      {"lqr.r_k", &c.lqr.r_k},
      {"lqr.resynth_dv", &c.lqr.resynth_dv},
      {"lqr.resynth_domega", &c.lqr.resynth_domega},
      {"beta.w_beta", &c.w_beta},
      {"lmi.q", &c.lmi.q},
      {"lmi.r", &c.lmi.r},
      {"lmi.resynth_period", &c.lmi.resynth_period},
      {"lmi.resynth_theta_change", &c.lmi.resynth_theta_change},
      {"lmi.strictness_tol", &c.lmi.strictness_tol},
      {"smc.xi", &c.smc.xi},
      {"smc.eps", &c.smc.eps},
      {"smc.eta", &c.smc.eta},
      {"smc.kappa0", &c.smc.kappa0},
      {"smc.boundary_layer", &c.smc.boundary_layer},
      {"smc.moment_backoff", &c.smc_moment_backoff},
      {"bsc.k_omega", &c.bsc.k_omega},
      {"bsc.gamma0", &c.bsc.gamma0},
      {"bsc.boundary_layer", &c.bsc.boundary_layer},
      {"rls.lambda_min", &c.rls.lambda_min},
      {"rls.h", &c.rls.h},
      {"rls.sigma_eps", &c.rls.sigma_eps},
      {"rls.adaptive", &c.rls.adaptive},
      {"rls.fixed_lambda", &c.rls.fixed_lambda},
      {"rls.p0", &c.rls.p0},
      {"rls.theta_lo", &c.rls.theta_lo},
      {"rls.theta_hi", &c.rls.theta_hi},
      {"rls.n_sigma", &c.rls_n_sigma},
      {"rls.sigma_eps_auto", &c.rls_sigma_eps_auto},
      {"gpr.restarts", &c.gpr.restarts},
      {"gpr.max_iterations", &c.gpr.max_iterations},
      {"gpr.subset_cap", &c.gpr.subset_cap},
      {"gpr.seed", &c.gpr.seed},
      {"gpr.min_sigma_eps2", &c.gpr.min_sigma_eps2},
      {"calibration.duration", &c.calibration.duration},
      {"calibration.bins", &c.calibration.bins},
      {"calibration.seed", &c.calibration.seed},
      {"tune.kappa", &c.tune.kappa},
      {"tune.lo", &c.tune.lo},
      {"tune.hi", &c.tune.hi},
      {"tune.candidates", &c.tune.candidates},
      {"tune.seed_points", &c.tune.seed_points},
      {"tune.seed", &c.tune.seed},
      {"tune.literal_ucb", &c.tune.literal_ucb},
      {"tune.iterations", &c.tune_iterations},
      {"cost.w_e", &c.cost.w_e},
      {"cost.w_a", &c.cost.w_a},
      {"cost.w_phi", &c.cost.w_phi},
      {"boundary.alpha_theta", &c.boundaries.alpha_theta},
      {"boundary.alpha_i", &c.boundaries.alpha_i},
      {"boundary.alpha_e", &c.boundaries.alpha_e},
      {"baseline.stiffness_fraction", &c.baseline.stiffness_fraction},
      {"baseline.envelope_scale", &c.baseline.envelope_scale},
  };
}

std::string FormatDouble(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Formatter {
  std::string operator()(const double* p) const { return FormatDouble(*p); }
  std::string operator()(const int* p) const { return std::to_string(*p); }
  std::string operator()(const bool* p) const { return *p ? "true" : "false"; }
  std::string operator()(const std::uint64_t* p) const {
    return std::to_string(*p);
  }
  std::string operator()(const Mat* p) const {
    std::string out;
    for (Eigen::Index i = 0; i < p->rows(); ++i) {
      if (i > 0) out += ", ";
      out += FormatDouble((*p)(i, i));
    }
    return out;
  }
};

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
bool ParseNumber(std::string_view text, T& out) {
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

// Returns an error message, empty on success.
struct Parser {
  std::string_view text;

  std::string operator()(double* p) const {
    double v;
    if (!ParseNumber(text, v)) return "expected a number";
    *p = v;
    return {};
  }
  std::string operator()(int* p) const {
    int v;
    if (!ParseNumber(text, v)) return "expected an integer";
    *p = v;
    return {};
  }
  std::string operator()(bool* p) const {
    if (text == "true" || text == "1") {
      *p = true;
    } else if (text == "false" || text == "0") {
      *p = false;
    } else {
      return "expected true or false";
    }
    return {};
  }
  std::string operator()(std::uint64_t* p) const {
    std::uint64_t v;
    if (!ParseNumber(text, v)) return "expected an unsigned integer";
    *p = v;
    return {};
  }
  std::string operator()(Mat* p) const {
    std::vector<double> values;
    std::string_view rest = text;
    while (true) {
      const auto comma = rest.find(',');
      double v;
      if (!ParseNumber(Trim(rest.substr(0, comma)), v)) {
        return "expected a comma-separated list of numbers";
      }
      values.push_back(v);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (static_cast<Eigen::Index>(values.size()) != p->rows()) {
      return "expected " + std::to_string(p->rows()) + " diagonal entries";
    }
    *p = Mat::Zero(p->rows(), p->rows());
    for (std::size_t i = 0; i < values.size(); ++i) (*p)(i, i) = values[i];
    return {};
  }
};

void Require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid configuration: " + what);
}

bool PositiveDiagonal(const Mat& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (!(m(i, i) > 0.0)) return false;
  }
  return true;
}

bool NonNegativeDiagonal(const Mat& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (!(m(i, i) >= 0.0)) return false;
  }
  return true;
}

}  // namespace

void ScenarioConfig::Validate() const {
  Require(v_ref > 0.0, "scenario.v_ref must be > 0");
  Require(lateral_offset >= 0.0, "scenario.lateral_offset must be >= 0");
  Require(lead_in >= 0.0 && hold >= 0.0 && exit >= 0.0,
          "scenario section lengths must be >= 0");
  Require(transition > 0.0, "scenario.transition must be > 0");
  Require(force_extreme >= 0.0 && moment_extreme >= 0.0,
          "scenario disturbance extremes must be >= 0");
  Require(disturbance_hold > 0.0, "scenario.disturbance_hold must be > 0");
  Require(c_sigma_offset > -1.0 && c_alpha_offset > -1.0,
          "scenario stiffness offsets must be > -1");
  Require(steering_lag >= 0.0, "scenario.steering_lag must be >= 0");
  Require(max_lateral_error > 0.0 && max_beta > 0.0,
          "scenario divergence thresholds must be > 0");
}

Config::Config() {
  lqr.q_k = Eigen::Vector3d(8.0, 12.0, 6.0).asDiagonal();
  lqr.r_k = Eigen::Vector2d(1.0, 2.0).asDiagonal();
  lmi.q = Eigen::Vector2d(4.0, 10.0).asDiagonal();
  lmi.r = Eigen::Vector2d(2.0, 2.0).asDiagonal();
}

void Config::Validate() const {
  scenario.Validate();
  try {
    vehicle.Validate();
    smc.Validate();
    bsc.Validate();
    rls.Validate();
    tune.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  Require(controller_period > 0.0 && controller_period <= 0.1,
          "timing.controller_period must be in (0, 0.1]");
  Require(PositiveDiagonal(lqr.q_k) && PositiveDiagonal(lqr.r_k),
          "lqr weights must have positive diagonals");
  Require(PositiveDiagonal(lmi.q) && PositiveDiagonal(lmi.r),
          "lmi weights must have positive diagonals");
  Require(NonNegativeDiagonal(cost.w_e) && NonNegativeDiagonal(cost.w_a) &&
              NonNegativeDiagonal(cost.w_phi),
          "cost weights must have non-negative diagonals");
  Require(w_beta >= 0.0, "beta.w_beta must be >= 0");
  Require(lmi.resynth_period > 0, "lmi.resynth_period must be > 0");
  Require(lmi.strictness_tol > 0.0, "lmi.strictness_tol must be > 0");
  Require(smc_moment_backoff >= 0, "smc.moment_backoff must be >= 0");
  Require(rls_n_sigma > 0.0, "rls.n_sigma must be > 0");
  Require(gpr.restarts > 0 && gpr.max_iterations > 0 && gpr.subset_cap >= 2,
          "gpr search settings must be positive");
  Require(gpr.min_sigma_eps2 > 0.0, "gpr.min_sigma_eps2 must be > 0");
  Require(calibration.duration >= 100.0 * controller_period,
          "calibration.duration must cover at least 100 periods");
  Require(calibration.bins > 0, "calibration.bins must be > 0");
  Require(tune_iterations >= 0, "tune.iterations must be >= 0");
  Require(boundaries.alpha_theta > 0.0 && boundaries.alpha_i >= 0.0 &&
              boundaries.alpha_e >= 0.0,
          "boundary scalings must be positive");
  Require(
      baseline.stiffness_fraction > 0.0 && baseline.stiffness_fraction < 1.0,
      "baseline.stiffness_fraction must be in (0, 1)");
  Require(baseline.envelope_scale >= 0.0,
          "baseline.envelope_scale must be >= 0");
}

plant::VehicleParams Config::TruthParams() const {
  plant::VehicleParams truth = vehicle;
  truth.c_sigma *= 1.0 + scenario.c_sigma_offset;
  truth.c_alpha *= 1.0 + scenario.c_alpha_offset;
  return truth;
}

Config ParseConfig(std::string_view text, const std::string& origin) {
  Config config;
  std::vector<Binding> bindings = Bindings(config);
  std::set<std::string> seen;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text =
        nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const auto hash = line.find('#');
    line = Trim(line.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(where + "expected `key = value`");
    }
    const std::string key(Trim(line.substr(0, eq)));
    const std::string_view value = Trim(line.substr(eq + 1));
    Binding* match = nullptr;
    for (Binding& b : bindings) {
      if (key == b.key) match = &b;
    }
    if (match == nullptr)
      throw ConfigError(where + "unknown key `" + key + "`");
    if (!seen.insert(key).second) {
      throw ConfigError(where + "repeated key `" + key + "`");
    }
    const std::string err = std::visit(Parser{value}, match->slot);
    if (!err.empty()) throw ConfigError(where + key + ": " + err);
  }
  config.Validate();
  return config;
}

Config LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseConfig(buf.str(), path);
}

std::string FormatConfig(const Config& config) {
  Config copy = config;
  std::string out;
  for (const Binding& b : Bindings(copy)) {
    out += b.key;
    out += " = ";
    out += std::visit(Formatter{}, b.slot);
    out += '\n';
  }
  return out;
}

std::vector<std::string> ConfigKeys() {
  Config config;
  std::vector<std::string> keys;
  for (const Binding& b : Bindings(config)) keys.emplace_back(b.key);
  return keys;
}

std::string Fingerprint(const Config& config) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (const char ch : FormatConfig(config)) {
    hash ^= static_cast<unsigned char>(ch);
    hash *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, hash);
  return buf;
}

}  // namespace robust_track::harness
