// Copyright 2026 The franson-swap Authors
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

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "franson/errors.hpp"
#include "franson/experiments.hpp"

namespace franson {

/// Everything a CLI run needs. Angles in radians; times in the same unit as
/// 1/bandwidth.
struct RunConfig {
  Scenario scenario = Scenario::kFranson;
  PhysicalParams physics;
  bool delta_small_t_equal = false;  // click separation follows t_long - t_short
  SweptParameter sweep = SweptParameter::kAlpha;
  double sweep_from = 0.0;
  double sweep_to = kTwoPi;
  std::size_t sweep_steps = 64;
  Numerics numerics;
  PostselectionClass postselection = PostselectionClass::kSame;
  std::string out_dir = "out";
  std::set<std::string> formats{"csv", "json", "svg"};

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

using KeyValues = std::map<std::string, std::string>;

inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "scenario",   "omega",       "bandwidth",    "t_short",     "t_long",
      "alpha",      "beta",        "delta_small_t", "sweep",      "sweep_from",
      "sweep_to",   "sweep_steps", "grid_points",  "span_factor", "postselection",
      "out_dir",    "formats"};
  return keys;
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] inline void config_error(const std::string& key, const std::string& msg) {
  throw Error(ErrorCode::kConfig, "config key '" + key + "': " + msg);
}

inline double parse_plain_number(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* b = text.data();
  const char* e = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e || !std::isfinite(v)) {
    config_error(key, "'" + text + "' is not a number");
  }
  return v;
}

/// "3.5", "5tau" (times tau), "2pi" (times pi), "tau", "pi".
inline double parse_quantity(const std::string& key, const std::string& raw, double tau) {
  const std::string text = trim(raw);
  for (const auto& [suffix, unit] :
       {std::pair<std::string, double>{"tau", tau}, {"pi", std::numbers::pi}}) {
    if (text.size() >= suffix.size() &&
        text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0) {
      const std::string head = trim(text.substr(0, text.size() - suffix.size()));
      return (head.empty() ? 1.0 : parse_plain_number(key, head)) * unit;
    }
  }
  return parse_plain_number(key, text);
}

inline std::size_t parse_count(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    config_error(key, "'" + text + "' is not a non-negative integer");
  }
  return v;
}

/// Shortest decimal that reads back to the same double.
inline std::string format_exact(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace detail

inline Scenario parse_scenario(const std::string& s) {
  for (Scenario x : {Scenario::kFranson, Scenario::kSwap, Scenario::kHom, Scenario::kMismatch})
    if (s == scenario_name(x)) return x;
  detail::config_error("scenario", "unknown scenario '" + s + "'");
}

inline SweptParameter parse_sweep(const std::string& s) {
  for (SweptParameter x : {SweptParameter::kAlpha, SweptParameter::kBeta,
                           SweptParameter::kPhaseDiff, SweptParameter::kDeltaSmallT,
                           SweptParameter::kImbalance, SweptParameter::kDetuning})
    if (s == parameter_name(x)) return x;
  detail::config_error("sweep", "unknown swept parameter '" + s + "'");
}

/// Per-scenario defaults: the desk-scale regime bandwidth 1, Omega 10,
/// imbalance 30.
inline RunConfig default_config(Scenario scenario) {
  RunConfig c;
  c.scenario = scenario;
  switch (scenario) {
    case Scenario::kFranson:
      c.sweep = SweptParameter::kAlpha;
      c.sweep_from = 0.0;
      c.sweep_to = kTwoPi;
      c.sweep_steps = 64;
      break;
    case Scenario::kSwap:
      c.delta_small_t_equal = true;
      c.sweep = SweptParameter::kPhaseDiff;
      c.sweep_from = 0.0;
      c.sweep_to = kTwoPi;
      c.sweep_steps = 64;
      break;
    case Scenario::kHom:
      c.sweep = SweptParameter::kDeltaSmallT;
      c.sweep_from = 0.0;
      c.sweep_to = 5.0;
      c.sweep_steps = 26;
      break;
    case Scenario::kMismatch:
      c.sweep = SweptParameter::kDetuning;
      c.sweep_from = 0.0;
      c.sweep_to = 20.0;
      c.sweep_steps = 11;
      break;
  }
  if (c.delta_small_t_equal) c.physics.delta_small_t = c.physics.delta_t();
  return c;
}

/// Parses `key = value` lines; '#' starts a comment. Errors carry the line.
inline KeyValues parse_key_values(const std::string& text, const std::string& origin = "config") {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kConfig, origin + ":" + std::to_string(lineno) +
                                          ": expected 'key = value', got '" + line + "'");
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) {
      throw Error(ErrorCode::kConfig, origin + ":" + std::to_string(lineno) + ": empty key");
    }
    if (kv.count(key)) {
      throw Error(ErrorCode::kConfig,
                  origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    kv[key] = value;
  }
  return kv;
}

/// Applies key/value overrides on top of `base`. Unknown keys are rejected.
/// Quantities may carry a "tau" or "pi" suffix; tau uses the bandwidth after
/// this update.
inline RunConfig apply_key_values(RunConfig base, const KeyValues& kv) {
  const auto& known = config_keys();
  for (const auto& [key, value] : kv) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw Error(ErrorCode::kConfig, "unknown config key '" + key + "'");
    }
  }
  using detail::parse_quantity;
  auto has = [&](const char* k) { return kv.count(k) > 0; };
  if (has("scenario")) base.scenario = parse_scenario(detail::trim(kv.at("scenario")));
  if (has("bandwidth")) base.physics.bandwidth = detail::parse_plain_number("bandwidth", detail::trim(kv.at("bandwidth")));
  const double tau = base.physics.tau();
  auto quantity = [&](const char* k, double& target) {
    if (has(k)) target = parse_quantity(k, kv.at(k), tau);
  };
  quantity("omega", base.physics.omega);
  quantity("t_short", base.physics.t_short);
  quantity("t_long", base.physics.t_long);
  quantity("alpha", base.physics.alpha);
  quantity("beta", base.physics.beta);
  if (has("delta_small_t")) {
    const std::string v = detail::trim(kv.at("delta_small_t"));
    base.delta_small_t_equal = (v == "equal");
    if (!base.delta_small_t_equal) base.physics.delta_small_t = parse_quantity("delta_small_t", v, tau);
  }
  if (base.delta_small_t_equal) base.physics.delta_small_t = base.physics.delta_t();
  if (has("sweep")) base.sweep = parse_sweep(detail::trim(kv.at("sweep")));
  quantity("sweep_from", base.sweep_from);
  quantity("sweep_to", base.sweep_to);
  if (has("sweep_steps")) base.sweep_steps = detail::parse_count("sweep_steps", kv.at("sweep_steps"));
  if (has("grid_points")) base.numerics.grid_points = detail::parse_count("grid_points", kv.at("grid_points"));
  quantity("span_factor", base.numerics.span_factor);
  if (has("postselection")) {
    const std::string v = detail::trim(kv.at("postselection"));
    if (v == "same") base.postselection = PostselectionClass::kSame;
    else if (v == "different") base.postselection = PostselectionClass::kDifferent;
    else detail::config_error("postselection", "expected 'same' or 'different', got '" + v + "'");
  }
  if (has("out_dir")) base.out_dir = detail::trim(kv.at("out_dir"));
  if (has("formats")) {
    base.formats.clear();
    std::istringstream in(kv.at("formats"));
    std::string f;
    while (std::getline(in, f, ',')) {
      f = detail::trim(f);
      if (f != "csv" && f != "json" && f != "svg") {
        detail::config_error("formats", "unknown format '" + f + "' (csv, json, svg)");
      }
      base.formats.insert(f);
    }
    if (base.formats.empty()) detail::config_error("formats", "no output format selected");
  }
  return base;
}

/// Serialises every field; parse_key_values + apply_key_values on the result
/// reproduces the config exactly.
inline std::string to_config_text(const RunConfig& c) {
  using detail::format_exact;
  std::ostringstream out;
  out << "scenario = " << scenario_name(c.scenario) << "\n"
      << "omega = " << format_exact(c.physics.omega) << "\n"
      << "bandwidth = " << format_exact(c.physics.bandwidth) << "\n"
      << "t_short = " << format_exact(c.physics.t_short) << "\n"
      << "t_long = " << format_exact(c.physics.t_long) << "\n"
      << "alpha = " << format_exact(c.physics.alpha) << "\n"
      << "beta = " << format_exact(c.physics.beta) << "\n"
      << "delta_small_t = "
      << (c.delta_small_t_equal ? std::string("equal") : format_exact(c.physics.delta_small_t))
      << "\n"
      << "sweep = " << parameter_name(c.sweep) << "\n"
      << "sweep_from = " << format_exact(c.sweep_from) << "\n"
      << "sweep_to = " << format_exact(c.sweep_to) << "\n"
      << "sweep_steps = " << c.sweep_steps << "\n"
      << "grid_points = " << c.numerics.grid_points << "\n"
      << "span_factor = " << format_exact(c.numerics.span_factor) << "\n"
      << "postselection = " << class_name(c.postselection) << "\n"
      << "out_dir = " << c.out_dir << "\n"
      << "formats = ";
  bool first = true;
  for (const auto& f : c.formats) {
    out << (first ? "" : ",") << f;
    first = false;
  }
  out << "\n";
  return out.str();
}

inline std::vector<double> sweep_values(const RunConfig& c) {
  // Phase scans sample one period without repeating the endpoint.
  const bool periodic = is_phase(c.sweep);
  return linspace(c.sweep_from, c.sweep_to, c.sweep_steps, !periodic);
}

inline ScanSpec to_scan_spec(const RunConfig& c) {
  ScanSpec spec;
  spec.scenario = c.scenario;
  spec.swept = c.sweep;
  spec.values = sweep_values(c);
  spec.fixed = c.physics;
  spec.numerics = c.numerics;
  spec.mismatch_class = c.postselection;
  return spec;
}

/// All regime and sanity checks, with messages that name the violated rule.
inline void validate(const RunConfig& c) {
  const auto& p = c.physics;
  if (!(p.bandwidth > 0.0)) detail::config_error("bandwidth", "must be positive");
  if (!(p.t_long > p.t_short)) detail::config_error("t_long", "must exceed t_short");
  if (c.sweep_steps < 1) detail::config_error("sweep_steps", "must be at least 1");
  if (c.sweep_steps > 1 && !(c.sweep_to != c.sweep_from)) {
    detail::config_error("sweep_to", "must differ from sweep_from");
  }
  if (c.numerics.span_factor < 12.0) {
    detail::config_error("span_factor", "must be at least 12 (grid span >= 12 bandwidth)");
  }
  (void)make_grid(p, c.numerics);  // power-of-two check
  if (c.formats.empty()) detail::config_error("formats", "no output format selected");

  const auto values = sweep_values(c);
  for (double v : values) {
    const auto q = with_swept(p, c.sweep, v);
    if (c.scenario != Scenario::kHom) detail::require_imbalance(q, c.scenario);
    if (c.scenario == Scenario::kSwap || c.scenario == Scenario::kMismatch) {
      swap_layout(q.delta_small_t, q.delta_t(), q.tau()).validate();
    }
  }
  const bool allowed = [&] {
    switch (c.scenario) {
      case Scenario::kFranson:
        return is_phase(c.sweep) || c.sweep == SweptParameter::kImbalance;
      case Scenario::kSwap:
        return is_phase(c.sweep) || c.sweep == SweptParameter::kDeltaSmallT ||
               c.sweep == SweptParameter::kDetuning;
      case Scenario::kHom: return c.sweep == SweptParameter::kDeltaSmallT;
      case Scenario::kMismatch:
        return c.sweep == SweptParameter::kDetuning || c.sweep == SweptParameter::kDeltaSmallT;
    }
    return false;
  }();
  if (!allowed) {
    detail::config_error("sweep", std::string("'") + parameter_name(c.sweep) +
                                      "' cannot be swept in scenario " +
                                      scenario_name(c.scenario));
  }
}

}  // namespace franson
