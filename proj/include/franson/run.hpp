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

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "franson/config.hpp"
#include "franson/errors.hpp"
#include "franson/experiments.hpp"
#include "franson/oracle.hpp"
#include "franson/report.hpp"

namespace franson {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInvariant = 2,
  kExitIo = 3,
};

inline std::vector<ScanResult> run_scenario(const RunConfig& config) {
  const auto spec = to_scan_spec(config);
  switch (config.scenario) {
    case Scenario::kFranson: return {run_franson(spec)};
    case Scenario::kSwap: {
      auto [same, diff] = run_swap(spec);
      return {std::move(same), std::move(diff)};
    }
    case Scenario::kHom: return {run_hom(spec)};
    case Scenario::kMismatch: return {run_mismatch(spec)};
  }
  return {};
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  out.close();
  if (!out) throw std::filesystem::filesystem_error("cannot write", path, std::error_code());
}

}  // namespace detail

/// Runs the configured scan and writes one file per result and format.
/// Every row's probability total is checked before anything is written.
inline int execute(const RunConfig& config, std::ostream& log) {
  std::vector<ScanResult> results;
  try {
    validate(config);
    results = run_scenario(config);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::kConfig || e.code() == ErrorCode::kRegimeViolation
               ? kExitUsage
               : kExitInvariant;
  }
  for (const auto& r : results) {
    const double drift = max_total_drift(r);
    if (drift > 1e-4) {
      log << "error: " << r.label << " probability total drifts by " << drift
          << " (limit 1e-4); nothing written\n";
      return kExitInvariant;
    }
  }
  try {
    std::filesystem::create_directories(config.out_dir);
    for (const auto& r : results) {
      const auto base = std::filesystem::path(config.out_dir) / r.label;
      if (config.formats.count("csv")) detail::write_file(base.string() + ".csv", csv_table(r));
      if (config.formats.count("json"))
        detail::write_file(base.string() + ".json", to_json(r).dump(2) + "\n");
      if (config.formats.count("svg")) detail::write_file(base.string() + ".svg", svg_plot(r));
      log << r.label << ": " << r.rows.size() << " rows";
      if (r.visibility) log << ", visibility " << *r.visibility;
      log << "\n";
    }
  } catch (const std::filesystem::filesystem_error& e) {
    log << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

struct OracleCase {
  std::string name;
  double max_abs_diff = 0.0;
};

/// Fast path against the brute-force oracle on downscaled instances
/// (imbalance 10 tau, time step tau/8).
inline std::vector<OracleCase> oracle_comparison(std::size_t grid_points = 512) {
  PhysicalParams p;
  p.t_short = 0.0;
  p.t_long = 10.0;
  p.delta_small_t = 10.0;
  p.alpha = 0.7;
  p.beta = -0.4;
  const Numerics numerics{grid_points, 16.0 * std::numbers::pi};
  const auto grid = make_grid(p, numerics);
  const auto og = oracle::centred_grid(grid.size(), grid.dt());
  auto diff = [](const CoincidenceTable& a, const CoincidenceTable& b) {
    double d = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 4; ++k) d = std::max(d, std::abs(a.entries[i][j][k] - b.entries[i][j][k]));
    return d;
  };
  std::vector<OracleCase> out;

  const auto pair = make_pair_state(p.omega, p.bandwidth, grid);
  out.push_back({"franson", diff(franson_table(pair, p.mz_a(), p.mz_b()),
                                 oracle::brute_franson_table(p.omega, p.bandwidth, p.mz_a(),
                                                             p.mz_b(), og))});
  auto swap_case = [&](const std::string& name, PhysicalParams q, PostselectionClass cls) {
    const auto [e1, e2] = detail::swap_events(q, grid, cls);
    out.push_back({name, diff(swap_table(q, numerics, cls),
                              oracle::brute_swap_table(q.omega, q.bandwidth, q.mz_a(), q.mz_b(),
                                                       e1, e2, og))});
  };
  swap_case("swap_same", p, PostselectionClass::kSame);
  swap_case("swap_different", p, PostselectionClass::kDifferent);
  PhysicalParams m = p;
  m.delta_small_t = p.delta_t() + 1.5 * p.tau();
  swap_case("mismatch_same", m, PostselectionClass::kSame);
  return out;
}

}  // namespace franson
