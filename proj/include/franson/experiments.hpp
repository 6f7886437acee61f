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
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "franson/errors.hpp"
#include "franson/network.hpp"
#include "franson/spectral.hpp"
#include "franson/swap.hpp"
#include "franson/twophoton.hpp"

namespace franson {

enum class Scenario { kFranson, kSwap, kHom, kMismatch };

enum class SweptParameter {
  kAlpha,        // alpha
  kBeta,         // beta
  kPhaseDiff,    // alpha - beta, with beta held fixed
  kDeltaSmallT,  // click separation
  kImbalance,    // (t_long - t_short) / tau
  kDetuning,     // (click separation - imbalance) / tau
};

inline const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::kFranson: return "franson";
    case Scenario::kSwap: return "swap";
    case Scenario::kHom: return "hom";
    case Scenario::kMismatch: return "mismatch";
  }
  return "?";
}

inline const char* parameter_name(SweptParameter p) {
  switch (p) {
    case SweptParameter::kAlpha: return "alpha";
    case SweptParameter::kBeta: return "beta";
    case SweptParameter::kPhaseDiff: return "phase_diff";
    case SweptParameter::kDeltaSmallT: return "dt";
    case SweptParameter::kImbalance: return "imbalance";
    case SweptParameter::kDetuning: return "detuning";
  }
  return "?";
}

inline bool is_phase(SweptParameter p) {
  return p == SweptParameter::kAlpha || p == SweptParameter::kBeta ||
         p == SweptParameter::kPhaseDiff;
}

/// Physical settings in dimensionless units (bandwidth 1 gives tau = 1).
struct PhysicalParams {
  double omega = 10.0;
  double bandwidth = 1.0;
  double t_short = 5.0;
  double t_long = 35.0;
  double alpha = 0.0;
  double beta = 0.0;
  double delta_small_t = 30.0;

  double tau() const { return 1.0 / bandwidth; }
  double delta_t() const { return t_long - t_short; }
  MachZehnderParams mz_a() const { return {t_short, t_long, alpha}; }
  MachZehnderParams mz_b() const { return {t_short, t_long, beta}; }

  friend bool operator==(const PhysicalParams&, const PhysicalParams&) = default;
};

struct Numerics {
  std::size_t grid_points = 16384;
  double span_factor = 8.0 * std::numbers::pi;  // span = span_factor * bandwidth

  friend bool operator==(const Numerics&, const Numerics&) = default;
};

inline FrequencyGrid make_grid(const PhysicalParams& p, const Numerics& n) {
  return FrequencyGrid(p.omega, n.span_factor * p.bandwidth, n.grid_points);
}

struct ScanSpec {
  Scenario scenario = Scenario::kFranson;
  SweptParameter swept = SweptParameter::kAlpha;
  std::vector<double> values;
  PhysicalParams fixed;
  Numerics numerics;
  FringeEntry fringe;
  PostselectionClass mismatch_class = PostselectionClass::kSame;
};

struct RegimeMetadata {
  double delta_t_over_tau = 0.0;
  double time_step = 0.0;
  double time_window = 0.0;
};

struct ScanResult {
  ScanSpec spec;
  std::string label;
  std::vector<CoincidenceTable> rows;
  std::optional<double> visibility;
  RegimeMetadata regime;
};

inline PhysicalParams with_swept(PhysicalParams p, SweptParameter swept, double value) {
  switch (swept) {
    case SweptParameter::kAlpha: p.alpha = value; break;
    case SweptParameter::kBeta: p.beta = value; break;
    case SweptParameter::kPhaseDiff: p.alpha = p.beta + value; break;
    case SweptParameter::kDeltaSmallT: p.delta_small_t = value; break;
    case SweptParameter::kImbalance: p.t_long = p.t_short + value * p.tau(); break;
    case SweptParameter::kDetuning: p.delta_small_t = p.delta_t() + value * p.tau(); break;
  }
  return p;
}

/// (max - min) / (max + min) of one table entry across the rows.
inline double fringe_visibility(const std::vector<CoincidenceTable>& rows,
                                const FringeEntry& entry) {
  if (rows.size() < 8) {
    throw Error(ErrorCode::kInvalidArgument, "visibility needs at least 8 swept values");
  }
  double lo = rows.front().at(entry), hi = lo;
  for (const auto& r : rows) {
    lo = std::min(lo, r.at(entry));
    hi = std::max(hi, r.at(entry));
  }
  if (hi + lo <= 0.0) {
    throw Error(ErrorCode::kUndefinedVisibility, "fringe entry is zero for every swept value");
  }
  return std::clamp((hi - lo) / (hi + lo), 0.0, 1.0);
}

/// True when the values sample at least one full 2*pi period at uniform
/// spacing (the endpoint itself may be excluded).
inline bool covers_period(const std::vector<double>& values) {
  if (values.size() < 2) return false;
  const double range = std::abs(values.back() - values.front());
  const double n = static_cast<double>(values.size());
  return range * n / (n - 1.0) >= kTwoPi * (1.0 - 1e-9);
}

namespace detail {

/// Runs fn(0..count-1) on a small worker pool; results are written by index
/// so the output order never depends on scheduling.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
}

inline void check_values(const ScanSpec& spec) {
  if (spec.values.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "scan has no swept values");
  }
  const bool up = spec.values.size() < 2 || spec.values[1] > spec.values[0];
  for (std::size_t i = 1; i < spec.values.size(); ++i) {
    if ((up && !(spec.values[i] > spec.values[i - 1])) ||
        (!up && !(spec.values[i] < spec.values[i - 1]))) {
      throw Error(ErrorCode::kInvalidArgument, "swept values must be strictly monotone");
    }
  }
}

inline void require_imbalance(const PhysicalParams& p, Scenario s) {
  if (p.delta_t() < 10.0 * p.tau()) {
    std::ostringstream msg;
    msg << "Δt=" << p.delta_t() / p.tau() << "τ violates Δt ≥ 10τ for scenario "
        << scenario_name(s);
    throw Error(ErrorCode::kRegimeViolation, msg.str());
  }
}

/// First click time that centres the whole output pulse train in the window,
/// rounded to the time grid.
inline double centred_click_time(const PhysicalParams& p, const FrequencyGrid& grid) {
  const double t = -0.5 * (p.t_short + std::abs(p.delta_small_t) + p.t_long);
  return std::round(t / grid.dt()) * grid.dt();
}

inline std::pair<DetectionEvent, DetectionEvent> swap_events(const PhysicalParams& p,
                                                             const FrequencyGrid& grid,
                                                             PostselectionClass cls) {
  const double t1 = centred_click_time(p, grid);
  const Detector second =
      cls == PostselectionClass::kSame ? Detector::kC : Detector::kCPrime;
  return {DetectionEvent{Detector::kC, t1},
          DetectionEvent{second, t1 + std::abs(p.delta_small_t)}};
}

inline RegimeMetadata regime_of(const ScanSpec& spec) {
  const auto grid = make_grid(spec.fixed, spec.numerics);
  return {spec.fixed.delta_t() / spec.fixed.tau(), grid.dt(), grid.time_window()};
}

inline std::optional<double> phase_visibility(const ScanSpec& spec,
                                              const std::vector<CoincidenceTable>& rows) {
  if (!is_phase(spec.swept) || rows.size() < 8 || !covers_period(spec.values)) {
    return std::nullopt;
  }
  return fringe_visibility(rows, spec.fringe);
}

}  // namespace detail

inline CoincidenceTable swap_table(const PhysicalParams& p, const Numerics& numerics,
                                   PostselectionClass cls) {
  const auto grid = make_grid(p, numerics);
  const auto pair = make_pair_state(p.omega, p.bandwidth, grid);
  const auto [e1, e2] = detail::swap_events(p, grid, cls);
  return swapped_fringe_probabilities(pair, pair, p.mz_a(), p.mz_b(), e1, e2);
}

inline ScanResult run_franson(const ScanSpec& spec) {
  if (spec.scenario != Scenario::kFranson) {
    throw Error(ErrorCode::kInvalidArgument, "run_franson needs a franson scan");
  }
  detail::check_values(spec);
  for (double v : spec.values)
    detail::require_imbalance(with_swept(spec.fixed, spec.swept, v), spec.scenario);
  const auto grid = make_grid(spec.fixed, spec.numerics);
  const auto pair = make_pair_state(spec.fixed.omega, spec.fixed.bandwidth, grid);

  ScanResult result{spec, "franson", std::vector<CoincidenceTable>(spec.values.size()),
                    std::nullopt, detail::regime_of(spec)};
  detail::parallel_for(spec.values.size(), [&](std::size_t r) {
    const auto p = with_swept(spec.fixed, spec.swept, spec.values[r]);
    result.rows[r] = franson_table(pair, p.mz_a(), p.mz_b());
  });
  result.visibility = detail::phase_visibility(spec, result.rows);
  return result;
}

/// Swapped fringes for both post-selection classes: {SAME, DIFFERENT}.
inline std::pair<ScanResult, ScanResult> run_swap(const ScanSpec& spec) {
  if (spec.scenario != Scenario::kSwap) {
    throw Error(ErrorCode::kInvalidArgument, "run_swap needs a swap scan");
  }
  detail::check_values(spec);
  for (double v : spec.values) {
    const auto p = with_swept(spec.fixed, spec.swept, v);
    detail::require_imbalance(p, spec.scenario);
    swap_layout(p.delta_small_t, p.delta_t(), p.tau()).validate();
  }
  const std::size_t n = spec.values.size();
  ScanResult same{spec, "swap_same", std::vector<CoincidenceTable>(n), std::nullopt,
                  detail::regime_of(spec)};
  ScanResult diff{spec, "swap_different", std::vector<CoincidenceTable>(n), std::nullopt,
                  detail::regime_of(spec)};
  detail::parallel_for(2 * n, [&](std::size_t k) {
    const std::size_t r = k / 2;
    const auto p = with_swept(spec.fixed, spec.swept, spec.values[r]);
    if (k % 2 == 0) {
      same.rows[r] = swap_table(p, spec.numerics, PostselectionClass::kSame);
    } else {
      diff.rows[r] = swap_table(p, spec.numerics, PostselectionClass::kDifferent);
    }
  });
  same.visibility = detail::phase_visibility(spec, same.rows);
  diff.visibility = detail::phase_visibility(spec, diff.rows);
  return {std::move(same), std::move(diff)};
}

/// Click-pattern fractions versus click separation. Row entries: (i, j) =
/// (detector of the earlier click, detector of the later click), all in the
/// simultaneous slot; the cross-detector probability is P_01 + P_10.
inline ScanResult run_hom(const ScanSpec& spec) {
  if (spec.scenario != Scenario::kHom) {
    throw Error(ErrorCode::kInvalidArgument, "run_hom needs a hom scan");
  }
  detail::check_values(spec);
  const auto grid = make_grid(spec.fixed, spec.numerics);
  const auto pair = make_pair_state(spec.fixed.omega, spec.fixed.bandwidth, grid);
  const auto four = beam_split(pair, pair);
  ScanResult result{spec, "hom", std::vector<CoincidenceTable>(spec.values.size()),
                    std::nullopt, detail::regime_of(spec)};
  detail::parallel_for(spec.values.size(), [&](std::size_t r) {
    const auto p = with_swept(spec.fixed, spec.swept, spec.values[r]);
    const auto w = hom_click_fractions(four, p.delta_small_t);
    CoincidenceTable t;
    t.bin_width = 6.0 * p.tau();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) t.entries[i][j][static_cast<int>(Bin::kSimultaneous)] = w[i][j];
    result.rows[r] = t;
  });
  if (result.rows.size() >= 8) {
    // Dip contrast of the cross-detector probability.
    double lo = 1.0, hi = 0.0;
    for (const auto& t : result.rows) {
      const double x = t.at(0, 1, Bin::kSimultaneous) + t.at(1, 0, Bin::kSimultaneous);
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    if (hi + lo > 0.0) result.visibility = (hi - lo) / (hi + lo);
  }
  return result;
}

/// Swapped-fringe visibility versus click-separation detuning. Each row holds
/// the table at the fixed phases and, in `visibility`, the contrast of the
/// fringe entry over `phase_points` values of alpha in [0, 2 pi).
inline ScanResult run_mismatch(const ScanSpec& spec, std::size_t phase_points = 16) {
  if (spec.scenario != Scenario::kMismatch) {
    throw Error(ErrorCode::kInvalidArgument, "run_mismatch needs a mismatch scan");
  }
  detail::check_values(spec);
  for (double v : spec.values) {
    const auto p = with_swept(spec.fixed, spec.swept, v);
    detail::require_imbalance(p, spec.scenario);
    swap_layout(p.delta_small_t, p.delta_t(), p.tau()).validate();
  }
  const std::size_t n = spec.values.size();
  ScanResult result{spec, "mismatch", std::vector<CoincidenceTable>(n), std::nullopt,
                    detail::regime_of(spec)};
  // One job per (row, phase point); slot 0 of each row is the fixed-phase table.
  const std::size_t per_row = phase_points + 1;
  std::vector<CoincidenceTable> work(n * per_row);
  detail::parallel_for(n * per_row, [&](std::size_t k) {
    auto p = with_swept(spec.fixed, spec.swept, spec.values[k / per_row]);
    const std::size_t slot = k % per_row;
    if (slot > 0) p.alpha = kTwoPi * static_cast<double>(slot - 1) / static_cast<double>(phase_points);
    work[k] = swap_table(p, spec.numerics, spec.mismatch_class);
  });
  for (std::size_t r = 0; r < n; ++r) {
    result.rows[r] = work[r * per_row];
    std::vector<CoincidenceTable> fringe(work.begin() + static_cast<long>(r * per_row + 1),
                                         work.begin() + static_cast<long>((r + 1) * per_row));
    result.rows[r].visibility = fringe_visibility(fringe, spec.fringe);
  }
  return result;
}

/// Evenly spaced values; `endpoint` false drops `stop` (periodic scans).
inline std::vector<double> linspace(double start, double stop, std::size_t steps,
                                    bool endpoint = true) {
  std::vector<double> v(steps);
  if (steps == 1) {
    v[0] = start;
    return v;
  }
  const double div = endpoint ? static_cast<double>(steps - 1) : static_cast<double>(steps);
  for (std::size_t i = 0; i < steps; ++i)
    v[i] = start + (stop - start) * static_cast<double>(i) / div;
  return v;
}

}  // namespace franson
