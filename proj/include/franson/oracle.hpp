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

// Brute-force reference path. Shares no transform code with the library:
// packets come from the closed-form Gaussian, interferometers are applied as
// shifted copies on a dense (t_a, t_b) matrix, probabilities are plain sums.

#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "franson/errors.hpp"
#include "franson/network.hpp"
#include "franson/swap.hpp"
#include "franson/twophoton.hpp"

namespace franson::oracle {

struct TimeGrid {
  double t0 = 0.0;
  double dt = 1.0;
  std::size_t n = 0;

  double time(std::size_t m) const { return t0 + static_cast<double>(m) * dt; }
};

/// n points of step dt with t = 0 at index n/2.
inline TimeGrid centred_grid(std::size_t n, double dt) {
  return {-static_cast<double>(n / 2) * dt, dt, n};
}

struct DenseTwoPhotonAmplitude {
  TimeGrid grid;
  std::vector<cplx> samples;  // row-major, row = t_a

  cplx& operator()(std::size_t r, std::size_t c) { return samples[r * grid.n + c]; }
  cplx operator()(std::size_t r, std::size_t c) const { return samples[r * grid.n + c]; }

  double norm2() const {
    double s = 0.0;
    for (const auto& v : samples) s += std::norm(v);
    return s * grid.dt * grid.dt;
  }
};

inline void check_resolution(const TimeGrid& grid, double tau) {
  if (grid.dt > tau / 8.0) {
    std::ostringstream msg;
    msg << "oracle grid step " << grid.dt << " exceeds tau/8 = " << tau / 8.0;
    throw Error(ErrorCode::kGridTooCoarse, msg.str());
  }
}

/// Unit-norm packet emitted at `center`: the closed-form transform of the
/// Gaussian spectrum, sqrt2 (2 pi)^(-1/4) bw^(1/2) e^{-i W x} e^{-bw^2 x^2}.
inline cplx gaussian_packet(double omega, double bandwidth, double center, double t) {
  const double x = t - center;
  const double amp = std::sqrt(2.0) * std::pow(kTwoPi, -0.25) * std::sqrt(bandwidth);
  return amp * std::exp(-bandwidth * bandwidth * x * x) * std::polar(1.0, -omega * x);
}

/// psi(t_a, t_b) = sum_k coeff_k g_k(t_a) h_k(t_b), pointwise.
inline DenseTwoPhotonAmplitude densify(const TwoPhotonState& state, const TimeGrid& grid,
                                       double tau) {
  check_resolution(grid, tau);
  DenseTwoPhotonAmplitude out{grid, std::vector<cplx>(grid.n * grid.n)};
  for (const auto& term : state.terms) {
    for (const auto* env : {&term.env_a, &term.env_b}) {
      if (env->size() != grid.n || std::abs(env->t0 - grid.t0) > 1e-12 ||
          std::abs(env->dt - grid.dt) > 1e-15) {
        throw Error(ErrorCode::kGridMismatch, "state envelope is not on the oracle grid");
      }
    }
    for (std::size_t r = 0; r < grid.n; ++r)
      for (std::size_t c = 0; c < grid.n; ++c)
        out(r, c) += term.coeff * term.env_a.samples[r] * term.env_b.samples[c];
  }
  return out;
}

/// Truncated CW pair amplitude e^{-2 i W t_b} g(t_a - t_b): every row (fixed
/// t_a) carries unit norm away from the window edges.
inline DenseTwoPhotonAmplitude dense_pair_strip(double omega, double bandwidth,
                                                const TimeGrid& grid) {
  check_resolution(grid, 1.0 / bandwidth);
  DenseTwoPhotonAmplitude out{grid, std::vector<cplx>(grid.n * grid.n)};
  for (std::size_t r = 0; r < grid.n; ++r) {
    for (std::size_t c = 0; c < grid.n; ++c) {
      const double ta = grid.time(r), tb = grid.time(c);
      out(r, c) = std::polar(1.0, -2.0 * omega * tb) * gaussian_packet(omega, bandwidth, tb, ta);
    }
  }
  return out;
}

/// Post-selected (a, a') amplitude after clicks e1, e2 behind the beam
/// splitter, built directly: b+ = (c+ + i c'+)/sqrt2, b'+ = (i c+ + c'+)/sqrt2.
/// Not normalised.
inline DenseTwoPhotonAmplitude dense_conditional(double omega, double bandwidth,
                                                 const DetectionEvent& e1,
                                                 const DetectionEvent& e2,
                                                 const TimeGrid& grid) {
  check_resolution(grid, 1.0 / bandwidth);
  const double r = 1.0 / std::sqrt(2.0);
  auto from_b = [&](Detector d) { return d == Detector::kC ? cplx(r, 0) : cplx(0, r); };
  auto from_bp = [&](Detector d) { return d == Detector::kC ? cplx(0, r) : cplx(r, 0); };
  const cplx pump = std::polar(1.0, -2.0 * omega * (e1.time + e2.time));
  const cplx first = from_b(e1.detector) * from_bp(e2.detector) * pump;   // b -> e1, b' -> e2
  const cplx second = from_b(e2.detector) * from_bp(e1.detector) * pump;  // b -> e2, b' -> e1
  DenseTwoPhotonAmplitude out{grid, std::vector<cplx>(grid.n * grid.n)};
  for (std::size_t ra = 0; ra < grid.n; ++ra) {
    const double ta = grid.time(ra);
    const cplx a1 = gaussian_packet(omega, bandwidth, e1.time, ta);
    const cplx a2 = gaussian_packet(omega, bandwidth, e2.time, ta);
    for (std::size_t rb = 0; rb < grid.n; ++rb) {
      const double tb = grid.time(rb);
      out(ra, rb) = first * a1 * gaussian_packet(omega, bandwidth, e2.time, tb) +
                    second * a2 * gaussian_packet(omega, bandwidth, e1.time, tb);
    }
  }
  return out;
}

namespace detail {

inline long grid_shift(double delay, double dt) {
  const double s = std::round(delay / dt);
  if (std::abs(s * dt - delay) > 1e-9 * std::max(1.0, std::abs(delay))) {
    std::ostringstream msg;
    msg << "delay " << delay << " is not a multiple of the oracle step " << dt;
    throw Error(ErrorCode::kDelayOffGrid, msg.str());
  }
  return static_cast<long>(s);
}

struct ShiftedCopy {
  long shift;
  cplx weight;
};

inline std::vector<ShiftedCopy> mz_copies(const MachZehnderParams& mz, int port, double dt) {
  const cplx ph = std::polar(1.0, mz.phase);
  const long s = grid_shift(mz.t_short, dt);
  const long l = grid_shift(mz.t_long, dt);
  if (port == 0) return {{s, 0.5}, {l, -0.5 * ph}};
  return {{s, cplx(0, 0.5)}, {l, cplx(0, 0.5) * ph}};
}

}  // namespace detail

/// Applies MZ_A (port i) along t_a and MZ_B (port j) along t_b by explicit
/// shifted-copy summation, then squares. With `allow_truncation` false any
/// amplitude pushed past the window edge is an error.
inline Density2D brute_coincidence(const DenseTwoPhotonAmplitude& dense,
                                   const MachZehnderParams& mz_a,
                                   const MachZehnderParams& mz_b, int i, int j,
                                   bool allow_truncation = false) {
  check_port(i);
  check_port(j);
  const std::size_t n = dense.grid.n;
  const long nl = static_cast<long>(n);
  const auto rows = detail::mz_copies(mz_a, i, dense.grid.dt);
  const auto cols = detail::mz_copies(mz_b, j, dense.grid.dt);

  if (!allow_truncation) {
    const double total = dense.norm2();
    double lost = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        bool out = false;
        for (const auto& x : rows) out = out || static_cast<long>(r) + x.shift >= nl ||
                                         static_cast<long>(r) + x.shift < 0;
        for (const auto& y : cols) out = out || static_cast<long>(c) + y.shift >= nl ||
                                         static_cast<long>(c) + y.shift < 0;
        if (out) lost += std::norm(dense(r, c));
      }
    }
    if (lost * dense.grid.dt * dense.grid.dt > 1e-12 * std::max(total, 1e-300)) {
      throw Error(ErrorCode::kWindowOverflow, "delayed copies leave the oracle window");
    }
  }

  std::vector<cplx> tmp(n * n), out(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (const auto& x : rows) {
      const long src = static_cast<long>(r) - x.shift;
      if (src < 0 || src >= nl) continue;
      for (std::size_t c = 0; c < n; ++c) tmp[r * n + c] += x.weight * dense(src, c);
    }
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      for (const auto& y : cols) {
        const long src = static_cast<long>(c) - y.shift;
        if (src < 0 || src >= nl) continue;
        out[r * n + c] += y.weight * tmp[r * n + src];
      }
    }
  }
  Density2D d{dense.grid.t0, dense.grid.dt, n, std::vector<double>(n * n)};
  for (std::size_t k = 0; k < n * n; ++k) d.values[k] = std::norm(out[k]);
  return d;
}

/// Sums density * dt^2 into the layout by t' - t.
inline BinProbabilities brute_relative_bins(const Density2D& density, const BinLayout& layout) {
  BinProbabilities out{};
  const double w = density.dt * density.dt;
  for (std::size_t r = 0; r < density.n; ++r) {
    for (std::size_t c = 0; c < density.n; ++c) {
      const double rel = (static_cast<double>(c) - static_cast<double>(r)) * density.dt;
      out[static_cast<int>(layout.classify(rel))] += density(r, c) * w;
    }
  }
  return out;
}

/// Franson table from the CW strip: the row through t_a = 0 (grid centre)
/// integrated over t_b gives the per-pair probabilities.
inline CoincidenceTable brute_franson_table(double omega, double bandwidth,
                                            const MachZehnderParams& mz_a,
                                            const MachZehnderParams& mz_b, const TimeGrid& grid) {
  const double tau = 1.0 / bandwidth;
  const auto strip = dense_pair_strip(omega, bandwidth, grid);
  const auto layout = franson_layout(mz_a.imbalance(), tau);
  const std::size_t r0 = grid.n / 2;
  CoincidenceTable table;
  table.bin_width = 6.0 * tau;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const auto d = brute_coincidence(strip, mz_a, mz_b, i, j, /*allow_truncation=*/true);
      BinProbabilities p{};
      for (std::size_t c = 0; c < grid.n; ++c) {
        const double rel = (static_cast<double>(c) - static_cast<double>(r0)) * grid.dt;
        p[static_cast<int>(layout.classify(rel))] += d(r0, c) * grid.dt;
      }
      table.entries[i][j] = p;
    }
  }
  return table;
}

/// Swapped-fringe table for clicks e1, e2, normalised to the conditional
/// state.
inline CoincidenceTable brute_swap_table(double omega, double bandwidth,
                                         const MachZehnderParams& mz_a,
                                         const MachZehnderParams& mz_b,
                                         const DetectionEvent& e1, const DetectionEvent& e2,
                                         const TimeGrid& grid) {
  const double tau = 1.0 / bandwidth;
  auto dense = dense_conditional(omega, bandwidth, e1, e2, grid);
  const double n2 = dense.norm2();
  if (!(n2 > 0.0)) throw Error(ErrorCode::kNegativeNorm, "post-selected event has zero weight");
  for (auto& v : dense.samples) v /= std::sqrt(n2);
  const auto layout = swap_layout(e2.time - e1.time, mz_a.imbalance(), tau);
  layout.validate();
  CoincidenceTable table;
  table.bin_width = 6.0 * tau;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      table.entries[i][j] = brute_relative_bins(brute_coincidence(dense, mz_a, mz_b, i, j), layout);
  return table;
}

/// Cross-detector click fraction computed from dense conditional norms.
inline double brute_hom_cross(double omega, double bandwidth, double delta_t,
                              const TimeGrid& grid) {
  const double t1 = -0.5 * delta_t, t2 = t1 + delta_t;
  double cross = 0.0, total = 0.0;
  for (Detector d1 : {Detector::kC, Detector::kCPrime}) {
    for (Detector d2 : {Detector::kC, Detector::kCPrime}) {
      const double w =
          dense_conditional(omega, bandwidth, {d1, t1}, {d2, t2}, grid).norm2();
      total += w;
      if (d1 != d2) cross += w;
    }
  }
  return cross / total;
}

}  // namespace franson::oracle
