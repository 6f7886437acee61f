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
#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "franson/errors.hpp"
#include "franson/fft.hpp"
#include "franson/network.hpp"
#include "franson/spectral.hpp"

namespace franson {

/// One down-converted pair: photon a at omega with amplitude f(omega), its
/// partner b locked to pump - omega.
struct AnticorrelatedPairState {
  SpectralAmplitude spectrum;
  double pump = 0.0;
  std::array<std::string, 2> mode_labels{"a", "b"};

  double partner_frequency(double omega) const { return pump - omega; }
  double center() const { return spectrum.grid.center(); }
  double coherence_time() const { return franson::coherence_time(spectrum); }
};

inline AnticorrelatedPairState make_pair_state(double omega_center, double bandwidth,
                                               const FrequencyGrid& grid) {
  return {gaussian_spectrum(omega_center, bandwidth, grid), 2.0 * omega_center};
}

/// coeff * g(t_a) h(t_b); the envelopes carry unit norm, the weight sits in
/// the coefficient.
struct SeparableTerm {
  cplx coeff;
  TemporalAmplitude env_a;
  TemporalAmplitude env_b;
};

struct TwoPhotonState {
  std::vector<SeparableTerm> terms;
  std::array<std::string, 2> mode_labels{"a", "a'"};
};

/// <x|y> through the Gram matrix of the separable terms.
inline cplx inner(const TwoPhotonState& x, const TwoPhotonState& y) {
  cplx s = 0.0;
  for (const auto& p : x.terms) {
    for (const auto& q : y.terms) {
      s += std::conj(p.coeff) * q.coeff * overlap(p.env_a, q.env_a) *
           overlap(p.env_b, q.env_b);
    }
  }
  return s;
}

inline double state_norm2(const TwoPhotonState& state) {
  const cplx n2 = inner(state, state);
  const double scale = std::max(1.0, std::abs(n2.real()));
  if (std::abs(n2.imag()) > 1e-10 * scale) {
    std::ostringstream msg;
    msg << "state norm^2 has imaginary residue " << n2.imag();
    throw Error(ErrorCode::kNegativeNorm, msg.str());
  }
  if (n2.real() < -1e-10) {
    std::ostringstream msg;
    msg << "state norm^2 is negative: " << n2.real();
    throw Error(ErrorCode::kNegativeNorm, msg.str());
  }
  return std::max(0.0, n2.real());
}

inline double state_norm(const TwoPhotonState& state) { return std::sqrt(state_norm2(state)); }

inline TwoPhotonState scaled(TwoPhotonState state, cplx factor) {
  for (auto& t : state.terms) t.coeff *= factor;
  return state;
}

/// Relabels the two modes (a <-> a').
inline TwoPhotonState exchanged(TwoPhotonState state) {
  for (auto& t : state.terms) std::swap(t.env_a, t.env_b);
  return state;
}

inline double fidelity(const TwoPhotonState& x, const TwoPhotonState& y) {
  return std::norm(inner(x, y)) / (state_norm2(x) * state_norm2(y));
}

// ---------------------------------------------------------------------------
// Relative-time bins

enum class Bin { kMinus = 0, kSimultaneous = 1, kPlus = 2, kOther = 3 };

inline const char* bin_name(Bin b) {
  switch (b) {
    case Bin::kMinus: return "minus";
    case Bin::kSimultaneous: return "sim";
    case Bin::kPlus: return "plus";
    case Bin::kOther: return "other";
  }
  return "?";
}

using BinProbabilities = std::array<double, 4>;

/// Windows over the detection-time difference t' - t. A bin may own several
/// windows; samples outside every window go to kOther.
struct BinLayout {
  std::vector<double> minus;
  std::vector<double> simultaneous;
  std::vector<double> plus;
  double half_width = 3.0;

  Bin classify(double rel) const {
    const double hw = half_width * (1.0 + 1e-9);
    auto hit = [&](const std::vector<double>& centers) {
      return std::any_of(centers.begin(), centers.end(),
                         [&](double c) { return std::abs(rel - c) <= hw; });
    };
    if (hit(simultaneous)) return Bin::kSimultaneous;
    if (hit(minus)) return Bin::kMinus;
    if (hit(plus)) return Bin::kPlus;
    return Bin::kOther;
  }

  /// Windows belonging to different bins must not overlap.
  void validate() const {
    const std::array<const std::vector<double>*, 3> groups{&minus, &simultaneous, &plus};
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (std::size_t h = g + 1; h < groups.size(); ++h) {
        for (double a : *groups[g]) {
          for (double b : *groups[h]) {
            if (std::abs(a - b) < 2.0 * half_width) {
              std::ostringstream msg;
              msg << "coincidence bins centred at " << a << " and " << b
                  << " overlap (window width " << 2.0 * half_width << ")";
              throw Error(ErrorCode::kOverlappingBins, msg.str());
            }
          }
        }
      }
    }
  }
};

/// Bins of width 6 tau at -delta_t, 0, +delta_t.
inline BinLayout franson_layout(double delta_t, double tau) {
  return BinLayout{{-delta_t}, {0.0}, {delta_t}, 3.0 * tau};
}

/// Integrates a density sampled at rel_m = rel0 + m*step into the layout.
inline BinProbabilities bin_density(const std::vector<double>& density, double rel0, double step,
                                    const BinLayout& layout) {
  BinProbabilities out{};
  for (std::size_t m = 0; m < density.size(); ++m) {
    const Bin b = layout.classify(rel0 + static_cast<double>(m) * step);
    out[static_cast<int>(b)] += density[m] * step;
  }
  return out;
}

/// Franson binning of a relative-time amplitude A(Delta). Requires
/// delta_t >= 10 tau so the 6-tau windows stay clean.
inline BinProbabilities bin_probabilities(const TemporalAmplitude& amplitude, double delta_t,
                                          double tau) {
  if (delta_t < 10.0 * tau) {
    std::ostringstream msg;
    msg << "Δt=" << delta_t / tau << "τ violates Δt ≥ 10τ: coincidence bins overlap";
    throw Error(ErrorCode::kOverlappingBins, msg.str());
  }
  std::vector<double> density(amplitude.size());
  for (std::size_t m = 0; m < density.size(); ++m) density[m] = std::norm(amplitude.samples[m]);
  return bin_density(density, amplitude.t0, amplitude.dt, franson_layout(delta_t, tau));
}

struct FringeEntry {
  int i = 0;
  int j = 0;
  Bin bin = Bin::kSimultaneous;
};

/// Probability per (detector i, detector j, relative-time bin).
struct CoincidenceTable {
  std::array<std::array<BinProbabilities, 2>, 2> entries{};
  double bin_width = 0.0;
  std::optional<double> visibility;

  double at(int i, int j, Bin b) const { return entries[i][j][static_cast<int>(b)]; }
  double at(const FringeEntry& e) const { return at(e.i, e.j, e.bin); }

  double total() const {
    double s = 0.0;
    for (const auto& row : entries)
      for (const auto& cell : row)
        for (double p : cell) s += p;
    return s;
  }

  double bin_total(Bin b) const {
    double s = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) s += at(i, j, b);
    return s;
  }

  double side_total() const { return bin_total(Bin::kMinus) + bin_total(Bin::kPlus); }
};

// ---------------------------------------------------------------------------
// Franson: one pair into two Mach-Zehnders

/// A_ij(Delta) = (2 pi)^(-1/2) integral f(w) c_ai(w) c_bj(pump - w) e^{i w Delta} dw
/// over the detection-time difference Delta = t' - t. With exact frequency
/// anticorrelation every coincidence statistic depends on Delta only, and
/// sum_ij integral |A_ij|^2 = 1.
inline TemporalAmplitude franson_relative_amplitude(const AnticorrelatedPairState& pair,
                                                    const MachZehnderParams& mz_a,
                                                    const MachZehnderParams& mz_b, int i,
                                                    int j) {
  check_port(i);
  check_port(j);
  const auto& grid = pair.spectrum.grid;
  const double tau = pair.coherence_time();
  double reach = 0.0;
  for (double da : {mz_a.t_short, mz_a.t_long})
    for (double db : {mz_b.t_short, mz_b.t_long}) reach = std::max(reach, std::abs(db - da));
  if (reach + 6.0 * tau > 0.5 * grid.time_window()) {
    std::ostringstream msg;
    msg << "relative delay " << reach << " does not fit the time window "
        << grid.time_window();
    throw Error(ErrorCode::kWindowOverflow, msg.str());
  }
  std::vector<cplx> f(grid.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double w = grid.omega(k);
    f[k] = pair.spectrum.samples[k] * mz_coefficient(w, mz_a, i) *
           mz_coefficient(pair.partner_frequency(w), mz_b, j);
  }
  return TemporalAmplitude{grid.t0(), grid.dt(), grid.center(),
                           detail::spectral_sum(grid, f, fft::Sign::kPositive)};
}

inline CoincidenceTable franson_table(const AnticorrelatedPairState& pair,
                                      const MachZehnderParams& mz_a,
                                      const MachZehnderParams& mz_b) {
  const double tau = pair.coherence_time();
  const double delta_t = mz_a.imbalance();
  CoincidenceTable table;
  table.bin_width = 6.0 * tau;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      table.entries[i][j] =
          bin_probabilities(franson_relative_amplitude(pair, mz_a, mz_b, i, j), delta_t, tau);
  return table;
}

// ---------------------------------------------------------------------------
// Conditional (sum-of-separable) states through two Mach-Zehnders

/// Dense |amplitude|^2 over (t, t'), row-major in t.
struct Density2D {
  double t0 = 0.0;
  double dt = 1.0;
  std::size_t n = 0;
  std::vector<double> values;

  double operator()(std::size_t row, std::size_t col) const { return values[row * n + col]; }
};

namespace detail {

struct PropagatedTerm {
  cplx coeff;
  TemporalAmplitude u;  // mode a after its interferometer
  TemporalAmplitude v;  // mode a' after its interferometer
};

inline void check_terms(const TwoPhotonState& state) {
  if (state.terms.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "two-photon state has no terms");
  }
  const auto& ref = state.terms.front().env_a;
  for (const auto& t : state.terms) {
    if (!t.env_a.same_grid(ref) || !t.env_b.same_grid(ref)) {
      throw Error(ErrorCode::kGridMismatch, "state envelopes live on different time grids");
    }
  }
}

/// Every term's envelopes through both ports of both interferometers;
/// index [port][term].
struct PortOutputs {
  std::array<std::vector<TemporalAmplitude>, 2> a;
  std::array<std::vector<TemporalAmplitude>, 2> b;

  std::vector<PropagatedTerm> terms(const TwoPhotonState& state, int i, int j) const {
    std::vector<PropagatedTerm> out;
    out.reserve(state.terms.size());
    for (std::size_t k = 0; k < state.terms.size(); ++k) {
      out.push_back({state.terms[k].coeff, a[i][k], b[j][k]});
    }
    return out;
  }
};

inline PortOutputs propagate_all(const TwoPhotonState& state, const MachZehnderParams& mz_a,
                                 const MachZehnderParams& mz_b) {
  check_terms(state);
  PortOutputs out;
  for (int port = 0; port < 2; ++port) {
    for (const auto& t : state.terms) {
      out.a[port].push_back(apply_mz_time_domain(t.env_a, mz_a, port));
      out.b[port].push_back(apply_mz_time_domain(t.env_b, mz_b, port));
    }
  }
  return out;
}

inline std::vector<PropagatedTerm> propagate(const TwoPhotonState& state,
                                             const MachZehnderParams& mz_a,
                                             const MachZehnderParams& mz_b, int i, int j) {
  check_port(i);
  check_port(j);
  check_terms(state);
  std::vector<PropagatedTerm> out;
  out.reserve(state.terms.size());
  for (const auto& t : state.terms) {
    out.push_back({t.coeff, apply_mz_time_domain(t.env_a, mz_a, i),
                   apply_mz_time_domain(t.env_b, mz_b, j)});
  }
  return out;
}

/// corr[s + n - 1] = sum_m a[m] b[m + s] for s in (-n, n).
inline std::vector<cplx> cross_correlation(const std::vector<cplx>& a,
                                           const std::vector<cplx>& b) {
  const std::size_t n = a.size();
  const std::size_t padded = 2 * n;
  std::vector<cplx> ac(padded), bp(padded);
  for (std::size_t m = 0; m < n; ++m) {
    ac[m] = std::conj(a[m]);
    bp[m] = b[m];
  }
  const auto fa = fft::dft(ac, fft::Sign::kNegative);
  const auto fb = fft::dft(bp, fft::Sign::kNegative);
  std::vector<cplx> prod(padded);
  for (std::size_t k = 0; k < padded; ++k) prod[k] = fb[k] * std::conj(fa[k]);
  const auto c = fft::dft(prod, fft::Sign::kPositive);
  std::vector<cplx> out(2 * n - 1);
  const double inv = 1.0 / static_cast<double>(padded);
  for (std::size_t s = 0; s < n; ++s) out[n - 1 + s] = c[s] * inv;
  for (std::size_t s = 1; s < n; ++s) out[n - 1 - s] = c[padded - s] * inv;
  return out;
}

/// D(s) = sum_t |sum_k coeff_k u_k(t) v_k(t + s)|^2 dt over s = (-n+1 .. n-1) dt.
inline std::vector<double> relative_time_density(const std::vector<PropagatedTerm>& terms) {
  const std::size_t n = terms.front().u.size();
  const double dt = terms.front().u.dt;
  std::vector<double> out(2 * n - 1, 0.0);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    for (std::size_t l = k; l < terms.size(); ++l) {
      std::vector<cplx> a(n), b(n);
      for (std::size_t m = 0; m < n; ++m) {
        a[m] = std::conj(terms[k].u.samples[m]) * terms[l].u.samples[m];
        b[m] = std::conj(terms[k].v.samples[m]) * terms[l].v.samples[m];
      }
      const auto corr = cross_correlation(a, b);
      const cplx w = std::conj(terms[k].coeff) * terms[l].coeff;
      // (l, k) is the complex conjugate of (k, l).
      const double mult = (k == l) ? 1.0 : 2.0;
      for (std::size_t s = 0; s < out.size(); ++s) out[s] += mult * (w * corr[s]).real() * dt;
    }
  }
  return out;
}

}  // namespace detail

/// density(t, t') = |sum_k coeff_k (MZ_A,i g_k)(t) (MZ_B,j h_k)(t')|^2, dense.
/// Only meant for modest grids (n <= 4096).
inline Density2D coincidence_density(const TwoPhotonState& state,
                                     const MachZehnderParams& mz_a,
                                     const MachZehnderParams& mz_b, int i, int j) {
  const auto terms = detail::propagate(state, mz_a, mz_b, i, j);
  const auto& ref = terms.front().u;
  const std::size_t n = ref.size();
  if (n > 4096) {
    throw Error(ErrorCode::kInvalidArgument, "dense coincidence density limited to n <= 4096");
  }
  Density2D out{ref.t0, ref.dt, n, std::vector<double>(n * n)};
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      cplx amp = 0.0;
      for (const auto& t : terms) amp += t.coeff * t.u.samples[r] * t.v.samples[c];
      out.values[r * n + c] = std::norm(amp);
    }
  }
  return out;
}

/// Binned coincidence probabilities of a conditional state without forming
/// the dense density: per port pair, integrates over t and sorts t' - t into
/// the layout's windows.
inline CoincidenceTable conditional_table(const TwoPhotonState& state,
                                          const MachZehnderParams& mz_a,
                                          const MachZehnderParams& mz_b,
                                          const BinLayout& layout) {
  layout.validate();
  CoincidenceTable table;
  table.bin_width = 2.0 * layout.half_width;
  const auto outputs = detail::propagate_all(state, mz_a, mz_b);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const auto terms = outputs.terms(state, i, j);
      const std::size_t n = terms.front().u.size();
      const double dt = terms.front().u.dt;
      const auto density = detail::relative_time_density(terms);
      table.entries[i][j] =
          bin_density(density, -static_cast<double>(n - 1) * dt, dt, layout);
    }
  }
  return table;
}

}  // namespace franson
