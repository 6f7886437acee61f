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

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <vector>

#include "franson/errors.hpp"
#include "franson/fft.hpp"

namespace franson {

using cplx = std::complex<double>;
using namespace std::complex_literals;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

/// Uniform angular-frequency grid of n points centred on `center`:
/// omega_k = center + (k - n/2) * spacing. Its dual time grid has
/// t_m = (m - n/2) * dt with dt = 2*pi/span, so the time window is
/// 2*pi/spacing wide and centred on t = 0.
class FrequencyGrid {
 public:
  FrequencyGrid(double center, double span, std::size_t n_points)
      : center_(center), span_(span), n_(n_points) {
    if (n_ < 16 || (n_ & (n_ - 1)) != 0) {
      throw Error(ErrorCode::kInvalidGrid,
                  "frequency grid needs a power-of-two point count >= 16, got " +
                      std::to_string(n_));
    }
    if (!(span_ > 0.0) || !std::isfinite(span_) || !std::isfinite(center_)) {
      throw Error(ErrorCode::kInvalidGrid, "frequency grid span must be positive");
    }
  }

  double center() const { return center_; }
  double span() const { return span_; }
  std::size_t size() const { return n_; }
  double spacing() const { return span_ / static_cast<double>(n_); }
  double omega(std::size_t k) const {
    return center_ + (static_cast<double>(k) - static_cast<double>(n_ / 2)) * spacing();
  }

  double dt() const { return kTwoPi / span_; }
  double time_window() const { return kTwoPi / spacing(); }
  double t0() const { return -static_cast<double>(n_ / 2) * dt(); }
  double time(std::size_t m) const {
    return (static_cast<double>(m) - static_cast<double>(n_ / 2)) * dt();
  }

  friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;

 private:
  double center_;
  double span_;
  std::size_t n_;
};

/// Single-photon frequency amplitude f(omega) sampled on a FrequencyGrid.
struct SpectralAmplitude {
  FrequencyGrid grid;
  std::vector<cplx> samples;
  double bandwidth = 0.0;

  double norm2() const {
    double s = 0.0;
    for (const auto& v : samples) s += std::norm(v);
    return s * grid.spacing();
  }
};

/// Time-domain amplitude psi(t_m) on t_m = t0 + m*dt. Samples hold the full
/// physical amplitude (carrier included); `band_center` records the centre of
/// the frequency band the samples are limited to, which fixes the inverse
/// transform.
struct TemporalAmplitude {
  double t0 = 0.0;
  double dt = 1.0;
  double band_center = 0.0;
  std::vector<cplx> samples;

  std::size_t size() const { return samples.size(); }
  double time(std::size_t m) const { return t0 + static_cast<double>(m) * dt; }
  double t_last() const { return time(samples.empty() ? 0 : samples.size() - 1); }

  double norm2() const {
    double s = 0.0;
    for (const auto& v : samples) s += std::norm(v);
    return s * dt;
  }

  bool same_grid(const TemporalAmplitude& other) const {
    return samples.size() == other.samples.size() && t0 == other.t0 && dt == other.dt;
  }
};

/// Gaussian spectrum f0 * exp(-(omega - center)^2 / (4 bw^2)) with f0 fixed
/// by unit discrete norm.
inline SpectralAmplitude gaussian_spectrum(double omega_center, double bandwidth,
                                           const FrequencyGrid& grid) {
  if (!(bandwidth > 0.0)) {
    throw Error(ErrorCode::kNonPositiveBandwidth, "bandwidth must be positive");
  }
  if (grid.span() < 12.0 * bandwidth) {
    std::ostringstream msg;
    msg << "grid span " << grid.span() << " is narrower than 12*bandwidth = "
        << 12.0 * bandwidth;
    throw Error(ErrorCode::kGridTooNarrow, msg.str());
  }
  if (std::abs(grid.center() - omega_center) > 1e-12 * std::max(1.0, std::abs(omega_center))) {
    throw Error(ErrorCode::kInvalidGrid, "grid must be centred on the spectrum centre");
  }
  SpectralAmplitude out{grid, std::vector<cplx>(grid.size()), bandwidth};
  const double inv4 = 1.0 / (4.0 * bandwidth * bandwidth);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    // Offsets from the centre are exact multiples of the spacing, which keeps
    // the samples at centre +- delta bit-identical.
    const double nu = (static_cast<double>(k) - static_cast<double>(grid.size() / 2)) *
                      grid.spacing();
    out.samples[k] = std::exp(-nu * nu * inv4);
  }
  const double scale = 1.0 / std::sqrt(out.norm2());
  for (auto& v : out.samples) v *= scale;
  return out;
}

namespace detail {

// out_m = (spacing/sqrt(2 pi)) sum_k f_k exp(sign * i * omega_k * t_m) on the
// grid's dual time axis.
inline std::vector<cplx> spectral_sum(const FrequencyGrid& grid,
                                      const std::vector<cplx>& f, fft::Sign sign) {
  const std::size_t n = grid.size();
  std::vector<cplx> staged(n);
  for (std::size_t k = 0; k < n; ++k) staged[k] = (k % 2 == 0) ? f[k] : -f[k];
  auto out = fft::dft(staged, sign);
  const double s = (sign == fft::Sign::kPositive) ? 1.0 : -1.0;
  const double scale = grid.spacing() / std::sqrt(kTwoPi);
  for (std::size_t m = 0; m < n; ++m) {
    const double parity = (m % 2 == 0) ? 1.0 : -1.0;
    out[m] *= parity * scale * std::polar(1.0, s * grid.center() * grid.time(m));
  }
  return out;
}

}  // namespace detail

/// psi(t) = (2 pi)^(-1/2) * integral f(omega) exp(-i omega (t - delay)) domega,
/// i.e. the photon wavepacket emitted with the given time delay. A delay
/// multiplies the spectrum by exp(i omega delay) and shifts the packet to
/// later times.
inline TemporalAmplitude to_temporal(const SpectralAmplitude& spec, double delay = 0.0) {
  const auto& grid = spec.grid;
  std::vector<cplx> f = spec.samples;
  if (delay != 0.0) {
    for (std::size_t k = 0; k < f.size(); ++k) f[k] *= std::polar(1.0, grid.omega(k) * delay);
  }
  return TemporalAmplitude{grid.t0(), grid.dt(), grid.center(),
                           detail::spectral_sum(grid, f, fft::Sign::kNegative)};
}

/// The frequency grid whose dual time axis is the amplitude's time axis.
inline FrequencyGrid frequency_grid_of(const TemporalAmplitude& amp) {
  const std::size_t n = amp.size();
  FrequencyGrid grid(amp.band_center, kTwoPi / amp.dt, n);
  if (std::abs(grid.t0() - amp.t0) > 1e-9 * amp.dt) {
    throw Error(ErrorCode::kGridMismatch,
                "temporal amplitude is not on a zero-centred dual time grid");
  }
  return grid;
}

/// Inverse of to_temporal (delay 0): f(omega) = (2 pi)^(-1/2) integral psi(t) e^{i omega t} dt.
inline SpectralAmplitude to_spectral(const TemporalAmplitude& amp, double bandwidth = 0.0) {
  const FrequencyGrid grid = frequency_grid_of(amp);
  const std::size_t n = grid.size();
  std::vector<cplx> staged(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double parity = (m % 2 == 0) ? 1.0 : -1.0;
    staged[m] = parity * amp.samples[m] * std::polar(1.0, grid.center() * grid.time(m));
  }
  auto f = fft::dft(staged, fft::Sign::kPositive);
  const double scale = amp.dt / std::sqrt(kTwoPi);
  for (std::size_t k = 0; k < n; ++k) f[k] *= ((k % 2 == 0) ? scale : -scale);
  return SpectralAmplitude{grid, std::move(f), bandwidth};
}

/// Coherence time of the collapsed packet, tau = 1 / bandwidth.
inline double coherence_time(const SpectralAmplitude& spec) {
  if (!(spec.bandwidth > 0.0)) {
    throw Error(ErrorCode::kNonPositiveBandwidth, "spectrum has no recorded bandwidth");
  }
  return 1.0 / spec.bandwidth;
}

/// <a|b> = sum conj(a) b dt.
inline cplx overlap(const TemporalAmplitude& a, const TemporalAmplitude& b) {
  if (!a.same_grid(b)) {
    throw Error(ErrorCode::kGridMismatch, "overlap of amplitudes on different time grids");
  }
  cplx s = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) s += std::conj(a.samples[m]) * b.samples[m];
  return s * a.dt;
}

/// Root-mean-square width of |psi(t)|^2.
inline double rms_width(const TemporalAmplitude& amp) {
  double w = 0.0, mean = 0.0;
  for (std::size_t m = 0; m < amp.size(); ++m) {
    const double p = std::norm(amp.samples[m]);
    w += p;
    mean += p * amp.time(m);
  }
  mean /= w;
  double var = 0.0;
  for (std::size_t m = 0; m < amp.size(); ++m) {
    const double d = amp.time(m) - mean;
    var += std::norm(amp.samples[m]) * d * d;
  }
  return std::sqrt(var / w);
}

}  // namespace franson
