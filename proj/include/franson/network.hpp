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

#include <array>
#include <cmath>
#include <complex>
#include <sstream>

#include "franson/errors.hpp"
#include "franson/spectral.hpp"

namespace franson {

/// Unbalanced Mach-Zehnder interferometer: short arm delay, long arm delay,
/// and the extra phase placed in the long arm.
struct MachZehnderParams {
  double t_short = 0.0;
  double t_long = 1.0;
  double phase = 0.0;

  double imbalance() const { return t_long - t_short; }

  void validate() const {
    if (!(t_long > t_short)) {
      std::ostringstream msg;
      msg << "Mach-Zehnder long arm (" << t_long << ") must exceed short arm (" << t_short
          << ")";
      throw Error(ErrorCode::kInvalidArgument, msg.str());
    }
  }
};

struct MzCoefficients {
  cplx c0;
  cplx c1;
};

/// Output-port amplitudes for a photon of angular frequency omega:
///   c0 = (e^{i w ts} - e^{i (w tl + phase)}) / 2
///   c1 = i (e^{i (w tl + phase)} + e^{i w ts}) / 2
/// Balanced arms are allowed here (t_short == t_long) so the extinction case
/// can be evaluated directly.
inline MzCoefficients mz_coefficients(double omega, const MachZehnderParams& mz) {
  const cplx s = std::polar(1.0, omega * mz.t_short);
  const cplx l = std::polar(1.0, omega * mz.t_long + mz.phase);
  return {0.5 * (s - l), 0.5i * (l + s)};
}

inline cplx mz_coefficient(double omega, const MachZehnderParams& mz, int port) {
  const auto c = mz_coefficients(omega, mz);
  return port == 0 ? c.c0 : c.c1;
}

inline void check_port(int port) {
  if (port != 0 && port != 1) {
    throw Error(ErrorCode::kInvalidArgument, "port must be 0 or 1");
  }
}

/// Symmetric lossless beam splitter (1/sqrt2) [[1, i], [i, 1]] mapping the
/// input modes (b, b') onto the detector modes (c, c'). Row = output,
/// column = input.
struct BeamSplitter {
  std::array<std::array<cplx, 2>, 2> matrix{{{kInvSqrt2, 1i * kInvSqrt2},
                                             {1i * kInvSqrt2, kInvSqrt2}}};

  cplx operator()(int output, int input) const { return matrix[output][input]; }

  /// Amplitude for the photon from input b to leave at `out_b` and the one
  /// from b' to leave at `out_bp`.
  cplx pair_amplitude(int out_b, int out_bp) const {
    return matrix[out_b][0] * matrix[out_bp][1];
  }
};

/// Time-domain Mach-Zehnder map on a single-photon packet:
///   port 0: (g(t - ts) - e^{i phase} g(t - tl)) / 2
///   port 1: i (e^{i phase} g(t - tl) + g(t - ts)) / 2
/// The delays are applied on the spectrum so they need not be multiples of
/// the time step. Throws kWindowOverflow when a delayed copy would leave the
/// window (and wrap around).
inline TemporalAmplitude apply_mz_time_domain(const TemporalAmplitude& envelope,
                                              const MachZehnderParams& mz, int port) {
  check_port(port);
  const double total = envelope.norm2();
  if (total > 0.0) {
    const double lo = envelope.t0;
    const double hi = envelope.t_last();
    for (double delay : {mz.t_short, mz.t_long}) {
      double outside = 0.0;
      for (std::size_t m = 0; m < envelope.size(); ++m) {
        const double t = envelope.time(m) + delay;
        if (t < lo || t > hi) outside += std::norm(envelope.samples[m]);
      }
      if (outside * envelope.dt > 1e-12 * total) {
        std::ostringstream msg;
        msg << "delay " << delay << " pushes " << outside * envelope.dt / total
            << " of the packet weight out of the time window";
        throw Error(ErrorCode::kWindowOverflow, msg.str());
      }
    }
  }
  auto spec = to_spectral(envelope);
  for (std::size_t k = 0; k < spec.samples.size(); ++k) {
    spec.samples[k] *= mz_coefficient(spec.grid.omega(k), mz, port);
  }
  return to_temporal(spec);
}

}  // namespace franson
