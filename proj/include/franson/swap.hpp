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
#include <sstream>
#include <utility>

#include "franson/errors.hpp"
#include "franson/network.hpp"
#include "franson/spectral.hpp"
#include "franson/twophoton.hpp"

namespace franson {

enum class Detector { kC = 0, kCPrime = 1 };

inline const char* detector_name(Detector d) { return d == Detector::kC ? "c" : "c'"; }

struct DetectionEvent {
  Detector detector = Detector::kC;
  double time = 0.0;
};

enum class PostselectionClass { kSame, kDifferent };

inline const char* class_name(PostselectionClass c) {
  return c == PostselectionClass::kSame ? "same" : "different";
}

/// Two independent pairs (a, b) and (a', b') with b and b' mixed on a beam
/// splitter towards detectors c and c'.
struct FourModeState {
  AnticorrelatedPairState left;
  AnticorrelatedPairState right;
  BeamSplitter bs;

  /// Amplitude for b to reach `out_b` while b' reaches `out_bp`.
  cplx term_amplitude(Detector out_b, Detector out_bp) const {
    return bs.pair_amplitude(static_cast<int>(out_b), static_cast<int>(out_bp));
  }
};

inline FourModeState beam_split(const AnticorrelatedPairState& left,
                                const AnticorrelatedPairState& right) {
  if (!(left.spectrum.grid == right.spectrum.grid)) {
    throw Error(ErrorCode::kGridMismatch, "the two sources use different frequency grids");
  }
  if (left.pump != right.pump) {
    throw Error(ErrorCode::kInvalidArgument, "the two sources must share the pump frequency");
  }
  return FourModeState{left, right, BeamSplitter{}};
}

/// Conditional state of (a, a') after two clicks. `weight` is the
/// post-selection weight before normalisation, in units where a single
/// product of the two collapsed packets has weight 1 (the four click
/// patterns at fixed times sum to 2).
struct ConditionalState {
  TwoPhotonState state;
  double weight = 0.0;
  PostselectionClass postselection = PostselectionClass::kSame;
};

namespace detail {

inline void check_click_window(const FourModeState& state, const DetectionEvent& e) {
  const auto& grid = state.left.spectrum.grid;
  const double margin = 6.0 * state.left.coherence_time();
  const double lo = grid.t0() + margin;
  const double hi = grid.time(grid.size() - 1) - margin;
  if (e.time < lo || e.time > hi) {
    std::ostringstream msg;
    msg << "click at t=" << e.time << " on " << detector_name(e.detector)
        << " lies outside the usable window [" << lo << ", " << hi << "]";
    throw Error(ErrorCode::kWindowOverflow, msg.str());
  }
}

/// Unnormalised projection of the pair of b-side photons onto the two clicks.
/// Each assignment (b -> e1, b' -> e2) and (b -> e2, b' -> e1) collapses
/// the partner photons onto packets at the click times with the pump phase.
inline TwoPhotonState project_clicks(const FourModeState& state, const DetectionEvent& e1,
                                     const DetectionEvent& e2) {
  const auto& L = state.left;
  const auto& R = state.right;
  auto collapse = [&](const DetectionEvent& on_b, const DetectionEvent& on_bp) {
    const cplx coeff = state.term_amplitude(on_b.detector, on_bp.detector) *
                       std::polar(1.0, -L.pump * on_b.time) *
                       std::polar(1.0, -R.pump * on_bp.time);
    return SeparableTerm{coeff, to_temporal(L.spectrum, on_b.time),
                         to_temporal(R.spectrum, on_bp.time)};
  };
  TwoPhotonState out;
  out.terms.push_back(collapse(e1, e2));
  out.terms.push_back(collapse(e2, e1));
  return out;
}

}  // namespace detail

inline ConditionalState condition_on_detections(const FourModeState& state,
                                                const DetectionEvent& e1,
                                                const DetectionEvent& e2) {
  detail::check_click_window(state, e1);
  detail::check_click_window(state, e2);
  const auto cls = (e1.detector == e2.detector) ? PostselectionClass::kSame
                                                : PostselectionClass::kDifferent;
  const double dt = state.left.spectrum.grid.dt();
  if (cls == PostselectionClass::kSame && std::abs(e1.time - e2.time) < dt) {
    std::ostringstream msg;
    msg << "two clicks on " << detector_name(e1.detector) << " separated by "
        << std::abs(e1.time - e2.time) << " < grid step " << dt << " cannot be resolved";
    throw Error(ErrorCode::kUnresolvableClicks, msg.str());
  }
  ConditionalState out{detail::project_clicks(state, e1, e2), 0.0, cls};
  out.weight = state_norm2(out.state);
  if (out.weight > 0.0) out.state = scaled(std::move(out.state), 1.0 / std::sqrt(out.weight));
  return out;
}

/// Relative weights of the four click patterns (detector of the first click,
/// detector of the second) for clicks separated by delta_t, placed
/// symmetrically about t = 0. The entries sum to 1.
inline std::array<std::array<double, 2>, 2> hom_click_fractions(const FourModeState& state,
                                                                double delta_t) {
  const double t1 = -0.5 * delta_t;
  const double t2 = t1 + delta_t;
  std::array<std::array<double, 2>, 2> w{};
  double total = 0.0;
  for (Detector d1 : {Detector::kC, Detector::kCPrime}) {
    for (Detector d2 : {Detector::kC, Detector::kCPrime}) {
      const DetectionEvent e1{d1, t1}, e2{d2, t2};
      detail::check_click_window(state, e1);
      detail::check_click_window(state, e2);
      const double x = state_norm2(detail::project_clicks(state, e1, e2));
      w[static_cast<int>(d1)][static_cast<int>(d2)] = x;
      total += x;
    }
  }
  for (auto& row : w)
    for (auto& x : row) x /= total;
  return w;
}

/// Fraction of b-side photon pairs whose clicks, separated by delta_t, land on
/// different detectors.
inline double hom_cross_coincidence_probability(const FourModeState& state, double delta_t) {
  const auto w = hom_click_fractions(state, delta_t);
  return w[0][1] + w[1][0];
}

/// Bins for the swapped fringes: the exchange events (long arm on one side,
/// short on the other) sit at t' - t = +-(delta_small_t - delta_t) and form
/// the simultaneous bin; the same-arm events sit at -+delta_small_t.
inline BinLayout swap_layout(double delta_small_t, double delta_t, double tau) {
  const double dst = std::abs(delta_small_t);
  const double x = dst - delta_t;
  BinLayout layout{{-dst}, {x}, {dst}, 3.0 * tau};
  if (std::abs(x) > 0.0) layout.simultaneous.push_back(-x);
  return layout;
}

/// Full pipeline: condition on (e1, e2), send a and a' through their
/// interferometers and bin the coincidences. The table refers to the
/// normalised conditional state, so it sums to 1.
inline CoincidenceTable swapped_fringe_probabilities(const AnticorrelatedPairState& left,
                                                     const AnticorrelatedPairState& right,
                                                     const MachZehnderParams& mz_a,
                                                     const MachZehnderParams& mz_b,
                                                     const DetectionEvent& e1,
                                                     const DetectionEvent& e2) {
  mz_a.validate();
  mz_b.validate();
  const double delta_t = mz_a.imbalance();
  if (std::abs(delta_t - mz_b.imbalance()) > 1e-9 * std::max(1.0, delta_t)) {
    throw Error(ErrorCode::kInvalidArgument,
                "both interferometers must have the same arm imbalance");
  }
  const auto four = beam_split(left, right);
  const auto cond = condition_on_detections(four, e1, e2);
  if (cond.weight <= 0.0) {
    throw Error(ErrorCode::kNegativeNorm, "post-selected event has zero weight");
  }
  const double tau = left.coherence_time();
  return conditional_table(cond.state, mz_a, mz_b,
                           swap_layout(e2.time - e1.time, delta_t, tau));
}

}  // namespace franson
