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

#include "franson/spectral.hpp"

#include <cmath>

#include "franson/oracle.hpp"
#include "gtest/gtest.h"

namespace franson {
namespace {

FrequencyGrid DefaultGrid(double center = 10.0, std::size_t n = 4096) {
  return FrequencyGrid(center, 8.0 * std::numbers::pi, n);
}

TEST(FrequencyGrid, RejectsNonPowerOfTwo) {
  EXPECT_THROW(FrequencyGrid(1.0, 20.0, 24), Error);
  EXPECT_THROW(FrequencyGrid(1.0, 20.0, 8), Error);
  EXPECT_NO_THROW(FrequencyGrid(1.0, 20.0, 16));
}

TEST(FrequencyGrid, SpacingTimesPointsIsSpan) {
  FrequencyGrid g(3.0, 17.5, 256);
  EXPECT_DOUBLE_EQ(g.spacing() * 256, 17.5);
  EXPECT_DOUBLE_EQ(g.omega(128), 3.0);
  EXPECT_DOUBLE_EQ(g.time(128), 0.0);
  EXPECT_NEAR(g.time_window(), kTwoPi / g.spacing(), 1e-12);
}

TEST(GaussianSpectrum, PeakToTwoSigmaRatioIsESquared) {
  // spacing 0.025, so centre + 2 bw sits 8 samples above the centre.
  const FrequencyGrid grid(2.0, 1.6, 64);
  const auto f = gaussian_spectrum(2.0, 0.1, grid);
  const double ratio = std::norm(f.samples[32]) / std::norm(f.samples[40]);
  EXPECT_NEAR(ratio, std::exp(2.0), 1e-12);
}

TEST(GaussianSpectrum, SymmetricAndNormalized) {
  const auto f = gaussian_spectrum(10.0, 1.0, DefaultGrid());
  EXPECT_NEAR(f.norm2(), 1.0, 1e-10);
  const std::size_t c = f.samples.size() / 2;
  for (std::size_t d = 1; d < c; ++d) {
    EXPECT_NEAR(std::abs(f.samples[c + d]), std::abs(f.samples[c - d]),
                1e-10 * std::abs(f.samples[c]));
  }
}

TEST(GaussianSpectrum, Errors) {
  const FrequencyGrid narrow(10.0, 11.0, 64);
  try {
    gaussian_spectrum(10.0, 1.0, narrow);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGridTooNarrow);
  }
  try {
    gaussian_spectrum(10.0, 0.0, DefaultGrid());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonPositiveBandwidth);
  }
}

TEST(ToTemporal, ParsevalAndRoundTrip) {
  for (double bw : {0.5, 1.0, 2.0}) {
    const FrequencyGrid grid(10.0, 8.0 * std::numbers::pi * bw, 4096);
    const auto f = gaussian_spectrum(10.0, bw, grid);
    const auto g = to_temporal(f);
    EXPECT_NEAR(g.norm2(), 1.0, 1e-8);
    const auto back = to_spectral(g);
    double worst = 0.0;
    for (std::size_t k = 0; k < f.samples.size(); ++k)
      worst = std::max(worst, std::abs(back.samples[k] - f.samples[k]));
    EXPECT_LT(worst, 1e-10);
  }
}

TEST(ToTemporal, MatchesClosedFormGaussianPacket) {
  // |f|^2 has standard deviation bw, so |g|^2 is Gaussian with rms 1/(2 bw)
  // and g(t) = sqrt2 (2pi)^(-1/4) bw^(1/2) e^{-i W t} e^{-bw^2 t^2}.
  const auto grid = DefaultGrid();
  const auto g = to_temporal(gaussian_spectrum(10.0, 1.0, grid), 3.25);
  double worst = 0.0;
  for (std::size_t m = 0; m < g.size(); ++m) {
    worst = std::max(worst, std::abs(g.samples[m] -
                                     oracle::gaussian_packet(10.0, 1.0, 3.25, g.time(m))));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(ToTemporal, RmsWidthIsHalfCoherenceTime) {
  const auto g1 = to_temporal(gaussian_spectrum(10.0, 1.0, DefaultGrid()));
  const FrequencyGrid wide(10.0, 16.0 * std::numbers::pi, 4096);
  const auto g2 = to_temporal(gaussian_spectrum(10.0, 2.0, wide));
  EXPECT_NEAR(rms_width(g1), 0.5, 1e-9);
  EXPECT_NEAR(rms_width(g2), 0.25, 1e-9);
  EXPECT_NEAR(rms_width(g1) / rms_width(g2), 2.0, 0.02);
}

TEST(CoherenceTime, InverseBandwidth) {
  const FrequencyGrid g(2.0, 1.6, 64);
  EXPECT_DOUBLE_EQ(coherence_time(gaussian_spectrum(2.0, 0.1, g)), 10.0);
  const auto s1 = gaussian_spectrum(10.0, 1.0, DefaultGrid());
  EXPECT_DOUBLE_EQ(coherence_time(s1), 1.0);
  const FrequencyGrid g3(10.0, 80.0, 256);
  EXPECT_DOUBLE_EQ(coherence_time(gaussian_spectrum(10.0, 3.0, g3)), 1.0 / 3.0);
}

TEST(Overlap, SelfOverlapIsOne) {
  const auto g = to_temporal(gaussian_spectrum(10.0, 1.0, DefaultGrid()));
  EXPECT_NEAR(std::abs(overlap(g, g) - cplx(1.0)), 0.0, 1e-10);
}

TEST(Overlap, DisjointPacketsVanish) {
  const auto spec = gaussian_spectrum(10.0, 1.0, DefaultGrid());
  EXPECT_LT(std::abs(overlap(to_temporal(spec), to_temporal(spec, 50.0))), 1e-15);
}

TEST(Overlap, OneCoherenceTimeMatchesGaussianIntegral) {
  // <g(t)|g(t - d)> = integral |f|^2 e^{i w d} dw = e^{i W d} e^{-bw^2 d^2 / 2}.
  const auto spec = gaussian_spectrum(10.0, 1.0, DefaultGrid());
  const cplx o = overlap(to_temporal(spec), to_temporal(spec, 1.0));
  const cplx expected = std::polar(std::exp(-0.5), 10.0);
  EXPECT_LT(std::abs(o - expected), 1e-12);
}

TEST(Overlap, ConjugateSymmetric) {
  const auto spec = gaussian_spectrum(10.0, 1.0, DefaultGrid());
  for (double d : {0.3, 1.7, 4.0}) {
    const auto a = to_temporal(spec, -d);
    const auto b = to_temporal(spec, 0.5 * d);
    EXPECT_LT(std::abs(overlap(a, b) - std::conj(overlap(b, a))), 1e-12);
  }
}

TEST(Overlap, GridMismatchThrows) {
  const auto a = to_temporal(gaussian_spectrum(10.0, 1.0, DefaultGrid()));
  const auto b = to_temporal(gaussian_spectrum(10.0, 1.0, DefaultGrid(10.0, 2048)));
  try {
    overlap(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGridMismatch);
  }
}

}  // namespace
}  // namespace franson
