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

#include "franson/oracle.hpp"

#include <cmath>

#include "franson/run.hpp"
#include "gtest/gtest.h"

namespace franson {
namespace {

constexpr double kOmega = 10.0;

class OracleTest : public ::testing::Test {
 protected:
  FrequencyGrid grid{kOmega, 16.0 * std::numbers::pi, 256};
  oracle::TimeGrid og = oracle::centred_grid(256, grid.dt());
  AnticorrelatedPairState pair = make_pair_state(kOmega, 1.0, grid);
  FourModeState four = beam_split(pair, pair);
};

TEST_F(OracleTest, GridsAgree) {
  EXPECT_DOUBLE_EQ(og.dt, 0.125);
  EXPECT_DOUBLE_EQ(og.t0, grid.t0());
}

TEST_F(OracleTest, ProductStateIsRankOne) {
  const auto s = TwoPhotonState{{SeparableTerm{1.0, to_temporal(pair.spectrum, -3.0),
                                               to_temporal(pair.spectrum, 2.0)}}};
  const auto d = oracle::densify(s, og, 1.0);
  double worst = 0.0;
  for (std::size_t r : {100u, 104u, 128u})
    for (std::size_t c : {120u, 140u, 150u})
      worst = std::max(worst, std::abs(d(r, c) * d(104, 140) - d(r, 140) * d(104, c)));
  EXPECT_LT(worst, 1e-14);
}

TEST_F(OracleTest, DensifiedNormMatchesGram) {
  const auto c = condition_on_detections(four, {Detector::kC, -4.0}, {Detector::kCPrime, 1.0});
  EXPECT_NEAR(oracle::densify(c.state, og, 1.0).norm2(), state_norm2(c.state), 1e-6);
}

TEST_F(OracleTest, AntisymmetricCoincidentClicksVanish) {
  const auto d = oracle::dense_conditional(kOmega, 1.0, {Detector::kC, 0.0},
                                           {Detector::kCPrime, 0.0}, og);
  double worst = 0.0;
  for (const auto& v : d.samples) worst = std::max(worst, std::abs(v));
  EXPECT_LT(worst, 1e-6);
}

TEST_F(OracleTest, DenseConditionalMatchesProjection) {
  // Same clicks, same unnormalised amplitude as the Gram-based route.
  const DetectionEvent e1{Detector::kC, -6.0}, e2{Detector::kC, 3.0};
  const auto direct = oracle::dense_conditional(kOmega, 1.0, e1, e2, og);
  const auto via = oracle::densify(detail::project_clicks(four, e1, e2), og, 1.0);
  double worst = 0.0;
  for (std::size_t k = 0; k < direct.samples.size(); ++k)
    worst = std::max(worst, std::abs(direct.samples[k] - via.samples[k]));
  EXPECT_LT(worst, 1e-10);
}

TEST_F(OracleTest, BruteCoincidenceMatchesFastDensity) {
  const auto c = condition_on_detections(four, {Detector::kC, -8.0}, {Detector::kC, 2.0});
  const MachZehnderParams a{0.0, 10.0, 0.7}, b{0.0, 10.0, -0.4};
  const auto dense = oracle::densify(c.state, og, 1.0);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const auto slow = oracle::brute_coincidence(dense, a, b, i, j);
      const auto fast = coincidence_density(c.state, a, b, i, j);
      double worst = 0.0;
      for (std::size_t k = 0; k < slow.values.size(); ++k)
        worst = std::max(worst, std::abs(slow.values[k] - fast.values[k]));
      EXPECT_LT(worst, 1e-10) << i << j;
    }
  }
}

TEST_F(OracleTest, BruteInterferometersAreUnitary) {
  const auto c = condition_on_detections(four, {Detector::kC, -8.0}, {Detector::kCPrime, 2.0});
  const MachZehnderParams a{0.0, 10.0, 1.1}, b{0.0, 10.0, 2.3};
  const auto dense = oracle::densify(c.state, og, 1.0);
  double total = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const auto d = oracle::brute_coincidence(dense, a, b, i, j);
      for (double v : d.values) total += v * og.dt * og.dt;
    }
  }
  EXPECT_NEAR(total, dense.norm2(), 1e-6);
}

TEST_F(OracleTest, BalancedBruteExtinction) {
  const MachZehnderParams bal{2.0, 2.0, 0.0};
  const auto dense = oracle::dense_conditional(kOmega, 1.0, {Detector::kC, -5.0},
                                               {Detector::kC, 5.0}, og);
  const auto d = oracle::brute_coincidence(dense, bal, bal, 0, 1);
  double worst = 0.0;
  for (double v : d.values) worst = std::max(worst, v);
  EXPECT_EQ(worst, 0.0);
}

TEST_F(OracleTest, HomMatchesFastPath) {
  for (double d : {0.0, 0.5, 1.25, 4.0}) {
    EXPECT_NEAR(oracle::brute_hom_cross(kOmega, 1.0, d, og),
                hom_cross_coincidence_probability(four, d), 1e-10);
  }
}

TEST_F(OracleTest, Errors) {
  const MachZehnderParams off{0.0, 10.01, 0.0};
  const auto dense = oracle::dense_conditional(kOmega, 1.0, {Detector::kC, -5.0},
                                               {Detector::kC, 5.0}, og);
  try {
    oracle::brute_coincidence(dense, off, off, 0, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDelayOffGrid);
  }
  try {
    oracle::dense_conditional(kOmega, 1.0, {Detector::kC, 0.0}, {Detector::kC, 5.0},
                              oracle::centred_grid(64, 0.25));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGridTooCoarse);
  }
  const MachZehnderParams far{0.0, 25.0, 0.0};
  try {
    oracle::brute_coincidence(dense, far, far, 0, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kWindowOverflow);
  }
}

TEST(OracleComparison, FastPathAgreesOnDownscaledCases) {
  const auto cases = oracle_comparison(512);
  ASSERT_EQ(cases.size(), 4u);
  for (const auto& c : cases) EXPECT_LE(c.max_abs_diff, 1e-8) << c.name;
}

}  // namespace
}  // namespace franson
