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

// Acceptance runner: one PASS/FAIL line per criterion, exit status 0 only
// when every criterion passes.
//
// usage: acceptance <franson_cli> <scratch_dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "franson/config.hpp"
#include "franson/experiments.hpp"
#include "franson/oracle.hpp"
#include "franson/run.hpp"

namespace {

using namespace franson;
namespace fs = std::filesystem;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

double sim(const CoincidenceTable& t, int i, int j) { return t.at(i, j, Bin::kSimultaneous); }

double table_diff(const CoincidenceTable& a, const CoincidenceTable& b) {
  double d = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 4; ++k) d = std::max(d, std::abs(a.entries[i][j][k] - b.entries[i][j][k]));
  return d;
}

ScanSpec base_spec(Scenario s, SweptParameter p, std::vector<double> values) {
  ScanSpec spec;
  spec.scenario = s;
  spec.swept = p;
  spec.values = std::move(values);
  return spec;  // defaults: bandwidth 1, imbalance 30, 2^14 points
}

// Scans shared between criteria.
struct Scans {
  ScanResult franson;
  double franson_seconds = 0.0;
  ScanResult swap_same, swap_diff;
  double swap_seconds = 0.0;
  ScanResult hom;
  ScanResult mismatch;
};

Scans run_scans() {
  Scans s;
  const auto period = linspace(0.0, kTwoPi, 64, false);
  auto t0 = Clock::now();
  s.franson = run_franson(base_spec(Scenario::kFranson, SweptParameter::kAlpha, period));
  s.franson_seconds = seconds_since(t0);

  t0 = Clock::now();
  auto swap = run_swap(base_spec(Scenario::kSwap, SweptParameter::kPhaseDiff, period));
  s.swap_seconds = seconds_since(t0);
  s.swap_same = std::move(swap.first);
  s.swap_diff = std::move(swap.second);

  s.hom = run_hom(base_spec(Scenario::kHom, SweptParameter::kDeltaSmallT,
                            {-50.0, -3.0, -1.0, -0.5, 0.0, 0.5, 1.0, 3.0, 50.0}));
  s.mismatch = run_mismatch(
      base_spec(Scenario::kMismatch, SweptParameter::kDetuning, {-20.0, 0.0, 20.0}));
  return s;
}

Outcome franson_fringes(const Scans& s) {
  const auto& r = s.franson;
  const double theta0 = 2.0 * r.spec.fixed.omega * r.spec.fixed.delta_t() + r.spec.fixed.beta;
  double e00 = 0.0, e01 = 0.0;
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const double c = std::cos(theta0 + r.spec.values[k]);
    e00 = std::max(e00, std::abs(sim(r.rows[k], 0, 0) - 0.125 * (1.0 + c)));
    e01 = std::max(e01, std::abs(sim(r.rows[k], 0, 1) - 0.125 * (1.0 - c)));
  }
  const bool pass = r.rows.size() == 64 && e00 < 1e-3 && e01 < 1e-3 && s.franson_seconds < 10.0;
  return {pass, fmt("64 alpha values, max|P00 err|=%.3g max|P01 err|=%.3g (< 1e-3), %.2f s (< 10 s)",
                    e00, e01, s.franson_seconds)};
}

Outcome side_peaks(const Scans& s) {
  double worst = 0.0;
  for (const auto& t : s.franson.rows)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (Bin b : {Bin::kMinus, Bin::kPlus})
          worst = std::max(worst, std::abs(t.at(i, j, b) - 1.0 / 16.0));
  return {worst <= 1e-3, fmt("max|P_ij(side) - 1/16|=%.3g (<= 1e-3)", worst)};
}

Outcome conservation(const Scans& s) {
  double worst = 0.0;
  std::size_t rows = 0;
  for (const auto* r : {&s.franson, &s.swap_same, &s.swap_diff, &s.hom, &s.mismatch}) {
    worst = std::max(worst, max_total_drift(*r));
    rows += r->rows.size();
  }
  return {worst <= 1e-4, fmt("%zu rows, max|total - 1|=%.3g (<= 1e-4)", rows, worst)};
}

TemporalAmplitude closed_form_packet(const FrequencyGrid& g, double center) {
  TemporalAmplitude a{g.t0(), g.dt(), g.center(), std::vector<cplx>(g.size())};
  for (std::size_t m = 0; m < g.size(); ++m)
    a.samples[m] = oracle::gaussian_packet(g.center(), 1.0, center, a.time(m));
  return a;
}

Outcome conditional_fidelity() {
  const PhysicalParams p;
  const auto grid = make_grid(p, Numerics{});
  const auto pair = make_pair_state(p.omega, p.bandwidth, grid);
  const auto four = beam_split(pair, pair);
  const double t1 = -15.0, t2 = 15.0;
  auto bell = [&](double sign) {
    return TwoPhotonState{{SeparableTerm{kInvSqrt2, closed_form_packet(grid, t1), closed_form_packet(grid, t2)},
                           SeparableTerm{sign * kInvSqrt2, closed_form_packet(grid, t2), closed_form_packet(grid, t1)}}};
  };
  const auto same = condition_on_detections(four, {Detector::kC, t1}, {Detector::kC, t2});
  const auto diff = condition_on_detections(four, {Detector::kC, t1}, {Detector::kCPrime, t2});
  const double fp = fidelity(same.state, bell(1.0));
  const double fm = fidelity(diff.state, bell(-1.0));
  return {fp >= 0.999 && fm >= 0.999,
          fmt("F(SAME, Psi+)=%.12f F(DIFFERENT, Psi-)=%.12f (>= 0.999)", fp, fm)};
}

Outcome swapped_fringes(const Scans& s) {
  double es = 0.0, ed = 0.0;
  for (std::size_t k = 0; k < s.swap_same.rows.size(); ++k) {
    const double c = std::cos(s.swap_same.spec.values[k]);
    for (int i = 0; i < 2; ++i) {
      es = std::max(es, std::abs(sim(s.swap_same.rows[k], i, i) - (1.0 + c) / 16.0));
      ed = std::max(ed, std::abs(sim(s.swap_diff.rows[k], i, i) - (1.0 - c) / 16.0));
    }
  }
  const bool pass = s.swap_same.rows.size() == 64 && es < 1e-3 && ed < 1e-3 && s.swap_seconds < 30.0;
  return {pass, fmt("64 phase differences, SAME max err=%.3g DIFFERENT max err=%.3g (< 1e-3), "
                    "%.2f s (< 30 s)", es, ed, s.swap_seconds)};
}

Outcome hom_dip(const Scans& s) {
  const auto& r = s.hom;
  auto cross = [&](std::size_t k) {
    return sim(r.rows[k], 0, 1) + sim(r.rows[k], 1, 0);
  };
  const std::size_t n = r.rows.size();
  const double at0 = cross(n / 2);
  const double at50 = std::max(std::abs(cross(0) - 0.5), std::abs(cross(n - 1) - 0.5));
  double odd = 0.0;
  for (std::size_t k = 0; k < n / 2; ++k) odd = std::max(odd, std::abs(cross(k) - cross(n - 1 - k)));
  return {at0 <= 1e-6 && at50 <= 1e-3 && odd <= 1e-8,
          fmt("P(0)=%.3g (<= 1e-6), max|P(+-50) - 1/2|=%.3g (<= 1e-3), max|P(d) - P(-d)|=%.3g "
              "(<= 1e-8)", at0, at50, odd)};
}

Outcome distinguishability(const Scans& s) {
  const double matched = std::min(*s.swap_same.visibility, *s.swap_diff.visibility);
  const double lo = *s.mismatch.rows[0].visibility;
  const double hi = *s.mismatch.rows[2].visibility;
  const double v0 = *s.mismatch.rows[1].visibility;
  return {matched >= 0.99 && v0 >= 0.99 && lo < 0.01 && hi < 0.01,
          fmt("V(dt=Dt)=%.6f / %.6f (>= 0.99), V(dt-Dt=-20tau)=%.3g V(dt-Dt=+20tau)=%.3g (< 0.01)",
              matched, v0, lo, hi)};
}

Outcome phase_separation() {
  const Numerics num;
  PhysicalParams p;
  p.alpha = 0.37;
  p.beta = -1.21;
  const auto grid = make_grid(p, num);
  const auto pair = make_pair_state(p.omega, p.bandwidth, grid);
  const auto fr0 = franson_table(pair, p.mz_a(), p.mz_b());
  const auto sw0 = swap_table(p, num, PostselectionClass::kSame);
  const auto sd0 = swap_table(p, num, PostselectionClass::kDifferent);
  std::mt19937 rng(1997);
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  double fr = 0.0, sw = 0.0;
  for (int k = 0; k < 16; ++k) {
    const double phi = u(rng);
    PhysicalParams q = p;
    q.alpha = p.alpha + phi;
    q.beta = p.beta - phi;
    fr = std::max(fr, table_diff(fr0, franson_table(pair, q.mz_a(), q.mz_b())));
    q.beta = p.beta + phi;
    sw = std::max(sw, table_diff(sw0, swap_table(q, num, PostselectionClass::kSame)));
    sw = std::max(sw, table_diff(sd0, swap_table(q, num, PostselectionClass::kDifferent)));
  }
  return {fr <= 1e-6 && sw <= 1e-6,
          fmt("16 phi values, Franson (a+phi, b-phi) drift=%.3g, swap (a+phi, b+phi) drift=%.3g "
              "(<= 1e-6)", fr, sw)};
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  const auto cases = oracle_comparison(512);
  const double secs = seconds_since(t0);
  double worst = 0.0;
  std::string names;
  for (const auto& c : cases) {
    worst = std::max(worst, c.max_abs_diff);
    names += (names.empty() ? "" : ",") + c.name;
  }
  return {cases.size() == 4 && worst <= 1e-8 && secs < 60.0,
          fmt("grid 512, Dt=10tau, cases %s: max diff=%.3g (<= 1e-8), %.2f s (< 60 s)",
              names.c_str(), worst, secs)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome cli_determinism(const std::string& cli, const fs::path& scratch) {
  fs::remove_all(scratch);
  fs::create_directories(scratch);
  {
    std::ofstream cfg(scratch / "swap.cfg");
    cfg << "scenario = swap\nalpha = 0.3\nsweep_steps = 32\nformats = csv\n";
  }
  std::vector<std::string> csv;
  for (const char* run : {"run1", "run2"}) {
    const auto out = scratch / run;
    const std::string cmd = "\"" + cli + "\" --config \"" + (scratch / "swap.cfg").string() +
                            "\" --out-dir \"" + out.string() + "\" swap > \"" +
                            (scratch / (std::string(run) + ".log")).string() + "\" 2>&1";
    if (std::system(cmd.c_str()) != 0) {
      return {false, std::string("CLI run failed: ") + slurp(scratch / (std::string(run) + ".log"))};
    }
    csv.push_back(slurp(out / "swap_same.csv") + slurp(out / "swap_different.csv"));
  }
  const bool pass = !csv[0].empty() && csv[0] == csv[1];
  return {pass, fmt("two CLI runs, %zu CSV bytes each, identical=%s", csv[0].size(),
                    pass ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <franson_cli> <scratch_dir>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path scratch = argv[2];

  const Scans scans = run_scans();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Franson fringes", [&] { return franson_fringes(scans); }},
      {"Side peaks", [&] { return side_peaks(scans); }},
      {"Conservation", [&] { return conservation(scans); }},
      {"Conditional-state fidelity", conditional_fidelity},
      {"Swapped fringes", [&] { return swapped_fringes(scans); }},
      {"HOM dip", [&] { return hom_dip(scans); }},
      {"Distinguishability", [&] { return distinguishability(scans); }},
      {"Phase-dependence separation", phase_separation},
      {"Oracle equivalence", oracle_equivalence},
      {"Determinism", [&] { return cli_determinism(cli, scratch); }},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (k + 1) << ". " << criteria[k].first
              << ": " << o.detail << "\n";
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
