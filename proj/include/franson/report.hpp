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
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "franson/experiments.hpp"
#include "franson/twophoton.hpp"

namespace franson {

/// 12 significant digits; -0 prints as 0.
inline std::string format_csv_number(double v) {
  if (v == 0.0) v = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::vector<std::string> csv_columns() {
  std::vector<std::string> cols{"swept_value", "P_00_sim", "P_01_sim", "P_10_sim", "P_11_sim",
                                "P_side_total", "other", "total", "visibility"};
  for (const char* ij : {"00", "01", "10", "11"})
    for (const char* bin : {"minus", "plus", "other"})
      cols.push_back(std::string("P_") + ij + "_" + bin);
  return cols;
}

namespace detail {

inline std::optional<double> row_visibility(const ScanResult& r, std::size_t row) {
  if (r.rows[row].visibility) return r.rows[row].visibility;
  return r.visibility;
}

}  // namespace detail

/// RFC 4180 table, one row per swept value. The fixed leading columns are
/// followed by the per-port side and remainder entries.
inline std::string csv_table(const ScanResult& r) {
  std::ostringstream out;
  const auto cols = csv_columns();
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
  out << "\r\n";
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const auto& t = r.rows[k];
    std::vector<std::string> f;
    f.push_back(format_csv_number(r.spec.values[k]));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) f.push_back(format_csv_number(t.at(i, j, Bin::kSimultaneous)));
    f.push_back(format_csv_number(t.side_total()));
    f.push_back(format_csv_number(t.bin_total(Bin::kOther)));
    f.push_back(format_csv_number(t.total()));
    const auto vis = detail::row_visibility(r, k);
    f.push_back(vis ? format_csv_number(*vis) : "");
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (Bin b : {Bin::kMinus, Bin::kPlus, Bin::kOther})
          f.push_back(format_csv_number(t.at(i, j, b)));
    for (std::size_t c = 0; c < f.size(); ++c) out << (c ? "," : "") << f[c];
    out << "\r\n";
  }
  return out.str();
}

inline nlohmann::json to_json(const ScanResult& r) {
  nlohmann::json j;
  j["scenario"] = scenario_name(r.spec.scenario);
  j["label"] = r.label;
  j["swept_parameter"] = parameter_name(r.spec.swept);
  const auto& p = r.spec.fixed;
  j["fixed"] = {{"omega", p.omega},     {"bandwidth", p.bandwidth},
                {"t_short", p.t_short}, {"t_long", p.t_long},
                {"alpha", p.alpha},     {"beta", p.beta},
                {"delta_small_t", p.delta_small_t}};
  j["numerics"] = {{"grid_points", r.spec.numerics.grid_points},
                   {"span_factor", r.spec.numerics.span_factor}};
  j["regime"] = {{"delta_t_over_tau", r.regime.delta_t_over_tau},
                 {"time_step", r.regime.time_step},
                 {"time_window", r.regime.time_window}};
  j["visibility"] = r.visibility ? nlohmann::json(*r.visibility) : nlohmann::json(nullptr);
  j["rows"] = nlohmann::json::array();
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const auto& t = r.rows[k];
    nlohmann::json row;
    row["swept_value"] = r.spec.values[k];
    for (int i = 0; i < 2; ++i)
      for (int jj = 0; jj < 2; ++jj)
        for (Bin b : {Bin::kMinus, Bin::kSimultaneous, Bin::kPlus, Bin::kOther})
          row["P"][std::to_string(i) + std::to_string(jj)][bin_name(b)] = t.at(i, jj, b);
    row["total"] = t.total();
    if (t.visibility) row["visibility"] = *t.visibility;
    j["rows"].push_back(row);
  }
  return j;
}

/// One plotted point: numerical value and, where a closed form exists, the
/// analytic expectation.
struct FringePoint {
  double x;
  double y;
  std::optional<double> analytic;
};

struct FringeSeries {
  std::string x_label;
  std::string y_label;
  std::vector<FringePoint> points;
};

/// The designated fringe of a scan with its analytic overlay:
///   franson          P_00 sim  vs (1/8)(1 + cos(2 W dT + a + b))
///   swap_same/diff   P_00 sim  vs (1/16)(1 +- cos(a - b))   (at dt = dT)
///   hom              P_01 + P_10 vs (1 - exp(-bw^2 dt^2)) / 2
///   mismatch         visibility vs exp(-bw^2 (dt - dT)^2)
inline FringeSeries fringe_series(const ScanResult& r) {
  FringeSeries s;
  s.x_label = parameter_name(r.spec.swept);
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const auto p = with_swept(r.spec.fixed, r.spec.swept, r.spec.values[k]);
    const auto& t = r.rows[k];
    FringePoint pt{r.spec.values[k], 0.0, std::nullopt};
    const bool matched = std::abs(std::abs(p.delta_small_t) - p.delta_t()) < 1e-9;
    switch (r.spec.scenario) {
      case Scenario::kFranson:
        s.y_label = "P_00 (simultaneous)";
        pt.y = t.at(r.spec.fringe);
        pt.analytic = 0.125 * (1.0 + std::cos(2.0 * p.omega * p.delta_t() + p.alpha + p.beta));
        break;
      case Scenario::kSwap: {
        s.y_label = "P_00 (simultaneous)";
        pt.y = t.at(r.spec.fringe);
        const double sign = r.label == "swap_different" ? -1.0 : 1.0;
        if (matched) pt.analytic = (1.0 + sign * std::cos(p.alpha - p.beta)) / 16.0;
        break;
      }
      case Scenario::kHom:
        s.y_label = "cross-detector probability";
        pt.y = t.at(0, 1, Bin::kSimultaneous) + t.at(1, 0, Bin::kSimultaneous);
        pt.analytic = 0.5 * (1.0 - std::exp(-p.bandwidth * p.bandwidth * p.delta_small_t *
                                            p.delta_small_t));
        break;
      case Scenario::kMismatch: {
        s.y_label = "swapped-fringe visibility";
        pt.y = t.visibility.value_or(0.0);
        const double d = std::abs(p.delta_small_t) - p.delta_t();
        pt.analytic = std::exp(-p.bandwidth * p.bandwidth * d * d);
        break;
      }
    }
    s.points.push_back(pt);
  }
  return s;
}

/// Static SVG: numerical points as markers, analytic curve as a polyline.
inline std::string svg_plot(const ScanResult& r) {
  const auto s = fringe_series(r);
  const double W = 640, H = 400, L = 70, R = 20, T = 30, B = 50;
  double x0 = s.points.front().x, x1 = x0, y0 = 0.0, y1 = 0.0;
  for (const auto& p : s.points) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
    if (p.analytic) y1 = std::max(y1, *p.analytic);
  }
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 <= y0) y1 = y0 + 1.0;
  y1 *= 1.05;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf);
  };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"14\">"
    << r.label << "</text>\n";
  o << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
    << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
    o << "<text x=\"" << num(px(xv)) << "\" y=\"" << H - B + 18
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << num(xv)
      << "</text>\n";
    o << "<text x=\"" << L - 6 << "\" y=\"" << num(py(yv) + 4)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(yv)
      << "</text>\n";
  }
  o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << s.x_label
    << "</text>\n";
  o << "<text x=\"15\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 15 "
    << (T + H - B) / 2
    << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << s.y_label
    << "</text>\n";

  std::ostringstream curve;
  bool any = false;
  for (const auto& p : s.points) {
    if (!p.analytic) continue;
    curve << (any ? " " : "") << num(px(p.x)) << "," << num(py(*p.analytic));
    any = true;
  }
  if (any) {
    o << "<polyline fill=\"none\" stroke=\"#c03030\" stroke-width=\"1.5\" points=\""
      << curve.str() << "\"/>\n";
  }
  for (const auto& p : s.points) {
    o << "<circle cx=\"" << num(px(p.x)) << "\" cy=\"" << num(py(p.y))
      << "\" r=\"3\" fill=\"#2050a0\"/>\n";
  }
  o << "</svg>\n";
  return o.str();
}

/// Largest |total - 1| over the rows.
inline double max_total_drift(const ScanResult& r) {
  double worst = 0.0;
  for (const auto& t : r.rows) worst = std::max(worst, std::abs(t.total() - 1.0));
  return worst;
}

}  // namespace franson
