// Copyright 2026 The bassim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "bassim/csv.hpp"
#include "bassim/errors.hpp"
#include "bassim/harness.hpp"

namespace bassim {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 20.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 60.0;

struct Axis {
  double lo;
  double hi;
  double pixel_lo;
  double pixel_hi;

  double map(double v) const {
    return pixel_lo + (v - lo) / (hi - lo) * (pixel_hi - pixel_lo);
  }
};

Axis make_axis(const std::vector<double>& v, double pixel_lo, double pixel_hi) {
  double lo = *std::min_element(v.begin(), v.end());
  double hi = *std::max_element(v.begin(), v.end());
  const double pad = hi > lo ? 0.05 * (hi - lo) : 0.5;
  return {lo - pad, hi + pad, pixel_lo, pixel_hi};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::size_t column_index(const std::vector<std::string>& header,
                         const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw ParseError(1, "summary is missing column '" + name + "'");
  }
  return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

std::string emit_chart(std::istream& summary_csv) {
  std::string line;
  if (!std::getline(summary_csv, line) || line.empty()) {
    throw ParseError(1, "empty summary");
  }
  const auto header = csv::split_line(line);
  const std::size_t nbass_col = column_index(header, "nbass");
  const std::size_t mse_col = column_index(header, "median_mse");
  const std::size_t r_col = column_index(header, "r");

  std::vector<double> lx, ly;
  double r = 0.0;
  std::size_t line_number = 1;
  while (std::getline(summary_csv, line)) {
    ++line_number;
    if (line.empty() || line == "\r") continue;
    const auto fields = csv::split_line(line);
    if (fields.size() != header.size()) {
      throw ParseError(line_number, "expected " + std::to_string(header.size()) +
                                        " fields, got " +
                                        std::to_string(fields.size()));
    }
    const double nbass = csv::parse_double(fields[nbass_col], line_number);
    const double mse = csv::parse_double(fields[mse_col], line_number);
    r = csv::parse_double(fields[r_col], line_number);
    if (!(nbass > 0.0) || !(mse > 0.0)) {
      throw ParseError(line_number, "nbass and median_mse must be positive");
    }
    lx.push_back(std::log10(nbass));
    ly.push_back(std::log10(mse));
  }
  if (lx.size() < 2) {
    throw ParseError(line_number, "summary needs at least 2 points, found " +
                                      std::to_string(lx.size()));
  }

  const Axis xa = make_axis(lx, kLeft, kWidth - kRight);
  // SVG y grows downward.
  const Axis ya = make_axis(ly, kHeight - kBottom, kTop);
  const double slope = -2.0 * r / (1.0 + 2.0 * r);
  double cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    cx += lx[i];
    cy += ly[i];
  }
  cx /= static_cast<double>(lx.size());
  cy /= static_cast<double>(ly.size());

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" fill=\"white\"/>\n";
  svg << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
  svg << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kHeight - kBottom)
      << "\" x2=\"" << fmt(kWidth - kRight) << "\" y2=\""
      << fmt(kHeight - kBottom) << "\"/>\n";
  svg << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kTop) << "\" x2=\""
      << fmt(kLeft) << "\" y2=\"" << fmt(kHeight - kBottom) << "\"/>\n";
  svg << "</g>\n";

  // Decade ticks inside the visible range.
  svg << "<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (double d = std::ceil(xa.lo); d <= xa.hi; d += 1.0) {
    svg << "<text x=\"" << fmt(xa.map(d)) << "\" y=\""
        << fmt(kHeight - kBottom + 16) << "\" text-anchor=\"middle\">1e"
        << static_cast<int>(d) << "</text>\n";
  }
  for (double d = std::ceil(ya.lo); d <= ya.hi; d += 1.0) {
    svg << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(ya.map(d))
        << "\" text-anchor=\"end\">1e" << static_cast<int>(d) << "</text>\n";
  }
  svg << "</g>\n";
  svg << "<text x=\"" << fmt(0.5 * (kLeft + kWidth - kRight)) << "\" y=\""
      << fmt(kHeight - 15)
      << "\" font-family=\"sans-serif\" font-size=\"13\" "
         "text-anchor=\"middle\">N_bass (log scale)</text>\n";
  svg << "<text x=\"18\" y=\"" << fmt(0.5 * (kTop + kHeight - kBottom))
      << "\" font-family=\"sans-serif\" font-size=\"13\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << fmt(0.5 * (kTop + kHeight - kBottom))
      << ")\">median MSE (log scale)</text>\n";

  const double x1 = xa.lo, x2 = xa.hi;
  svg << "<line class=\"reference\" x1=\"" << fmt(xa.map(x1)) << "\" y1=\""
      << fmt(ya.map(cy + slope * (x1 - cx))) << "\" x2=\"" << fmt(xa.map(x2))
      << "\" y2=\"" << fmt(ya.map(cy + slope * (x2 - cx)))
      << "\" stroke=\"firebrick\" stroke-dasharray=\"6 4\" "
         "stroke-width=\"1.5\"/>\n";
  for (std::size_t i = 0; i < lx.size(); ++i) {
    svg << "<circle class=\"marker\" cx=\"" << fmt(xa.map(lx[i]))
        << "\" cy=\"" << fmt(ya.map(ly[i]))
        << "\" r=\"4\" fill=\"steelblue\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace bassim
