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

#include "bassim/wavelets.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "bassim/csv.hpp"
#include "bassim/errors.hpp"
#include "bassim/rng.hpp"

namespace bassim {
namespace {

constexpr int kMaxLevel = 61;

}  // namespace

BasisIndex BasisIndex::wavelet(int level, std::int64_t shift) {
  if (level < 0 || level > kMaxLevel) {
    throw DomainError("wavelet level out of range: " + std::to_string(level));
  }
  if (shift < 0 || shift >= (std::int64_t{1} << level)) {
    throw DomainError("wavelet shift " + std::to_string(shift) +
                      " out of range at level " + std::to_string(level));
  }
  return BasisIndex(level, shift);
}

BasisIndex BasisIndex::from_flat(std::int64_t flat) {
  if (flat < 0) throw DomainError("negative flat index");
  if (flat == 0) return father();
  const int level =
      static_cast<int>(std::bit_width(static_cast<std::uint64_t>(flat))) - 1;
  return BasisIndex(level, flat - (std::int64_t{1} << level));
}

std::int64_t BasisIndex::flat() const {
  return is_father() ? 0 : (std::int64_t{1} << level_) + shift_;
}

void CoefficientTable::set_flat(std::int64_t flat, double value) {
  if (flat < 0) throw DomainError("negative flat index");
  entries_[flat] = value;
}

double CoefficientTable::get_flat(std::int64_t flat) const {
  const auto it = entries_.find(flat);
  return it == entries_.end() ? 0.0 : it->second;
}

int CoefficientTable::max_level() const {
  if (entries_.empty()) return -1;
  return BasisIndex::from_flat(entries_.rbegin()->first).level();
}

double CoefficientTable::squared_norm() const {
  double sum = 0.0;
  for (const auto& [flat, v] : entries_) sum += v * v;
  return sum;
}

CoefficientTable CoefficientTable::scaled(double factor) const {
  CoefficientTable out;
  for (const auto& [flat, v] : entries_) out.entries_[flat] = factor * v;
  return out;
}

DyadicStepFunction::DyadicStepFunction(int resolution,
                                       std::vector<double> cell_values)
    : resolution_(resolution), values_(std::move(cell_values)) {
  if (resolution < 0 || resolution > kMaxDenseLevel) {
    throw DomainError("step function resolution out of range");
  }
  if (values_.size() != (std::size_t{1} << resolution)) {
    throw DomainError("step function needs 2^resolution cell values");
  }
}

double DyadicStepFunction::cell_width() const {
  return std::ldexp(1.0, -resolution_);
}

std::size_t dyadic_cell(double t, int resolution) {
  const double scaled = std::ceil(std::ldexp(t, resolution)) - 1.0;
  if (scaled <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(scaled),
                  (std::size_t{1} << resolution) - 1);
}

double DyadicStepFunction::operator()(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) return 0.0;
  return values_[dyadic_cell(t, resolution_)];
}

double DyadicStepFunction::integral() const {
  double sum = 0.0;
  for (double v : values_) sum += v;
  return sum * cell_width();
}

double DyadicStepFunction::integral_of_square() const {
  double sum = 0.0;
  for (double v : values_) sum += v * v;
  return sum * cell_width();
}

double DyadicStepFunction::min() const {
  return *std::min_element(values_.begin(), values_.end());
}

double DyadicStepFunction::max() const {
  return *std::max_element(values_.begin(), values_.end());
}

double eval_basis(BasisIndex idx, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError("basis evaluation point outside [0, 1]");
  }
  if (idx.is_father()) return 1.0;
  // Level j + 1 cell of t decides both the wavelet and its sign.
  const std::size_t cell = dyadic_cell(t, idx.level() + 1);
  if (static_cast<std::int64_t>(cell >> 1) != idx.shift()) return 0.0;
  const double amplitude = std::sqrt(std::ldexp(1.0, idx.level()));
  return (cell & 1u) ? -amplitude : amplitude;
}

CoefficientTable analyze(const DyadicStepFunction& f, int j_max) {
  if (j_max < 0) throw DomainError("j_max must be non-negative");
  const int resolution = std::max(f.resolution(), j_max + 1);
  if (resolution > kMaxDenseLevel) {
    throw DomainError("analysis level exceeds dense representation limit");
  }
  // Cell integrals at the working resolution.
  const std::size_t cells = std::size_t{1} << resolution;
  const std::size_t repeat = std::size_t{1} << (resolution - f.resolution());
  std::vector<double> mass(cells);
  const double width = std::ldexp(1.0, -resolution);
  const auto values = f.values();
  for (std::size_t i = 0; i < cells; ++i) {
    mass[i] = values[i / repeat] * width;
  }

  CoefficientTable out;
  // mass[h] holds the integral over the h-th interval of level `level + 1`.
  for (int level = resolution - 1; level >= 0; --level) {
    const std::size_t count = std::size_t{1} << level;
    const double amplitude = std::sqrt(std::ldexp(1.0, level));
    for (std::size_t h = 0; h < count; ++h) {
      const double left = mass[2 * h];
      const double right = mass[2 * h + 1];
      if (level <= j_max) {
        out.set(BasisIndex::wavelet(level, static_cast<std::int64_t>(h)),
                amplitude * (left - right));
      }
      mass[h] = left + right;
    }
  }
  out.set(BasisIndex::father(), mass[0]);
  return out;
}

CoefficientTable analyze(const std::function<double(double)>& f, int j_max) {
  if (j_max < 0) throw DomainError("j_max must be non-negative");
  const int level = j_max + 10;
  if (level > kMaxDenseLevel) {
    throw DomainError("quadrature level exceeds dense representation limit");
  }
  const std::size_t cells = std::size_t{1} << level;
  std::vector<double> values(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    values[i] = f(std::ldexp(static_cast<double>(i) + 0.5, -level));
  }
  return analyze(DyadicStepFunction(level, std::move(values)), j_max);
}

double synthesize(const CoefficientTable& c, double t) {
  double sum = 0.0;
  for (const auto& [flat, v] : c.entries()) {
    sum += v * eval_basis(BasisIndex::from_flat(flat), t);
  }
  return sum;
}

DyadicStepFunction to_step_function(const CoefficientTable& c,
                                    int min_resolution) {
  const int resolution = std::max({c.max_level() + 1, min_resolution, 0});
  if (resolution > kMaxDenseLevel) {
    throw DomainError("table too deep for dense representation");
  }
  std::vector<double> values(std::size_t{1} << resolution,
                             c.get(BasisIndex::father()));
  for (const auto& [flat, v] : c.entries()) {
    if (flat == 0) continue;
    const BasisIndex idx = BasisIndex::from_flat(flat);
    const std::size_t half = std::size_t{1} << (resolution - idx.level() - 1);
    const std::size_t begin = static_cast<std::size_t>(idx.shift()) * 2 * half;
    const double amplitude = v * std::sqrt(std::ldexp(1.0, idx.level()));
    for (std::size_t i = 0; i < half; ++i) {
      values[begin + i] += amplitude;
      values[begin + half + i] -= amplitude;
    }
  }
  return DyadicStepFunction(resolution, std::move(values));
}

double besov_norm(const CoefficientTable& c, double r) {
  std::map<int, double> level_energy;
  for (const auto& [flat, v] : c.entries()) {
    const int level = std::max(BasisIndex::from_flat(flat).level(), 0);
    level_energy[level] += v * v;
  }
  double sum = 0.0;
  for (const auto& [level, energy] : level_energy) {
    sum += std::exp2(2.0 * level * r) * energy;
  }
  return std::sqrt(sum);
}

CoefficientTable make_sieve(const SieveSpec& spec) {
  if (spec.d < 1 || !std::has_single_bit(static_cast<std::uint64_t>(spec.d))) {
    throw DomainError("sieve size d must be a power of two");
  }
  if (spec.beta.size() != static_cast<std::size_t>(spec.d)) {
    throw DomainError("sieve needs exactly d signs");
  }
  const int level =
      std::countr_zero(static_cast<std::uint64_t>(spec.d));
  const double scale =
      spec.sieve_amplitude *
      std::pow(static_cast<double>(spec.d), -(spec.r + 0.5));
  CoefficientTable out;
  if (spec.C0 != 0.0) out.set(BasisIndex::father(), spec.C0);
  for (std::int64_t h = 0; h < spec.d; ++h) {
    const int sign = spec.beta[static_cast<std::size_t>(h)];
    if (sign != 1 && sign != -1) throw DomainError("sieve signs must be +-1");
    out.set(BasisIndex::wavelet(level, h), scale * sign);
  }
  return out;
}

CoefficientTable make_test_function(std::string_view kind, double r, double L,
                                    double C0) {
  if (!(r > 0.0)) throw DomainError("smoothness r must be positive");
  if (r >= 1.0) {
    throw DomainError(
        "unsupported smoothness: Haar wavelets only cover r < 1");
  }
  if (!(L > 0.0)) throw DomainError("Besov radius L must be positive");

  CoefficientTable out;
  if (kind == "zero") {
    out.set(BasisIndex::father(), C0);
    return out;
  }
  if (kind != "rough") {
    throw ConfigError("unknown test function kind '" + std::string(kind) + "'");
  }

  PhiloxStream signs(0x7e57f0c7ULL, 0);
  const double exponent = r + 0.5 + kTestFunctionDecayBuffer;
  for (int level = 0; level <= kTestFunctionMaxLevel; ++level) {
    const double magnitude = std::exp2(-level * exponent);
    for (std::int64_t h = 0; h < (std::int64_t{1} << level); ++h) {
      const double sign = (signs() & 1u) ? 1.0 : -1.0;
      out.set(BasisIndex::wavelet(level, h), sign * magnitude);
    }
  }
  out = out.scaled(0.9 * L / besov_norm(out, r));
  out.set(BasisIndex::father(), C0);
  return out;
}

void write_table_csv(std::ostream& out, const CoefficientTable& c) {
  out << "j,h,value\n";
  for (const auto& [flat, v] : c.entries()) {
    const BasisIndex idx = BasisIndex::from_flat(flat);
    out << idx.level() << ',' << idx.shift() << ',' << csv::format_number(v)
        << '\n';
  }
}

CoefficientTable read_table_csv(std::istream& in) {
  std::string line;
  std::size_t line_number = 0;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  ++line_number;
  if (csv::split_line(line) != std::vector<std::string>{"j", "h", "value"}) {
    throw ParseError(line_number, "expected header 'j,h,value'");
  }
  CoefficientTable out;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line == "\r") continue;
    const auto fields = csv::split_line(line);
    if (fields.size() != 3) throw ParseError(line_number, "expected 3 fields");
    const auto j = csv::parse_int(fields[0], line_number);
    const auto h = csv::parse_int(fields[1], line_number);
    const double v = csv::parse_double(fields[2], line_number);
    try {
      if (j == -1) {
        if (h != 0) throw DomainError("father row must have h = 0");
        out.set(BasisIndex::father(), v);
      } else {
        out.set(BasisIndex::wavelet(static_cast<int>(j), h), v);
      }
    } catch (const DomainError& e) {
      throw ParseError(line_number, e.what());
    }
  }
  return out;
}

}  // namespace bassim
