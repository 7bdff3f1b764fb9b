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

// Haar multiresolution basis on [0, 1].
//
// The mother wavelet is psi = +1 on (0, 1/2], -1 on (1/2, 1], and
// psi_{jh}(t) = 2^{j/2} psi(2^j t - h). The father (scaling) function is
// phi = 1 on [0, 1]. Dyadic cells are closed on the right; t = 0 belongs to
// the first cell of every level, so each t in [0, 1] lies in exactly one
// cell. Coefficients are addressed either by (level, shift) or by the flat
// index 2^j + h, with flat index 0 reserved for phi.

#ifndef BASSIM_WAVELETS_HPP_
#define BASSIM_WAVELETS_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bassim {

// Highest level supported by the dense (step-function) representations.
inline constexpr int kMaxDenseLevel = 24;

class BasisIndex {
 public:
  // Father function phi.
  static BasisIndex father() { return BasisIndex(); }

  // Wavelet psi_{level,shift}; throws DomainError unless
  // level >= 0 and 0 <= shift < 2^level.
  static BasisIndex wavelet(int level, std::int64_t shift);

  // Inverse of flat(); throws DomainError for negative input.
  static BasisIndex from_flat(std::int64_t flat);

  bool is_father() const { return level_ < 0; }
  // Level of a wavelet. The father reports -1.
  int level() const { return level_; }
  std::int64_t shift() const { return shift_; }
  // Father -> 0, psi_{jh} -> 2^j + h.
  std::int64_t flat() const;

  friend bool operator==(const BasisIndex&, const BasisIndex&) = default;

 private:
  BasisIndex() = default;
  BasisIndex(int level, std::int64_t shift) : level_(level), shift_(shift) {}

  int level_ = -1;
  std::int64_t shift_ = 0;
};

// Sparse, finite table of basis coefficients keyed by flat index.
class CoefficientTable {
 public:
  using Map = std::map<std::int64_t, double>;

  void set(BasisIndex idx, double value) { entries_[idx.flat()] = value; }
  void set_flat(std::int64_t flat, double value);
  // Missing entries read as zero.
  double get(BasisIndex idx) const { return get_flat(idx.flat()); }
  double get_flat(std::int64_t flat) const;
  void erase_flat(std::int64_t flat) { entries_.erase(flat); }

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const Map& entries() const { return entries_; }

  // Highest wavelet level with a stored entry; -1 if only phi (or nothing)
  // is stored.
  int max_level() const;

  // Sum of squared coefficients; equal to the squared L2 norm of the
  // synthesized function by orthonormality.
  double squared_norm() const;

  CoefficientTable scaled(double factor) const;

  friend bool operator==(const CoefficientTable&,
                         const CoefficientTable&) = default;

 private:
  Map entries_;
};

// Piecewise-constant function on the uniform dyadic partition of [0, 1]
// into 2^resolution cells. Every Haar table of max level J is exactly such a
// function with resolution J + 1.
class DyadicStepFunction {
 public:
  DyadicStepFunction(int resolution, std::vector<double> cell_values);

  int resolution() const { return resolution_; }
  std::size_t cell_count() const { return values_.size(); }
  double cell_width() const;
  std::span<const double> values() const { return values_; }

  // Value at t in [0, 1]; zero outside.
  double operator()(double t) const;

  double integral() const;
  double integral_of_square() const;
  double min() const;
  double max() const;

 private:
  int resolution_;
  std::vector<double> values_;
};

// Index of the dyadic cell (k 2^-resolution, (k+1) 2^-resolution] holding t,
// with t = 0 mapped to cell 0. Requires t in [0, 1].
std::size_t dyadic_cell(double t, int resolution);

struct SieveSpec {
  // Number of active wavelets; a power of two.
  std::int64_t d = 1;
  double C0 = 0.0;
  double sieve_amplitude = 1.0;
  // Signs in {-1, +1}, one per active wavelet.
  std::vector<int> beta;
  double r = 0.5;
};

double eval_basis(BasisIndex idx, double t);

// Exact coefficients of a dyadic step function up to j_max. Requires
// f.resolution() >= j_max + 1 for exactness; coarser functions are refined.
CoefficientTable analyze(const DyadicStepFunction& f, int j_max);

// Coefficients of an arbitrary bounded function through dyadic midpoint
// quadrature at level j_max + 10. Exact for step functions whose breakpoints
// lie on that grid.
CoefficientTable analyze(const std::function<double(double)>& f, int j_max);

double synthesize(const CoefficientTable& c, double t);

// Dense piecewise-constant form of a table. Resolution is
// max(max_level + 1, min_resolution).
DyadicStepFunction to_step_function(const CoefficientTable& c,
                                    int min_resolution = 0);

// Besov B^r_{2,2} norm; phi is counted at level 0.
double besov_norm(const CoefficientTable& c, double r);

CoefficientTable make_sieve(const SieveSpec& spec);

// Deterministic member of the Besov ball used by the rate experiments.
//   kind "zero":  {phi: C0}
//   kind "rough": f_{jh} = s_{jh} c 2^{-j(r + 1/2 + 0.01)} for j <= 14,
//                 c chosen so that besov_norm = 0.9 L before the C0 shift.
// Throws DomainError for r outside (0, 1) or L <= 0, ConfigError for an
// unknown kind.
CoefficientTable make_test_function(std::string_view kind, double r, double L,
                                    double C0);

inline constexpr int kTestFunctionMaxLevel = 14;
inline constexpr double kTestFunctionDecayBuffer = 0.01;

// CSV with header "j,h,value"; phi is written as j = -1, h = 0.
void write_table_csv(std::ostream& out, const CoefficientTable& c);
CoefficientTable read_table_csv(std::istream& in);

}  // namespace bassim

#endif  // BASSIM_WAVELETS_HPP_
