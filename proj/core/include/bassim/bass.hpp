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

// Bit-adjusted sample size and the quantities derived from it.
//
// With N = n m and every logarithm taken base 2, the bit-adjusted sample
// size is the unique x with
//
//   x = max( n log N, n sum_k min(B_k log N / x^{1/(1+2r)}, 1) ).
//
// The left side increases and the right side decreases in x, so bisection
// on [n log N, max(N, n log N)] always converges.

#ifndef BASSIM_BASS_HPP_
#define BASSIM_BASS_HPP_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace bassim {

enum class Regime { kFull, kIntermediate, kLocal };

std::string_view to_string(Regime regime);

struct NetworkConfig {
  std::int64_t n = 2;
  std::int64_t m = 1;
  // One non-negative (possibly infinite) budget per machine, in bits.
  std::vector<double> budgets;
  double r = 0.5;

  static NetworkConfig symmetric(std::int64_t n, std::int64_t m, double B,
                                 double r);

  double total_samples() const { return static_cast<double>(n * m); }
  // Throws ConfigError when an invariant is violated.
  void validate() const;
};

struct BassResult {
  double value = 0.0;
  // Set only when all budgets are equal.
  std::optional<Regime> regime;
  // (x - rhs(x)) / x at the returned value.
  double residual = 0.0;
};

inline constexpr double kBisectionRelTol = 1e-12;
inline constexpr int kBisectionMaxIter = 200;

double log2_total(std::int64_t n, std::int64_t m);

BassResult bass_general(const NetworkConfig& cfg);

BassResult bass_symmetric(std::int64_t n, std::int64_t m, double B, double r);

// Budget thresholds separating the three regimes of the symmetric case.
struct RegimeThresholds {
  // B below this: local regime.
  double local_below;
  // B at or above this: full regime.
  double full_at;
};
RegimeThresholds regime_thresholds(std::int64_t n, std::int64_t m, double r);

// epsilon(n, m, B) = N_bass^{-r/(1+2r)}.
double minimax_rate(std::int64_t n, std::int64_t m, double B, double r);

// Number of machines that share one block of coefficients.
std::int64_t block_size_kappa(double B, std::int64_t n, std::int64_t m,
                              double r);

// floor(log2(n kappa) / (1 + 2r)).
int max_resolution(std::int64_t n, std::int64_t kappa, double r);

}  // namespace bassim

#endif  // BASSIM_BASS_HPP_
