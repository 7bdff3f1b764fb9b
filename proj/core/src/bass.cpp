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

#include "bassim/bass.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bassim/errors.hpp"

namespace bassim {
namespace {

// Right-hand side of the fixed-point equation.
double fixed_point_rhs(const NetworkConfig& cfg, double log_n_total,
                       double x) {
  const double n = static_cast<double>(cfg.n);
  const double damp = std::pow(x, 1.0 / (1.0 + 2.0 * cfg.r));
  double sum = 0.0;
  for (double b : cfg.budgets) {
    sum += std::isinf(b) ? 1.0 : std::min(b * log_n_total / damp, 1.0);
  }
  return std::max(n * log_n_total, n * sum);
}

bool all_equal(const std::vector<double>& v) {
  return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) ==
         v.end();
}

Regime classify(std::int64_t n, std::int64_t m, double B, double r) {
  const double L = log2_total(n, m);
  if (static_cast<double>(m) < L) return Regime::kLocal;
  const RegimeThresholds t = regime_thresholds(n, m, r);
  if (B >= t.full_at) return Regime::kFull;
  if (B < t.local_below) return Regime::kLocal;
  return Regime::kIntermediate;
}

}  // namespace

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::kFull:
      return "full";
    case Regime::kIntermediate:
      return "intermediate";
    case Regime::kLocal:
      return "local";
  }
  return "unknown";
}

NetworkConfig NetworkConfig::symmetric(std::int64_t n, std::int64_t m,
                                       double B, double r) {
  NetworkConfig cfg;
  cfg.n = n;
  cfg.m = m;
  cfg.r = r;
  cfg.budgets.assign(static_cast<std::size_t>(std::max<std::int64_t>(m, 0)), B);
  return cfg;
}

void NetworkConfig::validate() const {
  if (n < 2) throw ConfigError("local sample size n must be >= 2");
  if (m < 1) throw ConfigError("machine count m must be >= 1");
  if (n * m < 4) throw ConfigError("total sample size N = n m must be >= 4");
  if (!(r > 0.0) || std::isinf(r)) {
    throw ConfigError("smoothness r must be a positive real");
  }
  if (budgets.size() != static_cast<std::size_t>(m)) {
    throw ConfigError("expected one budget per machine (" + std::to_string(m) +
                      "), got " + std::to_string(budgets.size()));
  }
  for (double b : budgets) {
    if (!(b >= 0.0)) throw ConfigError("budgets must be non-negative");
  }
}

double log2_total(std::int64_t n, std::int64_t m) {
  return std::log2(static_cast<double>(n) * static_cast<double>(m));
}

BassResult bass_general(const NetworkConfig& cfg) {
  cfg.validate();
  const double L = log2_total(cfg.n, cfg.m);
  const double floor_value = static_cast<double>(cfg.n) * L;
  double lo = floor_value;
  double hi = std::max(cfg.total_samples(), floor_value);

  auto gap = [&](double x) { return x - fixed_point_rhs(cfg, L, x); };

  if (gap(lo) < 0.0) {
    for (int iter = 0; iter < kBisectionMaxIter; ++iter) {
      if (hi - lo <= kBisectionRelTol * hi) break;
      const double mid = 0.5 * (lo + hi);
      if (gap(mid) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
  } else {
    hi = lo;
  }

  BassResult result;
  result.value = hi;
  result.residual = gap(hi) / hi;
  if (all_equal(cfg.budgets)) {
    result.regime = classify(cfg.n, cfg.m, cfg.budgets.front(), cfg.r);
  }
  return result;
}

RegimeThresholds regime_thresholds(std::int64_t n, std::int64_t m, double r) {
  const double L = log2_total(n, m);
  const double a = 1.0 / (1.0 + 2.0 * r);
  const double local_below =
      std::pow(static_cast<double>(n) * L, a) / static_cast<double>(m);
  const double full_at =
      std::pow(static_cast<double>(n) * static_cast<double>(m), a) / L;
  return {local_below, full_at};
}

BassResult bass_symmetric(std::int64_t n, std::int64_t m, double B, double r) {
  const NetworkConfig cfg = NetworkConfig::symmetric(n, m, B, r);
  cfg.validate();
  const double L = log2_total(n, m);
  const double N = cfg.total_samples();

  BassResult result;
  result.regime = classify(n, m, B, r);
  switch (*result.regime) {
    case Regime::kFull:
      result.value = N;
      break;
    case Regime::kLocal:
      result.value = static_cast<double>(n) * L;
      break;
    case Regime::kIntermediate:
      result.value = std::pow(N * B * L, (1.0 + 2.0 * r) / (2.0 + 2.0 * r));
      break;
  }
  result.residual =
      (result.value - fixed_point_rhs(cfg, L, result.value)) / result.value;
  return result;
}

double minimax_rate(std::int64_t n, std::int64_t m, double B, double r) {
  return std::pow(bass_symmetric(n, m, B, r).value, -r / (1.0 + 2.0 * r));
}

std::int64_t block_size_kappa(double B, std::int64_t n, std::int64_t m,
                              double r) {
  if (!(B >= 0.0)) throw ConfigError("budget must be non-negative");
  if (n < 1 || m < 1 || n * m < 4) throw ConfigError("need n m >= 4");
  const double q_eff = B / log2_total(n, m);
  const double raw =
      std::pow(q_eff * static_cast<double>(m),
               (1.0 + 2.0 * r) / (2.0 + 2.0 * r)) *
      std::pow(static_cast<double>(n), -1.0 / (2.0 + 2.0 * r));
  if (raw >= static_cast<double>(m)) return m;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(raw)));
}

int max_resolution(std::int64_t n, std::int64_t kappa, double r) {
  if (n * kappa < 1) throw DomainError("need n kappa >= 1");
  const double level =
      std::log2(static_cast<double>(n) * static_cast<double>(kappa)) /
      (1.0 + 2.0 * r);
  // Absorb rounding in the division so exact multiples are not lost.
  return static_cast<int>(std::floor(level + 1e-9));
}

}  // namespace bassim
