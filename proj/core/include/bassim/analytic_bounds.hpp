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

// Scalar inequalities used to control log-likelihood ratios, evaluated in
// long double so exact-equality boundary points compare correctly:
//
//   ratio              -1 <= x <= 1/2:
//                        1 + 2x + x^2 <= (1+x)/(1-x) <= 1 + 2x + 4x^2
//                        x^2 <= ((1+x)/(1-x) - 1)^2 <= 16 x^2
//   log_one_minus      |x| <= 1/2:   -x - x^2 <= log(1 - x)
//   log_ratio          |x| <= 1/2:   2x - 4x^2 <= log((1+x)/(1-x)) <= 2x + 4x^2
//   log_ratio_product  |x| <= 1/2:   0 <= x log((1+x)/(1-x)) <= 4x^2
//   log_squared        0 < x < sqrt(2):  (log x)^2 >= (x - 1)^2 / 2
//   log_ratio_squared  -1 < x < (sqrt(2)-1)/(sqrt(2)+1):
//                        (log((1+x)/(1-x)))^2 >= x^2 / 2
//
// and the sub-exponential bound for a centered Poisson variable,
// E exp(t (X - lambda)) <= exp(t^2 lambda) for |t| <= 1.

#ifndef BASSIM_ANALYTIC_BOUNDS_HPP_
#define BASSIM_ANALYTIC_BOUNDS_HPP_

#include <string_view>
#include <vector>

namespace bassim {

enum class BoundId {
  kRatio,
  kLogOneMinus,
  kLogRatio,
  kLogRatioProduct,
  kLogSquared,
  kLogRatioSquared,
  kPoissonMgf,
};

inline constexpr BoundId kScalarBounds[] = {
    BoundId::kRatio,           BoundId::kLogOneMinus,
    BoundId::kLogRatio,        BoundId::kLogRatioProduct,
    BoundId::kLogSquared,      BoundId::kLogRatioSquared};

std::string_view to_string(BoundId id);

// One comparison lhs <= rhs.
struct Inequality {
  long double lhs = 0;
  long double rhs = 0;
  bool holds() const { return lhs <= rhs; }
};

struct BoundCheck {
  BoundId bound_id = BoundId::kRatio;
  double x = 0.0;
  // Every comparison the bound consists of, in the order listed above.
  std::vector<Inequality> parts;
  bool holds = false;

  // Principal comparison (first part).
  long double lhs() const { return parts.front().lhs; }
  long double rhs() const { return parts.front().rhs; }
};

struct ValidityRange {
  double lo;
  double hi;
  bool lo_closed;
  bool hi_closed;

  bool contains(double x) const;
};

// Range on which the bound is claimed. Throws DomainError for kPoissonMgf,
// whose domain is two-dimensional.
ValidityRange validity_range(BoundId id);

// Throws DomainError when x lies outside validity_range(id).
BoundCheck scalar_bound_check(BoundId id, double x);

// t^2 lambda - (lambda (e^t - 1) - t lambda): gap between the bound and the
// exact log-MGF. Throws DomainError unless lambda > 0 and |t| <= 1.
double poisson_mgf_slack(double lambda, double t);

}  // namespace bassim

#endif  // BASSIM_ANALYTIC_BOUNDS_HPP_
