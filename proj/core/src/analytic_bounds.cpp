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

#include "bassim/analytic_bounds.hpp"

#include <cmath>
#include <string>

#include "bassim/errors.hpp"

namespace bassim {
namespace {

using Real = long double;

// log((1+x)/(1-x)) without forming the quotient.
Real log_ratio(Real x) { return std::log1p(x) - std::log1p(-x); }

}  // namespace

std::string_view to_string(BoundId id) {
  switch (id) {
    case BoundId::kRatio:
      return "ratio";
    case BoundId::kLogOneMinus:
      return "log_one_minus";
    case BoundId::kLogRatio:
      return "log_ratio";
    case BoundId::kLogRatioProduct:
      return "log_ratio_product";
    case BoundId::kLogSquared:
      return "log_squared";
    case BoundId::kLogRatioSquared:
      return "log_ratio_squared";
    case BoundId::kPoissonMgf:
      return "poisson_mgf";
  }
  return "unknown";
}

bool ValidityRange::contains(double x) const {
  const bool above = lo_closed ? x >= lo : x > lo;
  const bool below = hi_closed ? x <= hi : x < hi;
  return above && below;
}

ValidityRange validity_range(BoundId id) {
  const double sqrt2 = std::sqrt(2.0);
  switch (id) {
    case BoundId::kRatio:
      return {-1.0, 0.5, true, true};
    case BoundId::kLogOneMinus:
    case BoundId::kLogRatio:
    case BoundId::kLogRatioProduct:
      return {-0.5, 0.5, true, true};
    case BoundId::kLogSquared:
      return {0.0, sqrt2, false, false};
    case BoundId::kLogRatioSquared:
      return {-1.0, (sqrt2 - 1.0) / (sqrt2 + 1.0), false, false};
    case BoundId::kPoissonMgf:
      break;
  }
  throw DomainError("no scalar validity range for " + std::string(to_string(id)));
}

BoundCheck scalar_bound_check(BoundId id, double x) {
  if (!validity_range(id).contains(x)) {
    throw DomainError(std::string(to_string(id)) +
                      " bound is not claimed at x = " + std::to_string(x));
  }
  const Real v = x;
  BoundCheck check;
  check.bound_id = id;
  check.x = x;
  switch (id) {
    case BoundId::kRatio: {
      const Real ratio = (1 + v) / (1 - v);
      // ratio - 1 = 2x / (1 - x), exact up to one rounding.
      const Real excess = 2 * v / (1 - v);
      check.parts = {{1 + 2 * v + v * v, ratio},
                     {ratio, 1 + 2 * v + 4 * v * v},
                     {v * v, excess * excess},
                     {excess * excess, 16 * v * v}};
      break;
    }
    case BoundId::kLogOneMinus:
      check.parts = {{-v - v * v, std::log1p(-v)}};
      break;
    case BoundId::kLogRatio: {
      const Real lr = log_ratio(v);
      check.parts = {{2 * v - 4 * v * v, lr}, {lr, 2 * v + 4 * v * v}};
      break;
    }
    case BoundId::kLogRatioProduct: {
      const Real p = v * log_ratio(v);
      check.parts = {{0, p}, {p, 4 * v * v}};
      break;
    }
    case BoundId::kLogSquared: {
      // x - 1 is exact near 1, so log1p keeps full relative precision there.
      const Real lg = std::log1p(v - 1);
      check.parts = {{(v - 1) * (v - 1) / 2, lg * lg}};
      break;
    }
    case BoundId::kLogRatioSquared: {
      const Real lr = log_ratio(v);
      check.parts = {{v * v / 2, lr * lr}};
      break;
    }
    case BoundId::kPoissonMgf:
      break;
  }
  check.holds = true;
  for (const Inequality& part : check.parts) check.holds &= part.holds();
  return check;
}

double poisson_mgf_slack(double lambda, double t) {
  if (!(lambda > 0.0) || std::isinf(lambda)) {
    throw DomainError("Poisson mean must be positive and finite");
  }
  if (!(std::abs(t) <= 1.0)) {
    throw DomainError("sub-exponential bound only claimed for |t| <= 1");
  }
  const Real l = lambda;
  const Real s = t;
  // log E exp(t (X - lambda)) = lambda (e^t - 1 - t).
  const Real log_mgf = l * (std::expm1(s) - s);
  return static_cast<double>(s * s * l - log_mgf);
}

}  // namespace bassim
