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

#include "bassim/models.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>
#include <random>

#include "bassim/csv.hpp"
#include "bassim/errors.hpp"

namespace bassim {
namespace {

constexpr double kDensityMassTolerance = 1e-12;

double transform(ModelKind kind, double x) {
  return kind == ModelKind::kHeteroskedasticRegression ? x * x : x;
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kGaussianRegression:
      return "gaussian_regression";
    case ModelKind::kDensity:
      return "density";
    case ModelKind::kBinaryRegression:
      return "binary_regression";
    case ModelKind::kPoissonRegression:
      return "poisson_regression";
    case ModelKind::kHeteroskedasticRegression:
      return "heteroskedastic_regression";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  for (ModelKind kind : kAllModels) {
    if (to_string(kind) == name) return kind;
  }
  // Short aliases for the CLI.
  if (name == "gaussian") return ModelKind::kGaussianRegression;
  if (name == "binary") return ModelKind::kBinaryRegression;
  if (name == "poisson") return ModelKind::kPoissonRegression;
  if (name == "heteroskedastic") return ModelKind::kHeteroskedasticRegression;
  throw ConfigError("unknown model '" + std::string(name) + "'");
}

std::optional<ConstraintViolation> validate_function(
    ModelKind kind, const CoefficientTable& f) {
  for (const auto& [flat, v] : f.entries()) {
    if (!std::isfinite(v)) return ConstraintViolation{"finite coefficients", v};
  }
  if (f.max_level() + 1 > kMaxDenseLevel) {
    return ConstraintViolation{"max level < " + std::to_string(kMaxDenseLevel),
                               static_cast<double>(f.max_level())};
  }
  const DyadicStepFunction step = to_step_function(f);
  const double lo = step.min();
  const double hi = step.max();
  switch (kind) {
    case ModelKind::kGaussianRegression:
      break;
    case ModelKind::kDensity: {
      const double mass = f.get(BasisIndex::father());
      if (std::abs(mass - 1.0) > kDensityMassTolerance) {
        return ConstraintViolation{"integral f = 1 (father coefficient 1)",
                                   mass};
      }
      if (lo < 0.0) return ConstraintViolation{"f >= 0", lo};
      break;
    }
    case ModelKind::kBinaryRegression:
      if (lo < 0.0) return ConstraintViolation{"f >= 0", lo};
      if (hi > 1.0) return ConstraintViolation{"f <= 1", hi};
      break;
    case ModelKind::kPoissonRegression:
    case ModelKind::kHeteroskedasticRegression:
      if (!(lo > 0.0)) return ConstraintViolation{"f > 0", lo};
      break;
  }
  return std::nullopt;
}

ModelSpec::ModelSpec(ModelKind kind, CoefficientTable f) : kind_(kind) {
  if (auto violation = validate_function(kind, f)) {
    throw ConfigError(std::string(to_string(kind)) +
                      ": test function violates " + violation->bound +
                      " (observed " + csv::format_number(violation->observed) +
                      ")");
  }
  auto step = std::make_shared<DyadicStepFunction>(to_step_function(f));
  min_ = step->min();
  max_ = step->max();
  std::vector<double> cdf;
  if (kind == ModelKind::kDensity) {
    cdf.reserve(step->cell_count());
    double running = 0.0;
    const double width = step->cell_width();
    for (double v : step->values()) {
      running += v * width;
      cdf.push_back(running);
    }
  }
  truth_ = std::make_shared<const CoefficientTable>(std::move(f));
  evaluator_ = std::move(step);
  cdf_ = std::make_shared<const std::vector<double>>(std::move(cdf));
}

LocalDataset sample(const ModelSpec& spec, std::int64_t n, PhiloxStream& rng) {
  if (n < 0) throw DomainError("sample size must be non-negative");
  LocalDataset data;
  data.kind = spec.kind();
  const auto count = static_cast<std::size_t>(n);
  data.x.reserve(count);
  const DyadicStepFunction& f = spec.evaluator();

  if (spec.kind() == ModelKind::kDensity) {
    // Exact inverse CDF: pick a cell by mass, then a uniform point inside.
    const std::vector<double>& cdf = spec.density_cdf();
    const double total = cdf.back();
    const double width = f.cell_width();
    for (std::size_t i = 0; i < count; ++i) {
      const double u = rng.uniform01() * total;
      auto cell = static_cast<std::size_t>(
          std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      cell = std::min(cell, cdf.size() - 1);
      // 1 - U lies in (0, 1], matching the right-closed cell convention.
      const double offset = 1.0 - rng.uniform01();
      data.x.push_back((static_cast<double>(cell) + offset) * width);
    }
    return data;
  }

  data.t.reserve(count);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = rng.uniform01();
    const double ft = f(t);
    double x = 0.0;
    switch (spec.kind()) {
      case ModelKind::kGaussianRegression:
        x = ft + normal(rng);
        break;
      case ModelKind::kBinaryRegression:
        x = rng.uniform01() < ft ? 1.0 : 0.0;
        break;
      case ModelKind::kPoissonRegression:
        x = static_cast<double>(std::poisson_distribution<long>(ft)(rng));
        break;
      case ModelKind::kHeteroskedasticRegression:
        x = std::sqrt(ft) * normal(rng);
        break;
      case ModelKind::kDensity:
        break;
    }
    data.t.push_back(t);
    data.x.push_back(x);
  }
  return data;
}

double local_coefficient_estimate(const ModelSpec& spec,
                                  const LocalDataset& data, BasisIndex idx) {
  if (data.n() == 0) throw DomainError("empty dataset");
  const bool density = spec.kind() == ModelKind::kDensity;
  double sum = 0.0;
  for (std::size_t i = 0; i < data.n(); ++i) {
    if (density) {
      sum += eval_basis(idx, data.x[i]);
    } else {
      sum += transform(spec.kind(), data.x[i]) * eval_basis(idx, data.t[i]);
    }
  }
  return sum / static_cast<double>(data.n());
}

std::vector<double> local_coefficient_estimates(ModelKind kind,
                                                const LocalDataset& data,
                                                std::int64_t flat_end) {
  if (data.n() == 0) throw DomainError("empty dataset");
  if (flat_end <= 0) return {};
  std::vector<double> acc(static_cast<std::size_t>(flat_end), 0.0);
  const int top_level =
      flat_end == 1
          ? -1
          : static_cast<int>(std::bit_width(
                static_cast<std::uint64_t>(flat_end - 1))) - 1;
  if (top_level + 1 > 52) {
    throw DomainError("requested resolution too fine");
  }
  const bool density = kind == ModelKind::kDensity;

  for (std::size_t i = 0; i < data.n(); ++i) {
    const double position = density ? data.x[i] : data.t[i];
    const double weight = density ? 1.0 : transform(kind, data.x[i]);
    acc[0] += weight;
    if (top_level < 0) continue;
    // Finest cell index at level top_level + 1 determines all coarser ones.
    const std::uint64_t cell = dyadic_cell(position, top_level + 1);
    for (int level = 0; level <= top_level; ++level) {
      const std::uint64_t shift = cell >> (top_level + 1 - level);
      const auto flat = static_cast<std::int64_t>((std::uint64_t{1} << level) +
                                                  shift);
      if (flat >= flat_end) break;
      const bool right_half = (cell >> (top_level - level)) & 1u;
      acc[static_cast<std::size_t>(flat)] += right_half ? -weight : weight;
    }
  }

  const double inv_n = 1.0 / static_cast<double>(data.n());
  acc[0] *= inv_n;
  for (std::int64_t flat = 1; flat < flat_end; ++flat) {
    const int level = BasisIndex::from_flat(flat).level();
    acc[static_cast<std::size_t>(flat)] *=
        std::sqrt(std::ldexp(1.0, level)) * inv_n;
  }
  return acc;
}

void write_dataset_csv(std::ostream& out, const LocalDataset& data) {
  const bool density = data.kind == ModelKind::kDensity;
  out << (density ? "x\n" : "t,x\n");
  for (std::size_t i = 0; i < data.n(); ++i) {
    if (!density) out << csv::format_number(data.t[i]) << ',';
    out << csv::format_number(data.x[i]) << '\n';
  }
}

}  // namespace bassim
