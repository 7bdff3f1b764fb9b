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

// Data-generating models and their local wavelet-coefficient estimators.
//
// Regression-type models draw T ~ Unif(0, 1) and X | T from
//   gaussian_regression        N(f(T), 1)
//   binary_regression          Bernoulli(f(T))
//   poisson_regression         Poisson(f(T))
//   heteroskedastic_regression N(0, f(T))      (f is the variance)
// and estimate f_{jh} by (1/n) sum h(X_i) psi_{jh}(T_i), with h(x) = x^2 for
// the heteroskedastic model and h(x) = x otherwise. The density model draws
// X directly from the density f and uses (1/n) sum psi_{jh}(X_i).

#ifndef BASSIM_MODELS_HPP_
#define BASSIM_MODELS_HPP_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bassim/rng.hpp"
#include "bassim/wavelets.hpp"

namespace bassim {

enum class ModelKind {
  kGaussianRegression,
  kDensity,
  kBinaryRegression,
  kPoissonRegression,
  kHeteroskedasticRegression,
};

inline constexpr ModelKind kAllModels[] = {
    ModelKind::kGaussianRegression, ModelKind::kDensity,
    ModelKind::kBinaryRegression, ModelKind::kPoissonRegression,
    ModelKind::kHeteroskedasticRegression};

std::string_view to_string(ModelKind kind);
// Throws ConfigError for unknown names.
ModelKind parse_model_kind(std::string_view name);

struct ConstraintViolation {
  // Human-readable statement of the violated bound, e.g. "f <= 1".
  std::string bound;
  // Offending value (minimum, maximum or father coefficient).
  double observed = 0.0;
};

// Checks the range constraints of `kind` exactly on the piecewise-constant
// synthesis of `f`. Never throws for finite tables.
std::optional<ConstraintViolation> validate_function(ModelKind kind,
                                                     const CoefficientTable& f);

// A validated model. Cheap to copy; the dense evaluator is shared.
class ModelSpec {
 public:
  // Throws ConfigError when `f` violates the constraints of `kind`.
  ModelSpec(ModelKind kind, CoefficientTable f);

  ModelKind kind() const { return kind_; }
  const CoefficientTable& truth() const { return *truth_; }
  const DyadicStepFunction& evaluator() const { return *evaluator_; }
  double min_value() const { return min_; }
  double max_value() const { return max_; }
  // Cumulative cell masses of the density on evaluator()'s partition; empty
  // for regression models.
  const std::vector<double>& density_cdf() const { return *cdf_; }

 private:
  ModelKind kind_;
  std::shared_ptr<const CoefficientTable> truth_;
  std::shared_ptr<const DyadicStepFunction> evaluator_;
  // Cumulative cell masses for density sampling; empty for other models.
  std::shared_ptr<const std::vector<double>> cdf_;
  double min_ = 0.0;
  double max_ = 0.0;
};

struct LocalDataset {
  ModelKind kind = ModelKind::kGaussianRegression;
  // Design points; empty for the density model.
  std::vector<double> t;
  std::vector<double> x;

  std::size_t n() const { return x.size(); }
};

LocalDataset sample(const ModelSpec& spec, std::int64_t n, PhiloxStream& rng);

// Single coefficient estimate. Throws DomainError for an empty dataset.
double local_coefficient_estimate(const ModelSpec& spec,
                                  const LocalDataset& data, BasisIndex idx);

// Estimates of every coefficient with flat index < flat_end, indexed by flat
// index. One pass over the data.
std::vector<double> local_coefficient_estimates(ModelKind kind,
                                                const LocalDataset& data,
                                                std::int64_t flat_end);

// CSV "t,x" (density: "x").
void write_dataset_csv(std::ostream& out, const LocalDataset& data);

}  // namespace bassim

#endif  // BASSIM_MODELS_HPP_
