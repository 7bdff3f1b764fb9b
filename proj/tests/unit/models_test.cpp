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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "bassim/errors.hpp"
#include "bassim/rng.hpp"
#include "oracles.hpp"

namespace bassim {
namespace {

CoefficientTable constant(double c) {
  CoefficientTable t;
  t.set(BasisIndex::father(), c);
  return t;
}

CoefficientTable tilted_density() {
  CoefficientTable t = constant(1.0);
  t.set(BasisIndex::wavelet(1, 0), 0.5);
  return t;
}

TEST(ModelKindTest, NamesRoundTrip) {
  for (ModelKind kind : kAllModels) {
    EXPECT_EQ(parse_model_kind(to_string(kind)), kind);
  }
  EXPECT_EQ(parse_model_kind("gaussian"), ModelKind::kGaussianRegression);
  EXPECT_EQ(parse_model_kind("density"), ModelKind::kDensity);
  EXPECT_THROW(parse_model_kind("cauchy"), ConfigError);
}

TEST(ValidateFunctionTest, DocumentedCases) {
  const auto binary = validate_function(ModelKind::kBinaryRegression, constant(1.5));
  ASSERT_TRUE(binary.has_value());
  EXPECT_EQ(binary->bound, "f <= 1");
  EXPECT_EQ(binary->observed, 1.5);

  EXPECT_FALSE(validate_function(ModelKind::kDensity, tilted_density()).has_value());
  EXPECT_NEAR(ModelSpec(ModelKind::kDensity, tilted_density()).min_value(),
              1.0 - 0.5 * std::sqrt(2.0), 1e-15);

  const auto poisson = validate_function(ModelKind::kPoissonRegression, constant(0.0));
  ASSERT_TRUE(poisson.has_value());
  EXPECT_EQ(poisson->bound, "f > 0");
}

TEST(ValidateFunctionTest, OtherBounds) {
  EXPECT_FALSE(validate_function(ModelKind::kGaussianRegression, constant(-7.0)));
  EXPECT_TRUE(validate_function(ModelKind::kDensity, constant(2.0)));
  CoefficientTable negative = constant(1.0);
  negative.set(BasisIndex::wavelet(0, 0), 1.5);
  EXPECT_TRUE(validate_function(ModelKind::kDensity, negative));
  EXPECT_TRUE(validate_function(ModelKind::kHeteroskedasticRegression, constant(-1.0)));
  EXPECT_TRUE(validate_function(ModelKind::kBinaryRegression, constant(-0.1)));
  EXPECT_THROW(ModelSpec(ModelKind::kBinaryRegression, constant(2.0)), ConfigError);
}

TEST(SampleTest, GaussianZeroMean) {
  const ModelSpec spec(ModelKind::kGaussianRegression, CoefficientTable{});
  PhiloxStream rng(1, 0);
  const LocalDataset data = sample(spec, 100000, rng);
  ASSERT_EQ(data.n(), 100000u);
  ASSERT_EQ(data.t.size(), 100000u);
  double mean = 0.0;
  for (std::size_t i = 0; i < data.n(); ++i) {
    ASSERT_GE(data.t[i], 0.0);
    ASSERT_LE(data.t[i], 1.0);
    mean += data.x[i];
  }
  mean /= 1e5;
  EXPECT_LE(std::abs(mean), 4.0 / std::sqrt(1e5));
}

TEST(SampleTest, PoissonUnitMean) {
  const ModelSpec spec(ModelKind::kPoissonRegression, constant(1.0));
  PhiloxStream rng(2, 0);
  const LocalDataset data = sample(spec, 100000, rng);
  double mean = 0.0;
  for (double x : data.x) {
    ASSERT_EQ(x, std::floor(x));
    mean += x;
  }
  mean /= 1e5;
  EXPECT_LE(std::abs(mean - 1.0), 4.0 / std::sqrt(1e5));
}

TEST(SampleTest, BinaryAndHeteroskedasticMoments) {
  PhiloxStream rng(3, 0);
  const LocalDataset b = sample(ModelSpec(ModelKind::kBinaryRegression, constant(0.3)), 100000, rng);
  double mean = 0.0;
  for (double x : b.x) {
    ASSERT_TRUE(x == 0.0 || x == 1.0);
    mean += x;
  }
  EXPECT_NEAR(mean / 1e5, 0.3, 4.0 * std::sqrt(0.21 / 1e5));

  const LocalDataset h =
      sample(ModelSpec(ModelKind::kHeteroskedasticRegression, constant(2.0)), 100000, rng);
  double sq = 0.0;
  for (double x : h.x) sq += x * x;
  // Var(X^2) = 2 sigma^4 = 8.
  EXPECT_NEAR(sq / 1e5, 2.0, 4.0 * std::sqrt(8.0 / 1e5));
}

TEST(SampleTest, DensityFirstQuarterMass) {
  const ModelSpec spec(ModelKind::kDensity, tilted_density());
  PhiloxStream rng(4, 0);
  const std::int64_t n = 100000;
  const LocalDataset data = sample(spec, n, rng);
  EXPECT_TRUE(data.t.empty());
  double hits = 0;
  for (double x : data.x) {
    ASSERT_GE(x, 0.0);
    ASSERT_LE(x, 1.0);
    hits += x < 0.25;
  }
  const double p = 0.25 + 0.5 * std::sqrt(2.0) / 4.0;
  EXPECT_NEAR(hits / n, p, 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST(SampleTest, DensityHistogramAtLevelThree) {
  const CoefficientTable f = make_test_function("rough", 0.5, 1.0, 1.0);
  const ModelSpec spec(ModelKind::kDensity, f);
  const DyadicStepFunction coarse = to_step_function(f);
  std::vector<double> prob(8, 0.0);
  const std::size_t per = coarse.cell_count() / 8;
  for (std::size_t c = 0; c < coarse.cell_count(); ++c) {
    prob[c / per] += coarse.values()[c] * coarse.cell_width();
  }
  PhiloxStream rng(5, 0);
  const std::int64_t n = 200000;
  const LocalDataset data = sample(spec, n, rng);
  std::vector<double> counts(8, 0.0);
  for (double x : data.x) counts[dyadic_cell(x, 3)] += 1;
  for (int c = 0; c < 8; ++c) {
    const double p = prob[static_cast<std::size_t>(c)];
    EXPECT_NEAR(counts[static_cast<std::size_t>(c)] / n, p, 4.0 * std::sqrt(p * (1 - p) / n))
        << "cell " << c;
  }
}

TEST(SampleTest, DeterministicForFixedStream) {
  const ModelSpec spec(ModelKind::kPoissonRegression, constant(3.0));
  PhiloxStream a(99, 4), b(99, 4);
  const LocalDataset x = sample(spec, 500, a);
  const LocalDataset y = sample(spec, 500, b);
  EXPECT_EQ(x.t, y.t);
  EXPECT_EQ(x.x, y.x);
}

TEST(LocalEstimateTest, DocumentedValues) {
  const ModelSpec gauss(ModelKind::kGaussianRegression, CoefficientTable{});
  LocalDataset d{ModelKind::kGaussianRegression, {0.25}, {2.0}};
  EXPECT_EQ(local_coefficient_estimate(gauss, d, BasisIndex::wavelet(0, 0)), 2.0);

  const ModelSpec het(ModelKind::kHeteroskedasticRegression, constant(1.0));
  LocalDataset hd{ModelKind::kHeteroskedasticRegression, {0.25}, {2.0}};
  EXPECT_EQ(local_coefficient_estimate(het, hd, BasisIndex::wavelet(0, 0)), 4.0);

  const ModelSpec dens(ModelKind::kDensity, constant(1.0));
  LocalDataset dd{ModelKind::kDensity, {}, {0.25}};
  EXPECT_DOUBLE_EQ(local_coefficient_estimate(dens, dd, BasisIndex::wavelet(1, 0)),
                   std::sqrt(2.0));
}

TEST(LocalEstimateTest, EmptyDatasetThrows) {
  const ModelSpec gauss(ModelKind::kGaussianRegression, CoefficientTable{});
  EXPECT_THROW(local_coefficient_estimate(gauss, LocalDataset{}, BasisIndex::father()),
               DomainError);
  EXPECT_THROW(local_coefficient_estimates(ModelKind::kGaussianRegression, LocalDataset{}, 4),
               DomainError);
}

// The one-pass estimator must agree with the direct per-index sum, which
// is checked here against the Haar definition oracle.
TEST(LocalEstimateTest, BatchMatchesDirectSums) {
  for (ModelKind kind : kAllModels) {
    const double c0 = kind == ModelKind::kBinaryRegression ? 0.5
                      : kind == ModelKind::kGaussianRegression ? 0.0
                      : kind == ModelKind::kPoissonRegression ? 2.0
                                                              : 1.0;
    const double L = kind == ModelKind::kBinaryRegression ? 0.5 : 1.0;
    const ModelSpec spec(kind, make_test_function("rough", 0.5, L, c0));
    PhiloxStream rng(6, static_cast<std::uint32_t>(kind));
    const LocalDataset data = sample(spec, 300, rng);
    const std::vector<double> batch = local_coefficient_estimates(kind, data, 64);
    ASSERT_EQ(batch.size(), 64u);
    const std::vector<double>& design = kind == ModelKind::kDensity ? data.x : data.t;
    for (std::int64_t flat = 0; flat < 64; ++flat) {
      const BasisIndex idx = BasisIndex::from_flat(flat);
      long double direct = 0;
      for (std::size_t i = 0; i < data.n(); ++i) {
        const double psi =
            idx.is_father() ? 1.0 : oracle::haar(idx.level(), idx.shift(), design[i]);
        const double h = kind == ModelKind::kDensity ? 1.0
                         : kind == ModelKind::kHeteroskedasticRegression
                             ? data.x[i] * data.x[i]
                             : data.x[i];
        direct += h * psi;
      }
      direct /= static_cast<long double>(data.n());
      ASSERT_NEAR(batch[static_cast<std::size_t>(flat)], static_cast<double>(direct), 1e-12)
          << to_string(kind) << " flat=" << flat;
      ASSERT_NEAR(local_coefficient_estimate(spec, data, idx), static_cast<double>(direct),
                  1e-12);
    }
  }
}

TEST(LocalEstimateTest, TruncationIsRare) {
  // |estimate| > sqrt(N) never happens for standard test functions.
  int events = 0;
  int total = 0;
  for (ModelKind kind : kAllModels) {
    const double c0 = kind == ModelKind::kBinaryRegression ? 0.5
                      : kind == ModelKind::kGaussianRegression ? 0.0
                      : kind == ModelKind::kPoissonRegression ? 2.0
                                                              : 1.0;
    const double L = kind == ModelKind::kBinaryRegression ? 0.5 : 1.0;
    const ModelSpec spec(kind, make_test_function("rough", 0.5, L, c0));
    for (std::uint32_t rep = 0; rep < 313; ++rep) {
      PhiloxStream rng(7, rep, static_cast<std::uint32_t>(kind));
      const LocalDataset data = sample(spec, 64, rng);
      for (double v : local_coefficient_estimates(kind, data, 64)) {
        events += std::abs(v) > std::sqrt(64.0 * 16.0);
        ++total;
      }
    }
  }
  EXPECT_GE(total, 100000);
  EXPECT_EQ(events, 0);
}

TEST(DatasetCsvTest, Headers) {
  std::ostringstream reg, dens;
  write_dataset_csv(reg, LocalDataset{ModelKind::kGaussianRegression, {0.5}, {1.25}});
  write_dataset_csv(dens, LocalDataset{ModelKind::kDensity, {}, {0.75}});
  EXPECT_EQ(reg.str(), "t,x\n0.5,1.25\n");
  EXPECT_EQ(dens.str(), "x\n0.75\n");
}

}  // namespace
}  // namespace bassim
