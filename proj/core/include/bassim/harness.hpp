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

// Experiment driver: single runs, replicated parameter sweeps, log-log slope
// fits and static SVG charts.

#ifndef BASSIM_HARNESS_HPP_
#define BASSIM_HARNESS_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bassim/bass.hpp"
#include "bassim/models.hpp"
#include "bassim/protocol.hpp"

namespace bassim {

// ---------------------------------------------------------------------------
// Configuration

// "key = value" lines with dotted keys; '#' starts a comment. Throws
// ParseError on malformed lines or duplicate keys.
using FlatConfig = std::map<std::string, std::string>;
FlatConfig parse_flat_config(std::istream& in);

struct TestFunctionSpec {
  std::string kind = "rough";
  double r = 0.5;
  double L = 1.0;
  double C0 = 0.0;

  CoefficientTable build() const;
};

struct GridPoint {
  std::int64_t n = 0;
  std::int64_t m = 0;
  double B = 0.0;
};

struct SweepConfig {
  ModelKind model = ModelKind::kGaussianRegression;
  TestFunctionSpec function;
  std::vector<std::int64_t> n_values;
  std::vector<std::int64_t> m_values;
  std::vector<double> B_values;
  std::int64_t replicates = 1;
  std::optional<std::uint64_t> seed;
  std::string results_path = "results.csv";
  std::string summary_path = "summary.csv";
  // 0 = hardware concurrency.
  unsigned threads = 0;

  // Recognised keys: model, function.{kind,r,L,C0}, grid.{n,m,B} (comma
  // separated lists), replicates, seed, output.{results,summary}, threads.
  // Throws ConfigError on unknown keys or bad values.
  static SweepConfig from_flat(const FlatConfig& flat);

  // Cartesian product, n outermost, B innermost.
  std::vector<GridPoint> grid() const;

  // Throws ConfigError naming the violated constraint.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Single runs

inline const std::vector<std::string> kRunColumns = {
    "model", "r",        "n",        "m",        "B",        "kappa", "j_n",
    "nbass", "rate_pred", "mse_trunc", "mse_tail", "max_bits", "seed"};

inline const std::vector<std::string> kBassColumns = {"n", "m",     "B",
                                                      "r", "nbass", "regime"};

struct RunRow {
  ModelKind model = ModelKind::kGaussianRegression;
  double r = 0.0;
  std::int64_t n = 0;
  std::int64_t m = 0;
  double B = 0.0;
  std::int64_t kappa = 1;
  int j_n = 0;
  double nbass = 0.0;
  Regime regime = Regime::kLocal;
  // Squared minimax rate, comparable with the reported MSE.
  double rate_pred = 0.0;
  double mse_trunc = 0.0;
  double mse_tail = 0.0;
  std::int64_t max_bits = 0;
  std::uint64_t seed = 0;

  std::vector<std::string> fields() const;
};

RunRow run_single(const ModelSpec& spec, double r, const GridPoint& point,
                  std::uint64_t seed, ExperimentResult* full = nullptr);

std::vector<std::string> bass_fields(std::int64_t n, std::int64_t m, double B,
                                     double r, const BassResult& result);

// ---------------------------------------------------------------------------
// Sweeps

struct ReplicateRow {
  std::int64_t point = 0;
  std::int64_t replicate = 0;
  RunRow run;
};

inline const std::vector<std::string> kSummaryColumns = {
    "point", "model",     "r",          "n",         "m",
    "B",     "kappa",     "j_n",        "nbass",     "regime",
    "rate_pred", "median_mse", "replicates"};

struct SummaryRow {
  std::int64_t point = 0;
  ModelKind model = ModelKind::kGaussianRegression;
  double r = 0.0;
  GridPoint grid;
  std::int64_t kappa = 1;
  int j_n = 0;
  double nbass = 0.0;
  Regime regime = Regime::kLocal;
  double rate_pred = 0.0;
  double median_mse = 0.0;
  std::int64_t replicates = 0;

  std::vector<std::string> fields() const;
};

struct SlopeFit {
  // NaN when fewer than two distinct abscissas were available.
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points_used = 0;
  // True when the fit used intermediate-regime points only.
  bool intermediate_only = false;
};

struct SweepOutcome {
  std::vector<ReplicateRow> replicates;
  std::vector<SummaryRow> summary;
  SlopeFit fit;
  std::vector<std::string> warnings;
};

// Ordinary least squares of y on x; slope is NaN for degenerate input.
SlopeFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Median of squared L2 errors (with tail) per point; slope of log median MSE
// on log N_bass over intermediate-regime points when at least two exist,
// otherwise over all points (with a warning if regimes are mixed).
// Replicate k of point p uses seed derive_seed(seed, p, k). Output is
// independent of `threads`. Requires cfg.seed.
SweepOutcome sweep(const SweepConfig& cfg);

void write_replicates_csv(std::ostream& out, const SweepOutcome& outcome);
void write_summary_csv(std::ostream& out, const SweepOutcome& outcome);

// ---------------------------------------------------------------------------
// Charts

// Log-log scatter of median_mse against nbass with a reference line of
// slope -2r/(1+2r) through the centroid. Reads a summary CSV; throws
// ParseError (with line number) on malformed input or fewer than 2 points.
std::string emit_chart(std::istream& summary_csv);

}  // namespace bassim

#endif  // BASSIM_HARNESS_HPP_
