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

#include "bassim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <thread>

#include "bassim/csv.hpp"
#include "bassim/errors.hpp"
#include "bassim/rng.hpp"

namespace bassim {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double config_double(const std::string& key, const std::string& value) {
  try {
    return csv::parse_double(value, 0);
  } catch (const ParseError&) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
}

std::int64_t config_int(const std::string& key, const std::string& value) {
  try {
    return csv::parse_int(value, 0);
  } catch (const ParseError&) {
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  }
}

std::uint64_t config_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const std::string v = trim(value);
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(key + ": expected an unsigned integer, got '" + value +
                      "'");
  }
  return out;
}

std::vector<std::string> config_list(const std::string& value) {
  std::vector<std::string> items;
  for (const std::string& item : csv::split_line(value)) {
    const std::string t = trim(item);
    if (!t.empty()) items.push_back(t);
  }
  return items;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

FlatConfig parse_flat_config(std::istream& in) {
  FlatConfig out;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ParseError(line_number, "expected 'key = value'");
    }
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    if (key.empty()) throw ParseError(line_number, "empty key");
    if (!out.emplace(key, value).second) {
      throw ParseError(line_number, "duplicate key '" + key + "'");
    }
  }
  return out;
}

CoefficientTable TestFunctionSpec::build() const {
  try {
    return make_test_function(kind, r, L, C0);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("function: ") + e.what());
  }
}

SweepConfig SweepConfig::from_flat(const FlatConfig& flat) {
  SweepConfig cfg;
  for (const auto& [key, value] : flat) {
    if (key == "model") {
      cfg.model = parse_model_kind(value);
    } else if (key == "function.kind") {
      cfg.function.kind = value;
    } else if (key == "function.r") {
      cfg.function.r = config_double(key, value);
    } else if (key == "function.L") {
      cfg.function.L = config_double(key, value);
    } else if (key == "function.C0") {
      cfg.function.C0 = config_double(key, value);
    } else if (key == "grid.n") {
      for (const auto& item : config_list(value)) {
        cfg.n_values.push_back(config_int(key, item));
      }
    } else if (key == "grid.m") {
      for (const auto& item : config_list(value)) {
        cfg.m_values.push_back(config_int(key, item));
      }
    } else if (key == "grid.B") {
      for (const auto& item : config_list(value)) {
        cfg.B_values.push_back(config_double(key, item));
      }
    } else if (key == "replicates") {
      cfg.replicates = config_int(key, value);
    } else if (key == "seed") {
      cfg.seed = config_u64(key, value);
    } else if (key == "output.results") {
      cfg.results_path = value;
    } else if (key == "output.summary") {
      cfg.summary_path = value;
    } else if (key == "threads") {
      cfg.threads = static_cast<unsigned>(config_u64(key, value));
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  return cfg;
}

std::vector<GridPoint> SweepConfig::grid() const {
  std::vector<GridPoint> points;
  for (std::int64_t n : n_values) {
    for (std::int64_t m : m_values) {
      for (double B : B_values) points.push_back({n, m, B});
    }
  }
  return points;
}

void SweepConfig::validate() const {
  if (n_values.empty() || m_values.empty() || B_values.empty()) {
    throw ConfigError("grid must contain at least one (n, m, B) point");
  }
  if (replicates < 1) throw ConfigError("replicates must be >= 1");
  for (const GridPoint& p : grid()) {
    try {
      assign_blocks(p.n, p.m, p.B, function.r);
    } catch (const std::exception& e) {
      throw ConfigError("grid point (n=" + std::to_string(p.n) +
                        ", m=" + std::to_string(p.m) +
                        ", B=" + csv::format_number(p.B) + "): " + e.what());
    }
    if (std::isinf(p.B)) throw ConfigError("grid.B must be finite");
  }
  const ModelSpec spec(model, function.build());
  (void)spec;
}

std::vector<std::string> RunRow::fields() const {
  return {std::string(to_string(model)),
          csv::format_number(r),
          csv::format_number(n),
          csv::format_number(m),
          csv::format_number(B),
          csv::format_number(kappa),
          csv::format_number(static_cast<std::int64_t>(j_n)),
          csv::format_number(nbass),
          csv::format_number(rate_pred),
          csv::format_number(mse_trunc),
          csv::format_number(mse_tail),
          csv::format_number(max_bits),
          std::to_string(seed)};
}

RunRow run_single(const ModelSpec& spec, double r, const GridPoint& point,
                  std::uint64_t seed, ExperimentResult* full) {
  ExperimentResult result = estimate(spec, point.n, point.m, point.B, r, seed,
                                     {.keep_messages = full != nullptr});
  const BassResult bass = bass_symmetric(point.n, point.m, point.B, r);
  RunRow row;
  row.model = spec.kind();
  row.r = r;
  row.n = point.n;
  row.m = point.m;
  row.B = point.B;
  row.kappa = result.kappa;
  row.j_n = result.j_n;
  row.nbass = bass.value;
  row.regime = *bass.regime;
  const double rate = std::pow(bass.value, -r / (1.0 + 2.0 * r));
  row.rate_pred = rate * rate;
  row.mse_trunc = result.error.truncated;
  row.mse_tail = result.error.with_tail;
  row.max_bits = result.max_bits();
  row.seed = seed;
  if (full) *full = std::move(result);
  return row;
}

std::vector<std::string> bass_fields(std::int64_t n, std::int64_t m, double B,
                                     double r, const BassResult& result) {
  return {csv::format_number(n),
          csv::format_number(m),
          csv::format_number(B),
          csv::format_number(r),
          csv::format_number(result.value),
          result.regime ? std::string(to_string(*result.regime)) : "general"};
}

std::vector<std::string> SummaryRow::fields() const {
  return {csv::format_number(point),
          std::string(to_string(model)),
          csv::format_number(r),
          csv::format_number(grid.n),
          csv::format_number(grid.m),
          csv::format_number(grid.B),
          csv::format_number(kappa),
          csv::format_number(static_cast<std::int64_t>(j_n)),
          csv::format_number(nbass),
          std::string(to_string(regime)),
          csv::format_number(rate_pred),
          csv::format_number(median_mse),
          csv::format_number(replicates)};
}

SlopeFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  SlopeFit fit;
  fit.points_used = x.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (x.size() != y.size() || x.size() < 2) {
    fit.slope = fit.intercept = nan;
    return fit;
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) {
    fit.slope = fit.intercept = nan;
    return fit;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

SweepOutcome sweep(const SweepConfig& cfg) {
  cfg.validate();
  if (!cfg.seed) throw ConfigError("sweep requires a seed");
  const ModelSpec spec(cfg.model, cfg.function.build());
  const std::vector<GridPoint> points = cfg.grid();
  const auto replicates = static_cast<std::size_t>(cfg.replicates);
  const std::size_t tasks = points.size() * replicates;

  std::vector<RunRow> rows(tasks);
  std::vector<std::exception_ptr> failures(tasks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t task = next++; task < tasks; task = next++) {
      const std::size_t p = task / replicates;
      const std::size_t k = task % replicates;
      try {
        rows[task] = run_single(spec, cfg.function.r, points[p],
                                derive_seed(*cfg.seed, p, k));
      } catch (...) {
        failures[task] = std::current_exception();
      }
    }
  };
  unsigned threads =
      cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, tasks));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t task = 0; task < tasks; ++task) {
    if (!failures[task]) continue;
    const GridPoint& p = points[task / replicates];
    std::string what = "unknown error";
    try {
      std::rethrow_exception(failures[task]);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    throw std::runtime_error(
        "sweep aborted at grid point " + std::to_string(task / replicates) +
        " (n=" + std::to_string(p.n) + ", m=" + std::to_string(p.m) +
        ", B=" + csv::format_number(p.B) + "), replicate " +
        std::to_string(task % replicates) + ": " + what);
  }

  SweepOutcome out;
  out.replicates.reserve(tasks);
  for (std::size_t task = 0; task < tasks; ++task) {
    out.replicates.push_back({static_cast<std::int64_t>(task / replicates),
                              static_cast<std::int64_t>(task % replicates),
                              rows[task]});
  }
  for (std::size_t p = 0; p < points.size(); ++p) {
    std::vector<double> mse;
    mse.reserve(replicates);
    for (std::size_t k = 0; k < replicates; ++k) {
      mse.push_back(rows[p * replicates + k].mse_tail);
    }
    const RunRow& first = rows[p * replicates];
    SummaryRow s;
    s.point = static_cast<std::int64_t>(p);
    s.model = first.model;
    s.r = first.r;
    s.grid = points[p];
    s.kappa = first.kappa;
    s.j_n = first.j_n;
    s.nbass = first.nbass;
    s.regime = first.regime;
    s.rate_pred = first.rate_pred;
    s.median_mse = median(std::move(mse));
    s.replicates = cfg.replicates;
    out.summary.push_back(s);
  }

  std::vector<double> xi, yi, xa, ya;
  std::set<Regime> regimes;
  for (const SummaryRow& s : out.summary) {
    xa.push_back(std::log(s.nbass));
    ya.push_back(std::log(s.median_mse));
    regimes.insert(s.regime);
    if (s.regime == Regime::kIntermediate) {
      xi.push_back(xa.back());
      yi.push_back(ya.back());
    }
  }
  if (xi.size() >= 2) {
    out.fit = fit_line(xi, yi);
    out.fit.intermediate_only = true;
  } else {
    out.fit = fit_line(xa, ya);
    if (regimes.size() > 1) {
      out.warnings.push_back(
          "fewer than two intermediate-regime points; slope fitted across "
          "mixed regimes");
    }
  }
  if (std::isnan(out.fit.slope)) {
    out.warnings.push_back("slope undefined: need two distinct N_bass values");
  }
  return out;
}

void write_replicates_csv(std::ostream& out, const SweepOutcome& outcome) {
  std::vector<std::string> header = {"point", "replicate"};
  header.insert(header.end(), kRunColumns.begin(), kRunColumns.end());
  out << csv::join(header) << '\n';
  for (const ReplicateRow& row : outcome.replicates) {
    std::vector<std::string> fields = {csv::format_number(row.point),
                                       csv::format_number(row.replicate)};
    const auto run = row.run.fields();
    fields.insert(fields.end(), run.begin(), run.end());
    out << csv::join(fields) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const SweepOutcome& outcome) {
  out << csv::join(kSummaryColumns) << '\n';
  for (const SummaryRow& row : outcome.summary) {
    out << csv::join(row.fields()) << '\n';
  }
}

}  // namespace bassim
