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

// bassim: command-line front end for the simulator.
//
//   bassim bass   --n 1024 --m 16 --B 64 --r 0.5
//   bassim encode --x 0.3 --N 1024 --D 0.5
//   bassim decode --bits 10010011001 --N 1024 --D 0.5
//   bassim run    --config point.cfg --seed 7 [--trace messages.csv]
//   bassim sweep  --config sweep.cfg --seed 7 [--threads 4]
//   bassim chart  --summary summary.csv [--output chart.svg]
//
// Exit status: 0 on success, 2 for invalid configuration or arguments,
// 1 for failures while running.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "bassim/bass.hpp"
#include "bassim/codec.hpp"
#include "bassim/csv.hpp"
#include "bassim/errors.hpp"
#include "bassim/harness.hpp"
#include "bassim/models.hpp"
#include "bassim/protocol.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

// Values given on the command line, keyed like the config file so both
// sources go through SweepConfig::from_flat.
struct ConfigFlags {
  std::string config_path;
  std::string model;
  std::string function_kind;
  std::string function_r;
  std::string function_L;
  std::string function_C0;
  std::string grid_n;
  std::string grid_m;
  std::string grid_B;
  std::string replicates;
  std::string results;
  std::string summary;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key = value config file");
    cmd->add_option("--model", model, "gaussian|density|binary|poisson|heteroskedastic");
    cmd->add_option("--function-kind", function_kind, "zero|rough");
    cmd->add_option("--r", function_r, "smoothness in (0, 1)");
    cmd->add_option("--L", function_L, "Besov radius");
    cmd->add_option("--C0", function_C0, "father coefficient");
    cmd->add_option("--n", grid_n, "samples per machine (comma list for sweep)");
    cmd->add_option("--m", grid_m, "machines (comma list for sweep)");
    cmd->add_option("--B", grid_B, "bits per machine (comma list for sweep)");
    cmd->add_option("--seed", seed, "master seed")->required();
  }

  bassim::SweepConfig load() const {
    bassim::FlatConfig flat;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw bassim::ConfigError("cannot open config " + config_path);
      flat = bassim::parse_flat_config(in);
    }
    auto put = [&flat](const char* key, const std::string& value) {
      if (!value.empty()) flat[key] = value;
    };
    put("model", model);
    put("function.kind", function_kind);
    put("function.r", function_r);
    put("function.L", function_L);
    put("function.C0", function_C0);
    put("grid.n", grid_n);
    put("grid.m", grid_m);
    put("grid.B", grid_B);
    put("replicates", replicates);
    put("output.results", results);
    put("output.summary", summary);
    if (seed) flat["seed"] = std::to_string(*seed);
    if (threads) flat["threads"] = std::to_string(*threads);
    return bassim::SweepConfig::from_flat(flat);
  }
};

void print_csv(std::ostream& out, const std::vector<std::string>& fields) {
  out << bassim::csv::join(fields) << '\n';
}

int cmd_bass(std::int64_t n, std::int64_t m, double B, double r) {
  const bassim::BassResult result = bassim::bass_symmetric(n, m, B, r);
  std::vector<std::string> header = bassim::kBassColumns;
  header.insert(header.end(), {"rate", "kappa", "j_n"});
  auto fields = bassim::bass_fields(n, m, B, r, result);
  const std::int64_t kappa = bassim::block_size_kappa(B, n, m, r);
  fields.push_back(bassim::csv::format_number(bassim::minimax_rate(n, m, B, r)));
  fields.push_back(bassim::csv::format_number(kappa));
  fields.push_back(bassim::csv::format_number(
      static_cast<std::int64_t>(bassim::max_resolution(n, kappa, r))));
  print_csv(std::cout, header);
  print_csv(std::cout, fields);
  return kExitOk;
}

int cmd_encode(double x, double N, double D) {
  const bassim::BudgetedCodeword cw = bassim::encode(x, N, D);
  std::cout << "bits=" << cw.bits.to_binary() << '\n'
            << "width=" << cw.width << '\n'
            << "scale_exponent=" << cw.scale_exponent << '\n'
            << "decoded=" << bassim::csv::format_number(bassim::decode(cw, N, D))
            << '\n';
  return kExitOk;
}

int cmd_decode(const std::string& bits, double N, double D) {
  bassim::BudgetedCodeword cw;
  cw.bits = bassim::BitString::from_binary(bits);
  cw.width = static_cast<int>(cw.bits.size());
  cw.scale_exponent = bassim::scale_exponent(N, D);
  std::cout << bassim::csv::format_number(bassim::decode(cw, N, D)) << '\n';
  return kExitOk;
}

int cmd_run(const ConfigFlags& flags, const std::string& trace_path) {
  const bassim::SweepConfig cfg = flags.load();
  cfg.validate();
  const auto points = cfg.grid();
  if (points.size() != 1) {
    throw bassim::ConfigError("run needs exactly one (n, m, B) point, got " +
                              std::to_string(points.size()));
  }
  const bassim::ModelSpec spec(cfg.model, cfg.function.build());
  bassim::ExperimentResult full;
  const bassim::RunRow row =
      bassim::run_single(spec, cfg.function.r, points.front(), *cfg.seed,
                         trace_path.empty() ? nullptr : &full);
  print_csv(std::cout, bassim::kRunColumns);
  print_csv(std::cout, row.fields());
  if (!trace_path.empty()) {
    std::ofstream trace(trace_path);
    if (!trace) throw std::runtime_error("cannot write " + trace_path);
    trace << "machine,bit_count,hex\n";
    for (const auto& msg : full.messages) {
      trace << msg.machine << ',' << msg.bit_count << ',' << msg.bits.to_hex()
            << '\n';
    }
  }
  return kExitOk;
}

int cmd_sweep(const ConfigFlags& flags) {
  const bassim::SweepConfig cfg = flags.load();
  const bassim::SweepOutcome outcome = bassim::sweep(cfg);
  {
    std::ofstream out(cfg.results_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + cfg.results_path);
    bassim::write_replicates_csv(out, outcome);
  }
  {
    std::ofstream out(cfg.summary_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + cfg.summary_path);
    bassim::write_summary_csv(out, outcome);
  }
  for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << "points=" << outcome.summary.size()
            << " replicates=" << cfg.replicates
            << " slope=" << bassim::csv::format_number(outcome.fit.slope)
            << " fit_points=" << outcome.fit.points_used
            << " intermediate_only=" << (outcome.fit.intermediate_only ? 1 : 0)
            << '\n';
  return kExitOk;
}

int cmd_chart(const std::string& summary_path, const std::string& output) {
  std::ifstream in(summary_path);
  if (!in) throw bassim::ConfigError("cannot open summary " + summary_path);
  const std::string svg = bassim::emit_chart(in);
  if (output.empty()) {
    std::cout << svg;
  } else {
    std::ofstream out(output);
    if (!out) throw std::runtime_error("cannot write " + output);
    out << svg;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed nonparametric estimation under bit budgets"};
  app.require_subcommand(1);

  std::int64_t n = 0, m = 0;
  double B = 0.0, r = 0.5;
  auto* bass = app.add_subcommand("bass", "Print N_bass, regime, rate and kappa");
  bass->add_option("--n", n, "samples per machine")->required();
  bass->add_option("--m", m, "machines")->required();
  bass->add_option("--B", B, "bits per machine")->required();
  bass->add_option("--r", r, "smoothness");

  double x = 0.0, N = 0.0, D = 0.5;
  std::string bits;
  auto* enc = app.add_subcommand("encode", "Encode one value");
  enc->add_option("--x", x, "value")->required();
  enc->add_option("--N", N, "total sample size")->required();
  enc->add_option("--D", D, "precision parameter");
  auto* dec = app.add_subcommand("decode", "Decode one codeword");
  dec->add_option("--bits", bits, "codeword as 0/1 characters")->required();
  dec->add_option("--N", N, "total sample size")->required();
  dec->add_option("--D", D, "precision parameter");

  ConfigFlags run_flags;
  std::string trace;
  auto* run = app.add_subcommand("run", "Run one estimation and print its CSV row");
  run_flags.add_to(run);
  run->add_option("--trace", trace, "write per-machine messages as hex");

  ConfigFlags sweep_flags;
  auto* sw = app.add_subcommand("sweep", "Replicated grid sweep");
  sweep_flags.add_to(sw);
  sw->add_option("--replicates", sweep_flags.replicates, "replicates per point");
  sw->add_option("--threads", sweep_flags.threads, "worker threads (0 = all cores)");
  sw->add_option("--results", sweep_flags.results, "per-replicate CSV path");
  sw->add_option("--summary", sweep_flags.summary, "summary CSV path");

  std::string summary_path, output;
  auto* chart = app.add_subcommand("chart", "Render a summary CSV as SVG");
  chart->add_option("--summary", summary_path, "summary CSV")->required();
  chart->add_option("--output", output, "SVG path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*bass) return cmd_bass(n, m, B, r);
    if (*enc) return cmd_encode(x, N, D);
    if (*dec) return cmd_decode(bits, N, D);
    if (*run) return cmd_run(run_flags, trace);
    if (*sw) return cmd_sweep(sweep_flags);
    if (*chart) return cmd_chart(summary_path, output);
  } catch (const bassim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const bassim::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const bassim::DomainError& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
