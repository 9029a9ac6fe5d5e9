// Copyright 2026 The qconv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qconv: command-line runner for conversion experiments.
//
// Exit codes: 0 success, 2 validation, 3 resource, 4 verification failure.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "qconv/data_io.hpp"
#include "qconv/error.hpp"
#include "qconv/experiment.hpp"
#include "qconv/oracles.hpp"
#include "qconv/state_vector.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitResource = 3;
constexpr int kExitVerification = 4;

struct DataFlags {
  std::string values;
  std::string path;
  std::uint64_t data_seed = 0;
};

void add_data_flags(CLI::App* cmd, DataFlags& d, qconv::ExperimentConfig& cfg) {
  cmd->add_option("--values", d.values, "Inline data, e.g. 0.6,0.8 or 0.5+0.5i,-0.5i");
  cmd->add_option("--data", d.path, "Data file (.csv, or .bin/.f64 raw float64)");
  cmd->add_option("--data-seed", d.data_seed, "Generate random data from this seed (needs --n)");
  cmd->add_option("--n", cfg.n, "Address qubits");
}

void add_size_flags(CLI::App* cmd, qconv::ExperimentConfig& cfg, bool with_g) {
  cmd->add_option("--m", cfg.m, "Fraction bits")->capture_default_str();
  if (with_g) cmd->add_option("--g,--guard", cfg.g, "Guard bits")->capture_default_str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw qconv::ValidationError("cannot write '" + path + "'");
  out << text;
}

int run_experiment(const qconv::ExperimentConfig& cfg, bool timing) {
  const qconv::ResultRecord rec = qconv::run(cfg);
  const std::string text = qconv::render_record(rec, timing);
  if (cfg.output_path.empty()) {
    std::cout << text;
  } else {
    write_text(cfg.output_path, text);
  }
  if (!cfg.csv_path.empty() && rec.sweep) {
    std::ofstream out(cfg.csv_path);
    if (!out) throw qconv::ValidationError("cannot write '" + cfg.csv_path + "'");
    qconv::write_csv(out, rec.sweep->header, rec.sweep->rows);
  }
  return 0;
}

int run_verify(const std::vector<std::string>& scope, const qconv::oracle::SuiteOptions& opt) {
  const auto rows = qconv::oracle::oracle_suite(scope, opt);
  bool ok = true;
  for (const auto& r : rows) {
    std::cout << (r.passed() ? "PASS " : "FAIL ") << std::left << std::setw(18) << r.name
              << " deviation=" << std::scientific << std::setprecision(3) << r.deviation
              << " tolerance=" << r.tolerance << std::defaultfloat << "  " << r.description << "\n";
    ok = ok && r.passed();
  }
  std::cout << rows.size() << " comparisons, " << (ok ? "all passed" : "failures") << "\n";
  return ok ? 0 : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum digital/analog conversion experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  int cap = qconv::qubit_cap();
  bool no_timing = false;
  std::string config_path;
  qconv::ExperimentConfig cfg;
  std::uint64_t seed = 0;
  DataFlags data;

  app.add_option("--qubit-cap", cap, "Largest register file to simulate")->capture_default_str();
  app.add_flag("--no-timing", no_timing, "Omit wall time so records are byte-identical");

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "RNG seed (required)")->required();
    cmd->add_option("--output,-o", cfg.output_path, "JSON record path (default stdout)");
    cmd->add_option("--csv", cfg.csv_path, "CSV sweep or amplitude table path");
  };

  auto* prep = app.add_subcommand("prep", "Load a vector into amplitudes and report the fidelity");
  common(prep);
  add_data_flags(prep, data, cfg);

  auto* qdac = app.add_subcommand("qdac", "Digital-to-analog conversion");
  common(qdac);
  add_data_flags(qdac, data, cfg);
  add_size_flags(qdac, cfg, false);
  qdac->add_option("--f", cfg.function, "Activation")->capture_default_str();
  qdac->add_option("--mode", cfg.mode, "sample, postselect or amplify")->capture_default_str();
  qdac->add_option("--shots", cfg.shots, "Shots in sample mode");

  std::string variant = "abs";
  auto* qadc = app.add_subcommand("qadc", "Analog-to-digital conversion");
  common(qadc);
  add_data_flags(qadc, data, cfg);
  add_size_flags(qadc, cfg, true);
  qadc->add_option("--variant", variant, "abs, real or imag")->capture_default_str();

  auto* nonlinear = app.add_subcommand("nonlinear", "Nonlinear amplitude transformation");
  common(nonlinear);
  add_data_flags(nonlinear, data, cfg);
  add_size_flags(nonlinear, cfg, true);
  nonlinear->add_option("--f", cfg.function, "Activation f(x, y)")->capture_default_str();
  nonlinear->add_option("--mode", cfg.mode, "sample or postselect")->capture_default_str();
  nonlinear->add_option("--shots", cfg.shots, "Shots in sample mode");

  auto* perceptron = app.add_subcommand("perceptron", "Amplitude perceptron forward pass");
  common(perceptron);
  add_data_flags(perceptron, data, cfg);
  add_size_flags(perceptron, cfg, true);
  perceptron->add_option("--sigma", cfg.function, "Activation")->capture_default_str();
  perceptron->add_option("--layers", cfg.layers, "Ansatz layers")->capture_default_str();
  std::uint64_t readout_shots = 10000;
  perceptron->add_option("--shots", readout_shots, "Swap-test shots per readout")->capture_default_str();
  perceptron->add_flag("--train", cfg.train, "Run the planted-optimum training demo");
  perceptron->add_option("--budget", cfg.budget, "Training evaluations")->capture_default_str();

  auto* spectrum = app.add_subcommand("spectrum", "Grover-block spectrum sweep over r");
  common(spectrum);
  spectrum->add_option("--step", cfg.step, "Sweep step in r")->capture_default_str();

  auto* run = app.add_subcommand("run", "Run a JSON experiment config");
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("--output,-o", cfg.output_path, "JSON record path (default stdout)");
  run->add_option("--csv", cfg.csv_path, "CSV output path");

  std::vector<std::string> scope;
  qconv::oracle::SuiteOptions suite;
  auto* verify = app.add_subcommand("verify", "Compare simulations against brute-force oracles");
  verify->add_option("--scope", scope, "Oracle names (default: all)")->delimiter(',');
  verify->add_option("--n", suite.n)->capture_default_str();
  verify->add_option("--m", suite.m)->capture_default_str();
  verify->add_option("--g", suite.g)->capture_default_str();
  verify->add_option("--seed", suite.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    qconv::set_qubit_cap(cap);
    if (app.count("--qubit-cap") > 0) {
      double size = std::ldexp(16.0, cap);
      const char* units[] = {"B", "KiB", "MiB", "GiB", "TiB", "PiB"};
      int u = 0;
      while (size >= 1024 && u < 5) {
        size /= 1024;
        ++u;
      }
      std::cerr << "qubit cap " << cap << ": one state vector takes up to " << size << " "
                << units[u] << "\n";
    }
    if (verify->parsed()) {
      if (scope.empty()) scope = qconv::oracle::oracle_names();
      return run_verify(scope, suite);
    }
    if (run->parsed()) {
      std::ifstream in(config_path);
      if (!in) throw qconv::ValidationError("cannot open '" + config_path + "'");
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw qconv::ValidationError(std::string("config is not valid JSON: ") + e.what());
      }
      qconv::ExperimentConfig file = qconv::config_from_json(j);
      if (!cfg.output_path.empty()) file.output_path = cfg.output_path;
      if (!cfg.csv_path.empty()) file.csv_path = cfg.csv_path;
      return run_experiment(file, !no_timing);
    }

    cfg.seed = seed;
    if (!data.values.empty()) {
      const Eigen::VectorXcd v = qconv::parse_inline_vector(data.values);
      cfg.values.assign(v.data(), v.data() + v.size());
    }
    cfg.data_path = data.path;
    for (CLI::App* cmd : {prep, qdac, qadc, nonlinear, perceptron}) {
      if (cmd->parsed() && cmd->count("--data-seed") > 0) cfg.data_seed = data.data_seed;
    }
    if (prep->parsed()) cfg.kind = "prep";
    if (qdac->parsed()) cfg.kind = "qdac";
    if (qadc->parsed()) cfg.kind = "qadc-" + variant;
    if (nonlinear->parsed()) cfg.kind = "nonlinear";
    if (perceptron->parsed()) {
      cfg.kind = "perceptron";
      cfg.shots = readout_shots;
    }
    if (spectrum->parsed()) cfg.kind = "spectrum";
    return run_experiment(cfg, !no_timing);
  } catch (const qconv::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const qconv::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const qconv::DegenerateBranchError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const qconv::DomainError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
