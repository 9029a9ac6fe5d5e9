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

// Experiment configuration, execution, and result records.

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace qconv {

inline constexpr const char* kResultSchema = "qconv.result/1";

struct ExperimentConfig {
  /// prep, qdac, qadc-abs, qadc-real, qadc-imag, nonlinear, perceptron or spectrum.
  std::string kind;
  /// Address qubits; inferred from the data when zero.
  int n = 0;
  int m = 5;
  int g = 3;
  /// Exactly one data source for the kinds that take data.
  std::vector<std::complex<double>> values;
  std::string data_path;
  std::optional<std::uint64_t> data_seed;
  std::string function = "identity";
  std::string mode = "postselect";
  std::uint64_t shots = 0;
  /// Mandatory.
  std::optional<std::uint64_t> seed;
  int layers = 2;
  bool train = false;
  int budget = 100;
  /// Spectrum sweep step in r.
  double step = 0.01;
  std::string output_path;
  std::string csv_path;
};

/// Field-level checks; throws ValidationError naming the field, or
/// ResourceError when the run would exceed the qubit cap.
void validate(const ExperimentConfig& config);

/// Largest register file the run simulates.
int required_qubits(const ExperimentConfig& config);

nlohmann::json to_json(const ExperimentConfig& config);
/// Unknown keys and wrong types raise ValidationError.
ExperimentConfig config_from_json(const nlohmann::json& j);

struct Sweep {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct ResultRecord {
  nlohmann::json config;
  /// Deterministic given the config.
  nlohmann::json metrics;
  std::optional<Sweep> sweep;
  double wall_seconds = 0;
};

/// Validates, resolves the data, runs, and checks every metric is finite.
ResultRecord run(const ExperimentConfig& config);

/// {"schema", "config", "metrics"[, "wall_time_s"]}, two-space indent.
std::string render_record(const ResultRecord& record, bool include_timing = true);

/// (r, theta, alpha, beta, Re/Im lambda+-) for r = 0, step, ..., 1, computed
/// on the worker pool and merged by index.
Sweep spectrum_sweep(double step);

}  // namespace qconv
