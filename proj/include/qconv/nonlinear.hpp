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

// Nonlinear amplitude transformation and the amplitude perceptron.
//
// sum_k c_k |k>  ->  C' sum_k f~(Re c_k, Im c_k) |k>, realized as
// analog-to-digital conversion, a rotation keyed on the digital registers,
// postselection, and conversion back.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qconv/qadc.hpp"
#include "qconv/qdac.hpp"

namespace qconv {

/// Layers of Ry on every qubit followed by a ring of controlled Ry
/// (q -> q+1 mod n); a single qubit gets a second Ry instead of the ring.
/// Real orthogonal, identity at theta = 0, 2 * n * layers parameters.
class AnsatzCircuit {
 public:
  AnsatzCircuit(int n_qubits, int layers);
  AnsatzCircuit(int n_qubits, int layers, std::vector<double> params);

  int n_qubits() const { return n_qubits_; }
  int layers() const { return layers_; }
  std::size_t parameter_count() const { return params_.size(); }
  const std::vector<double>& params() const { return params_; }
  void set_params(std::vector<double> params);

  /// The circuit on `reg`, which must have n_qubits qubits.
  CircuitOp circuit(const Register& reg) const;
  /// Uniform draws in [-pi, pi).
  static AnsatzCircuit random(int n_qubits, int layers, Rng& rng);

 private:
  int n_qubits_;
  int layers_;
  std::vector<double> params_;
};

struct PipelineOptions {
  int m = 5;
  int g = 3;
  QdacMode mode = QdacMode::kPostselect;
  std::uint64_t shots = 1;
  Execution execution = Execution::kFused;
};

struct NonlinearOutcome {
  bool success = false;
  std::uint64_t attempts = 0;
  std::uint64_t successes = 0;
  std::uint64_t shots = 0;
  /// Normalized address amplitudes after conversion back.
  Eigen::VectorXcd output;
  /// Unnormalized address amplitudes; 1 - norm^2 is the leakage.
  Eigen::VectorXcd raw;
  double leakage = 0;
  /// Exact probability that the rotation ancilla reads 0.
  double exact_probability = 0;
  double empirical_probability = 0;
  /// sum |amplitude|^2 f~^2 over the digital registers just before rotating.
  double predicted_probability = 0;
  /// sum_k f~_k^2 / N from the classically encoded values.
  double ideal_probability = 0;
  /// f~ per address from the classically encoded values.
  std::vector<double> realized;
  /// Normalization C' = (sum_k f~_k^2)^{-1/2}.
  double normalization = 0;
  /// |<ideal|output>| with the ideal proportional to `realized`.
  double fidelity = 0;
  std::uint64_t controlled_ua_count = 0;
  GateCounter gates;
  int qubits = 0;
};

/// Runs the transformation of the state `loader`|0> (loader on qubits
/// 0..n-1), with activation `f`. The complex values `c` feed the classical
/// reference fields only.
NonlinearOutcome run_pipeline(const CircuitOp& loader, int n, const Eigen::VectorXcd& c,
                              const std::string& f, Rng& rng, const PipelineOptions& options);

NonlinearOutcome nonlinear_transform(const PrepTree& tree, const std::string& f, Rng& rng,
                                     const PipelineOptions& options = {});

/// sigma(U(theta) x): U_A followed by the ansatz, then the transformation
/// of the real part.
NonlinearOutcome perceptron_forward(const PrepTree& tree, const AnsatzCircuit& ansatz,
                                    const std::string& sigma, Rng& rng,
                                    const PipelineOptions& options = {});

/// Dense matrix of the ansatz on its own qubits.
Eigen::MatrixXcd ansatz_matrix(const AnsatzCircuit& ansatz);

struct PerceptronReadout {
  std::uint64_t k = 0;
  /// clamp(2 p0 - 1, 0, 1).
  double estimate = 0;
  double p0_hat = 0;
  double p0_exact = 0;
  /// |<k|psi>|^2 from the state.
  double exact_overlap = 0;
  std::uint64_t shots = 0;
  /// sqrt(p0_hat (1 - p0_hat) / shots), at most 1 / (2 sqrt(shots)).
  double p0_standard_error = 0;
  double standard_error = 0;
};

/// Swap test of `psi` against |k> with `shots` Born samples of the ancilla.
PerceptronReadout swap_test_readout(const Eigen::VectorXcd& psi, std::uint64_t k,
                                    std::uint64_t shots, Rng& rng);

struct TrainOptions {
  int budget = 100;
  double initial_step = 0.5;
  double min_step = 1e-3;
  std::uint64_t shots = 10000;
  PipelineOptions pipeline;
};

struct TrainResult {
  std::vector<double> best_params;
  double best_loss = 0;
  double initial_loss = 0;
  /// Best loss after each evaluation; nonincreasing.
  std::vector<double> trace;
  int evaluations = 0;
  /// N / shots: the summed variance of N readouts at `shots` shots each.
  double noise_floor = 0;
};

/// Coordinate search on the ansatz angles minimizing
/// sum_k (|<k|output>|^2 - target_k)^2. Each sweep evaluates +step and
/// -step on every coordinate in parallel, moves to the best candidate, and
/// halves the step when none improves. Stops at the budget, at the minimum
/// step, or once the loss reaches the noise floor.
TrainResult train_demo(const PrepTree& tree, const std::vector<double>& targets,
                       AnsatzCircuit ansatz, const std::string& sigma, Rng& rng,
                       const TrainOptions& options = {});

/// Squared-readout loss of a forward pass.
double readout_loss(const NonlinearOutcome& out, const std::vector<double>& targets);

}  // namespace qconv
