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

// Brute-force references that share no code path with the simulator:
// Kronecker-product circuit matrices, the closed-form phase-estimation
// distribution, dense diagonalization of the per-address Grover block, and a
// classical model of the nonlinear pipeline.

#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qconv/circuit.hpp"
#include "qconv/nonlinear.hpp"

namespace qconv::oracle {

/// P(y) for t-bit phase estimation of the eigenphase `phase` (in turns).
Eigen::VectorXd pe_distribution(double phase, int t);

/// Kronecker product over n qubits with `factors[q]` on qubit q and the
/// identity elsewhere. Qubit 0 is the rightmost factor.
Eigen::MatrixXcd kron_embed(int n, const std::map<int, Eigen::Matrix2cd>& factors);

/// Full 2^n x 2^n matrix of a circuit, built gate by gate.
Eigen::MatrixXcd circuit_matrix(const CircuitOp& circuit, int n_qubits);

/// Ansatz unitary from its parameters, without going through a circuit.
Eigen::MatrixXcd ansatz_reference(const AnsatzCircuit& ansatz);

/// Swap-test state for address k on (A, data, B), A lowest:
/// ((|k>|c> + |c>|k>)|0> + (|k>|c> - |c>|k>)|1>) / 2.
Eigen::VectorXcd swap_test_state(const Eigen::VectorXcd& c, std::uint64_t k);
/// Hadamard-test state for address k on (data, B):
/// ((|c> + w|k>)|0> + (|c> - w|k>)|1>) / 2 with w = 1, or i for `imag`.
Eigen::VectorXcd hadamard_test_state(const Eigen::VectorXcd& c, std::uint64_t k, bool imag);

/// (I - 2|psi><psi|) Z on qubit `flag`.
Eigen::MatrixXcd reflection_operator(const Eigen::VectorXcd& psi, int flag);

struct BlockSpectrum {
  /// 2, or 1 when psi is itself an eigenvector.
  int dimension = 0;
  std::vector<std::complex<double>> eigenvalues;
  /// |<eigenvector|psi>| per eigenvalue.
  std::vector<double> overlaps;
};

/// Restricts `g` to span{psi, g psi} and diagonalizes the block densely.
BlockSpectrum block_spectrum(const Eigen::MatrixXcd& g, const Eigen::VectorXcd& psi);

struct PipelineReference {
  /// Recovered digital value per address after the modal phase estimate.
  std::vector<double> x;
  std::vector<double> y;
  /// Quantized activation amplitude per address.
  std::vector<double> amplitude;
  /// Normalized amplitude vector.
  Eigen::VectorXd output;
};

/// Quantize each part, take the most likely t = m + g bit phase estimate,
/// recover, apply `f`, and encode the result as an angle with m bits.
PipelineReference classical_pipeline(const Eigen::VectorXcd& c, const std::string& f, int m,
                                     int g);

struct OracleRow {
  std::string name;
  std::string description;
  double deviation = 0;
  double tolerance = 0;
  bool passed() const { return deviation <= tolerance; }
};

struct SuiteOptions {
  int n = 2;
  int m = 4;
  int g = 2;
  std::uint64_t seed = 1;
};

/// Every registered comparison, in order.
std::vector<std::string> oracle_names();

/// Runs the named comparisons; unknown names raise ValidationError.
std::vector<OracleRow> oracle_suite(const std::vector<std::string>& scope,
                                    const SuiteOptions& options = {});

}  // namespace qconv::oracle
