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

// Digital-to-analog conversion.
//
// Turns (1/sqrt N) sum_j |j>|d_j> into C sum_j f(d_j) |j> by computing a
// rotation angle per address, rotating an ancilla, and postselecting it on 0.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qconv/circuit.hpp"
#include "qconv/fixed_point.hpp"

namespace qconv {

/// (1/sqrt N) sum_j |j>_address |d~_j>_data. Data occupies the low qubits.
struct DigitalState {
  StateVector state;
  FixedPointCodec codec;
  Register data;
  Register address;
  std::vector<std::uint64_t> codes;

  std::uint64_t size() const { return codes.size(); }
  double value(std::uint64_t j) const { return codec.decode(codes.at(j)); }
};

/// Encodes `data` with an m-bit codec. Out-of-range values throw unless
/// `saturate` is set, in which case they clamp to the codec range.
DigitalState make_digital_state(std::span<const double> data, int m, bool is_signed = false,
                                bool saturate = false);

enum class QdacMode { kSample, kPostselect, kAmplify };

QdacMode parse_qdac_mode(const std::string& name);
std::string to_string(QdacMode mode);

struct QdacOptions {
  QdacMode mode = QdacMode::kPostselect;
  std::uint64_t shots = 1;
  /// Fraction bits of the angle register; 0 means the data width.
  int angle_bits = 0;
};

struct QdacOutcome {
  bool success = false;
  /// 1-based attempt of the first success (sample mode), 1 otherwise.
  std::uint64_t attempts = 0;
  std::uint64_t successes = 0;
  std::uint64_t shots = 0;
  /// Amplification rounds (amplify mode).
  int rounds = 0;
  /// Register state after success with every work qubit uncomputed.
  StateVector output{1};
  /// Amplitudes of the address register, length N.
  Eigen::VectorXcd analog;
  /// The values the rotation realizes, sign * cos(pi phi~ / 2), per address.
  std::vector<double> realized;
  double predicted_probability = 0;
  double exact_probability = 0;
  double empirical_probability = 0;
  /// |<ideal|analog>| with ideal proportional to `realized`.
  double fidelity = 0;
  /// Probability mass left on nonzero work registers after uncomputation.
  double residual = 0;
  GateCounter gates;
};

/// Runs the conversion with activation `f` on the digital state.
QdacOutcome qdac_run(const DigitalState& input, const std::string& f, Rng& rng,
                     const QdacOptions& options = {});

/// sum_j f(d_j)^2 / N in double precision.
double predict_success(std::span<const double> data, const std::string& f = "identity");

/// sum_j f~_j^2 / N for the amplitudes the circuit realizes from the
/// encoded data and an angle register of `angle_bits` fraction bits.
double predict_success_quantized(const DigitalState& input, const std::string& f, int angle_bits);

struct Moments {
  double mean = 0;
  double variance = 0;
};
/// Population mean and variance.
Moments moments(std::span<const double> data);

struct AmplificationResult {
  StateVector state{1};
  double initial_probability = 0;
  double good_probability = 0;
};

/// Applies `rounds` Grover iterates A S_0 A^dagger S_good to A|0...0>, where
/// `good` names the flag qubit value marking success.
AmplificationResult amplitude_amplify(const CircuitOp& procedure, int n_qubits, Control good,
                                      int rounds);

/// floor(pi / (4 theta) - 1/2) with sin(theta) = sqrt(p).
int optimal_rounds(double p);

}  // namespace qconv
