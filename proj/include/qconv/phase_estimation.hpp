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

// Quantum Fourier transform and phase estimation.
//
// A phase register of t qubits holding integer v encodes the fraction v / 2^t;
// its highest qubit is the first binary digit.

#pragma once

#include <cstdint>
#include <vector>

#include "qconv/circuit.hpp"

namespace qconv {

/// |x> -> 2^{-t/2} sum_y exp(2 pi i x y / 2^t) |y>, exact rotations.
CircuitOp qft_circuit(const Register& reg);
CircuitOp iqft_circuit(const Register& reg);

void qft(StateVector& state, const Register& reg);
void iqft(StateVector& state, const Register& reg);

enum class Execution {
  /// Applies every controlled gate of every power individually.
  kGateByGate,
  /// Builds the dense matrix of the unitary on its support once and applies
  /// its repeated squares as controlled dense blocks.
  kFused,
};

struct PhaseEstimationStats {
  /// Controlled applications of the unitary, 2^t - 1 for t phase qubits.
  std::uint64_t controlled_calls = 0;
  /// Labelled blocks of the unitary, scaled by `controlled_calls`.
  GateCounter gates;
};

/// Gate-level circuit: Hadamards, controlled powers, inverse QFT.
CircuitOp phase_estimation_circuit(const CircuitOp& unitary, const Register& phase_reg);

/// Writes the eigenphase estimate of `unitary` into `phase_reg`, which must
/// be |0...0> and disjoint from the unitary's support.
PhaseEstimationStats phase_estimate(StateVector& state, const CircuitOp& unitary,
                                    const Register& phase_reg,
                                    Execution execution = Execution::kFused,
                                    bool require_zeroed = true);

/// Exact inverse of phase_estimate; returns the phase register to |0...0>
/// on eigenstate branches.
PhaseEstimationStats inverse_phase_estimate(StateVector& state, const CircuitOp& unitary,
                                            const Register& phase_reg,
                                            Execution execution = Execution::kFused);

/// Dense powers U, U^2, ..., U^{2^{t-1}} of a unitary on its support,
/// computed once and reused by every fused phase estimation.
struct FusedPowers {
  std::vector<int> support;
  std::vector<Eigen::MatrixXcd> powers;
  GateCounter counter;
};

FusedPowers fuse_powers(const CircuitOp& unitary, int t);

/// `require_zeroed` = false skips the |0...0> check, for registers reused
/// after an earlier estimation that left phase-estimation leakage behind.
PhaseEstimationStats phase_estimate(StateVector& state, const FusedPowers& unitary,
                                    const Register& phase_reg, bool require_zeroed = true);
PhaseEstimationStats inverse_phase_estimate(StateVector& state, const FusedPowers& unitary,
                                            const Register& phase_reg);

/// Nearest m-bit value of a t = m + g bit fraction, wrapping 1 to 0.
std::uint64_t round_guard_value(std::uint64_t value, int m, int g);

/// XORs the rounded m-bit estimate of `phase_reg` into `out`.
void round_guard_bits(StateVector& state, const Register& phase_reg, const Register& out);

}  // namespace qconv
