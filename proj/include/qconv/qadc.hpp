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

// Analog-to-digital conversion.
//
// Maps sum_k c_k |k> to (1/sqrt N) sum_k |k>|v~_k> with v_k one of |c_k|,
// Re c_k or Im c_k, by estimating the eigenphase of a per-address Grover
// operator whose rotation angle satisfies sin(pi theta_k) = sqrt((1 + v)/2)
// (v = r_k^2 for the modulus).

#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qconv/fixed_point.hpp"
#include "qconv/phase_estimation.hpp"
#include "qconv/register_layout.hpp"
#include "qconv/state_prep.hpp"

namespace qconv {

/// Closed-form spectrum of the 2x2 Grover block of one address.
struct GroverSpectrum {
  /// |c_k| for the modulus variant, Re or Im c_k for the others.
  double r_or_part = 0;
  double alpha = 0;
  double beta = 0;
  /// sin(pi theta) = alpha, theta in [0, 1/2].
  double theta = 0;
  std::complex<double> lambda_plus;
  std::complex<double> lambda_minus;
  /// |Psi_k> = a_plus |Psi_+> + a_minus |Psi_->.
  std::complex<double> a_plus;
  std::complex<double> a_minus;
  /// beta = 0: the block collapses to the single eigenvalue -1.
  bool degenerate = false;
  /// alpha = beta: theta = 1/4.
  bool balanced = false;
};

/// Modulus form: alpha = sqrt((1 + r^2) / 2), r in [0, 1].
GroverSpectrum spectrum_oracle(double r);
/// Part form: alpha = sqrt((1 + x) / 2), x in [-1, 1].
GroverSpectrum spectrum_for_part(double x);

enum class QadcVariant { kAbs, kReal, kImag };

QadcVariant parse_qadc_variant(const std::string& name);
std::string to_string(QadcVariant variant);

/// Qubit wiring of one conversion. `pair` is only used by the modulus
/// variant; `out` is the digital output register.
struct QadcRegisters {
  Register address;
  Register pair;
  Register data;
  Register flag;
  Register phase;
  Register out;
};

/// Standalone layout, low to high: ad, [A,] data, B, reg', reg.
RegisterLayout qadc_layout(QadcVariant variant, int n, int m, int g);
QadcRegisters qadc_registers(const RegisterLayout& layout);

// The builders take the loading unitary U_A either as a tree or as a circuit
// already placed on the data register; it is counted as one "U_A" block.

/// Swap test without measurement: U_A on data, then H_B CSWAP(B; data, A) H_B.
CircuitOp build_v(const QadcRegisters& regs, const CircuitOp& ua);
CircuitOp build_v(const QadcRegisters& regs, const PrepTree& tree);
/// Z_B, V^dagger, CNOT(ad -> A), S_0 on (data, A, B), CNOT(ad -> A), V.
CircuitOp build_g(const QadcRegisters& regs, const CircuitOp& ua);
CircuitOp build_g(const QadcRegisters& regs, const PrepTree& tree);
/// Hadamard test: H_B, U_A on data if B = 0, X on data_i if B = 1 and ad_i = 1,
/// then [S_B,] H_B. The S gate selects the imaginary part.
CircuitOp build_w(const QadcRegisters& regs, const CircuitOp& ua, bool imag);
CircuitOp build_w(const QadcRegisters& regs, const PrepTree& tree, bool imag);
/// Z_B, W^dagger, S_0 on (data, B), W.
CircuitOp build_g_prime(const QadcRegisters& regs, const CircuitOp& ua, bool imag);
CircuitOp build_g_prime(const QadcRegisters& regs, const PrepTree& tree, bool imag);

/// The encoding for a variant's output register.
FixedPointCodec qadc_codec(QadcVariant variant, int m);

/// One conversion on caller-chosen registers. estimate() and recover()
/// write the digital value; backward() undoes estimation and loading,
/// leaving the recovered value in `out`.
class QadcEngine {
 public:
  QadcEngine(QadcVariant variant, const PrepTree& tree, const QadcRegisters& regs, int m, int g,
             Execution execution = Execution::kFused);
  /// `ua` acts on `regs.data` only.
  QadcEngine(QadcVariant variant, const CircuitOp& ua, const QadcRegisters& regs, int m, int g,
             Execution execution = Execution::kFused);

  QadcVariant variant() const { return variant_; }
  const QadcRegisters& registers() const { return regs_; }
  const FixedPointCodec& codec() const { return codec_; }
  const FunctionOracle& recovery() const { return recovery_; }
  const CircuitOp& load() const { return load_; }
  const CircuitOp& grover() const { return grover_; }
  int m() const { return m_; }
  int g() const { return g_; }

  /// Loading and phase estimation, leaving theta~ in `phase`.
  PhaseEstimationStats estimate(StateVector& state, bool require_zeroed = true) const;
  /// XORs the recovered value of `phase` into `out`.
  void recover(StateVector& state) const;
  /// Inverse phase estimation and inverse loading.
  PhaseEstimationStats backward(StateVector& state) const;
  /// estimate, recover, backward. Self-inverse.
  GateCounter convert(StateVector& state, bool require_zeroed = true) const;

 private:
  QadcVariant variant_;
  QadcRegisters regs_;
  int m_;
  int g_;
  Execution execution_;
  FixedPointCodec codec_;
  FunctionOracle recovery_;
  CircuitOp load_;
  CircuitOp grover_;
  FusedPowers fused_;
};

struct QadcResult {
  QadcVariant variant = QadcVariant::kAbs;
  int n = 0;
  int m = 0;
  int g = 0;
  RegisterLayout layout;
  /// (1/sqrt N) sum_k |k>|v~_k> up to phase-estimation error.
  StateVector digital_state{1};
  std::vector<double> true_values;
  /// Modal decoded value of `out` per address and its conditional probability.
  std::vector<double> estimates;
  std::vector<double> modal_probability;
  /// P(out = code | address = k), one row per address.
  Eigen::MatrixXd estimate_distribution;
  /// P(phase = v | address = k) right after phase estimation.
  Eigen::MatrixXd theta_distribution;
  /// |<ideal|digital_state>| with the ideal built from the encoded true values.
  double fidelity_vs_ideal = 0;
  /// Mass left on nonzero work registers.
  double residual = 0;
  /// Controlled U_A calls across forward and inverse phase estimation.
  std::uint64_t controlled_ua_count = 0;
  GateCounter gates;
};

/// Full conversion on a fresh register file with uniform addresses.
QadcResult run_qadc(QadcVariant variant, const PrepTree& tree, int m, int g,
                    Execution execution = Execution::kFused);
inline QadcResult abs_qadc(const PrepTree& tree, int m, int g) {
  return run_qadc(QadcVariant::kAbs, tree, m, g);
}
inline QadcResult real_qadc(const PrepTree& tree, int m, int g) {
  return run_qadc(QadcVariant::kReal, tree, m, g);
}
inline QadcResult imag_qadc(const PrepTree& tree, int m, int g) {
  return run_qadc(QadcVariant::kImag, tree, m, g);
}

/// The converted quantity of c for a variant.
double qadc_target(QadcVariant variant, std::complex<double> c);

}  // namespace qconv
