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

#include "qconv/phase_estimation.hpp"

#include <numbers>

#include "qconv/gates.hpp"

namespace qconv {

namespace {

constexpr double kZeroedTolerance = 1e-12;

void check_zeroed(const StateVector& state, const Register& reg) {
  double stray = 0;
  for (std::uint64_t i = 0; i < state.dim(); ++i) {
    if (reg.extract(i) != 0) stray += std::norm(state[i]);
  }
  if (stray > kZeroedTolerance) throw ValidationError("phase register is not |0...0>");
}

PhaseEstimationStats stats_for(const GateCounter& counter, int t) {
  PhaseEstimationStats s;
  s.controlled_calls = (std::uint64_t{1} << t) - 1;
  s.gates = counter.scaled(s.controlled_calls);
  return s;
}

void check_support(const StateVector& state, std::span<const int> support,
                   const Register& phase_reg) {
  state.check_register(phase_reg);
  if (phase_reg.width < 1 || phase_reg.width > 20) {
    throw ValidationError("phase register width must lie in [1, 20]");
  }
  for (int q : support) {
    if (phase_reg.contains(q)) throw ValidationError("phase register collides with the unitary");
    state.check_qubit(q);
  }
}

void apply_fused(StateVector& state, const FusedPowers& u, const Register& phase_reg,
                 bool inverse) {
  const int t = phase_reg.width;
  if (static_cast<int>(u.powers.size()) < t) throw ValidationError("too few fused powers");
  if (u.support.empty()) return;
  for (int j = 0; j < t; ++j) {
    const int jj = inverse ? t - 1 - j : j;
    const Control c{phase_reg.qubit(jj), true};
    const auto& p = u.powers[static_cast<std::size_t>(jj)];
    if (inverse) {
      apply_dense(state, u.support, p.adjoint(), std::span<const Control>(&c, 1));
    } else {
      apply_dense(state, u.support, p, std::span<const Control>(&c, 1));
    }
  }
}

void apply_gate_powers(StateVector& state, const CircuitOp& unitary, const Register& phase_reg,
                       bool inverse) {
  const int t = phase_reg.width;
  const CircuitOp step = inverse ? unitary.adjoint() : unitary;
  for (int j = 0; j < t; ++j) {
    const int jj = inverse ? t - 1 - j : j;
    const CircuitOp wrapped = controlled_wrap(step, {phase_reg.qubit(jj), true});
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << jj); ++k) apply(wrapped, state);
  }
}

}  // namespace

CircuitOp qft_circuit(const Register& reg) {
  CircuitOp c;
  const int t = reg.width;
  for (int j = t - 1; j >= 0; --j) {
    c.gate("h", reg.qubit(j), gates::H());
    for (int l = j - 1; l >= 0; --l) {
      const double angle = 2 * std::numbers::pi / static_cast<double>(std::uint64_t{1} << (j - l + 1));
      c.controlled({{reg.qubit(l), true}}, "p", reg.qubit(j), gates::phase(angle), {angle});
    }
  }
  for (int j = 0; j < t / 2; ++j) {
    const int a = reg.qubit(j), b = reg.qubit(t - 1 - j);
    append_cnot(c, a, b);
    append_cnot(c, b, a);
    append_cnot(c, a, b);
  }
  return c;
}

CircuitOp iqft_circuit(const Register& reg) { return qft_circuit(reg).adjoint(); }

void qft(StateVector& state, const Register& reg) {
  state.check_register(reg);
  apply(qft_circuit(reg), state);
}

void iqft(StateVector& state, const Register& reg) {
  state.check_register(reg);
  apply(iqft_circuit(reg), state);
}

CircuitOp phase_estimation_circuit(const CircuitOp& unitary, const Register& phase_reg) {
  for (int q : unitary.support()) {
    if (phase_reg.contains(q)) throw ValidationError("phase register collides with the unitary");
  }
  CircuitOp c;
  for (int j = 0; j < phase_reg.width; ++j) c.gate("h", phase_reg.qubit(j), gates::H());
  for (int j = 0; j < phase_reg.width; ++j) {
    const CircuitOp wrapped = controlled_wrap(unitary, {phase_reg.qubit(j), true});
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << j); ++k) c.append(wrapped);
  }
  c.append(iqft_circuit(phase_reg));
  return c;
}

FusedPowers fuse_powers(const CircuitOp& unitary, int t) {
  if (t < 1 || t > 20) throw ValidationError("phase register width must lie in [1, 20]");
  FusedPowers f;
  f.support = unitary.support();
  f.counter = unitary.counter();
  if (f.support.empty()) return f;
  Eigen::MatrixXcd power = fuse(unitary, f.support);
  for (int j = 0; j < t; ++j) {
    f.powers.push_back(power);
    if (j + 1 < t) power = (power * power).eval();
  }
  return f;
}

PhaseEstimationStats phase_estimate(StateVector& state, const FusedPowers& unitary,
                                    const Register& phase_reg, bool require_zeroed) {
  check_support(state, unitary.support, phase_reg);
  if (require_zeroed) check_zeroed(state, phase_reg);
  for (int j = 0; j < phase_reg.width; ++j) apply_single(state, phase_reg.qubit(j), gates::H());
  apply_fused(state, unitary, phase_reg, false);
  iqft(state, phase_reg);
  return stats_for(unitary.counter, phase_reg.width);
}

PhaseEstimationStats inverse_phase_estimate(StateVector& state, const FusedPowers& unitary,
                                            const Register& phase_reg) {
  check_support(state, unitary.support, phase_reg);
  qft(state, phase_reg);
  apply_fused(state, unitary, phase_reg, true);
  for (int j = 0; j < phase_reg.width; ++j) apply_single(state, phase_reg.qubit(j), gates::H());
  return stats_for(unitary.counter, phase_reg.width);
}

PhaseEstimationStats phase_estimate(StateVector& state, const CircuitOp& unitary,
                                    const Register& phase_reg, Execution execution,
                                    bool require_zeroed) {
  if (execution == Execution::kFused) {
    return phase_estimate(state, fuse_powers(unitary, phase_reg.width), phase_reg, require_zeroed);
  }
  check_support(state, unitary.support(), phase_reg);
  if (require_zeroed) check_zeroed(state, phase_reg);
  for (int j = 0; j < phase_reg.width; ++j) apply_single(state, phase_reg.qubit(j), gates::H());
  apply_gate_powers(state, unitary, phase_reg, false);
  iqft(state, phase_reg);
  return stats_for(unitary.counter(), phase_reg.width);
}

PhaseEstimationStats inverse_phase_estimate(StateVector& state, const CircuitOp& unitary,
                                            const Register& phase_reg, Execution execution) {
  if (execution == Execution::kFused) {
    return inverse_phase_estimate(state, fuse_powers(unitary, phase_reg.width), phase_reg);
  }
  check_support(state, unitary.support(), phase_reg);
  qft(state, phase_reg);
  apply_gate_powers(state, unitary, phase_reg, true);
  for (int j = 0; j < phase_reg.width; ++j) apply_single(state, phase_reg.qubit(j), gates::H());
  return stats_for(unitary.counter(), phase_reg.width);
}

std::uint64_t round_guard_value(std::uint64_t value, int m, int g) {
  if (m < 1 || g < 0) throw ValidationError("rounding needs m >= 1 and g >= 0");
  const std::uint64_t half = g == 0 ? 0 : std::uint64_t{1} << (g - 1);
  return ((value + half) >> g) & ((std::uint64_t{1} << m) - 1);
}

void round_guard_bits(StateVector& state, const Register& phase_reg, const Register& out) {
  const int g = phase_reg.width - out.width;
  if (g < 0) throw ValidationError("output register wider than the phase register");
  std::vector<std::uint64_t> table(phase_reg.size());
  for (std::uint64_t v = 0; v < table.size(); ++v) table[v] = round_guard_value(v, out.width, g);
  apply_basis_oracle(state, phase_reg, out, std::span<const std::uint64_t>(table));
}

}  // namespace qconv
