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

#include "qconv/qadc.hpp"

#include <cmath>
#include <numbers>

#include "qconv/gates.hpp"

namespace qconv {

GroverSpectrum spectrum_for_part(double x) {
  if (!(x >= -1 && x <= 1)) throw DomainError("spectrum needs a value in [-1, 1]");
  GroverSpectrum s;
  s.r_or_part = x;
  s.alpha = std::sqrt((1 + x) / 2);
  s.beta = std::sqrt((1 - x) / 2);
  s.degenerate = s.beta == 0;
  s.balanced = x == 0;
  s.theta = s.degenerate ? 0.5 : std::asin(s.alpha) / std::numbers::pi;
  const double pi = std::numbers::pi;
  s.lambda_plus = std::polar(1.0, 2 * pi * s.theta);
  s.lambda_minus = std::polar(1.0, -2 * pi * s.theta);
  const std::complex<double> i(0, 1);
  s.a_plus = -i * std::polar(1.0, pi * s.theta) / std::numbers::sqrt2;
  s.a_minus = i * std::polar(1.0, -pi * s.theta) / std::numbers::sqrt2;
  return s;
}

GroverSpectrum spectrum_oracle(double r) {
  if (!(r >= 0 && r <= 1)) throw DomainError("spectrum needs r in [0, 1]");
  GroverSpectrum s = spectrum_for_part(r * r);
  s.r_or_part = r;
  return s;
}

QadcVariant parse_qadc_variant(const std::string& name) {
  if (name == "abs") return QadcVariant::kAbs;
  if (name == "real") return QadcVariant::kReal;
  if (name == "imag") return QadcVariant::kImag;
  throw ValidationError("unknown qadc variant '" + name + "'");
}

std::string to_string(QadcVariant variant) {
  switch (variant) {
    case QadcVariant::kAbs: return "abs";
    case QadcVariant::kReal: return "real";
    case QadcVariant::kImag: return "imag";
  }
  return "unknown";
}

FixedPointCodec qadc_codec(QadcVariant variant, int m) {
  return FixedPointCodec(m, variant != QadcVariant::kAbs);
}

double qadc_target(QadcVariant variant, std::complex<double> c) {
  switch (variant) {
    case QadcVariant::kAbs: return std::abs(c);
    case QadcVariant::kReal: return c.real();
    case QadcVariant::kImag: return c.imag();
  }
  return 0;
}

RegisterLayout qadc_layout(QadcVariant variant, int n, int m, int g) {
  if (n < 1 || m < 1 || g < 0) throw ValidationError("conversion needs n >= 1, m >= 1, g >= 0");
  RegisterLayout layout;
  layout.add("ad", n);
  if (variant == QadcVariant::kAbs) layout.add("A", n);
  layout.add("data", n);
  layout.add("B", 1);
  layout.add("reg'", m + g);
  layout.add("reg", qadc_codec(variant, m).width());
  return layout;
}

QadcRegisters qadc_registers(const RegisterLayout& layout) {
  QadcRegisters r;
  r.address = layout["ad"];
  if (layout.has("A")) r.pair = layout["A"];
  r.data = layout["data"];
  r.flag = layout["B"];
  r.phase = layout["reg'"];
  r.out = layout["reg"];
  return r;
}

namespace {

void append_address_cnots(CircuitOp& c, const QadcRegisters& regs) {
  for (int i = 0; i < regs.address.width; ++i) append_cnot(c, regs.address.qubit(i), regs.pair.qubit(i));
}

std::vector<int> qubits_of(std::initializer_list<Register> regs) {
  std::vector<int> q;
  for (const Register& r : regs) {
    for (int i = 0; i < r.width; ++i) q.push_back(r.qubit(i));
  }
  return q;
}

}  // namespace

CircuitOp build_v(const QadcRegisters& regs, const CircuitOp& ua) {
  if (regs.pair.width != regs.data.width) throw ValidationError("swap test needs |A| = |data|");
  CircuitOp c;
  c.append(ua, "U_A");
  const int b = regs.flag.qubit(0);
  c.gate("h", b, gates::H());
  for (int i = 0; i < regs.data.width; ++i) append_cswap(c, b, regs.data.qubit(i), regs.pair.qubit(i));
  c.gate("h", b, gates::H());
  return c;
}

CircuitOp build_v(const QadcRegisters& regs, const PrepTree& tree) {
  return build_v(regs, synthesize_ua(tree, regs.data));
}

CircuitOp build_g(const QadcRegisters& regs, const CircuitOp& ua) {
  const CircuitOp v = build_v(regs, ua);
  CircuitOp c;
  c.gate("z", regs.flag.qubit(0), gates::Z());
  c.append(v.adjoint());
  append_address_cnots(c, regs);
  append_zero_reflection(c, qubits_of({regs.data, regs.pair, regs.flag}));
  append_address_cnots(c, regs);
  c.append(v);
  return c;
}

CircuitOp build_g(const QadcRegisters& regs, const PrepTree& tree) {
  return build_g(regs, synthesize_ua(tree, regs.data));
}

CircuitOp build_w(const QadcRegisters& regs, const CircuitOp& ua, bool imag) {
  if (regs.address.width != regs.data.width) throw ValidationError("Hadamard test needs |ad| = |data|");
  const int b = regs.flag.qubit(0);
  CircuitOp c;
  c.gate("h", b, gates::H());
  c.append(controlled_wrap(ua, {b, false}), "U_A");
  for (int i = 0; i < regs.data.width; ++i) {
    c.controlled({{b, true}, {regs.address.qubit(i), true}}, "x", regs.data.qubit(i), gates::X());
  }
  if (imag) c.gate("s", b, gates::S());
  c.gate("h", b, gates::H());
  return c;
}

CircuitOp build_w(const QadcRegisters& regs, const PrepTree& tree, bool imag) {
  return build_w(regs, synthesize_ua(tree, regs.data), imag);
}

CircuitOp build_g_prime(const QadcRegisters& regs, const CircuitOp& ua, bool imag) {
  const CircuitOp w = build_w(regs, ua, imag);
  CircuitOp c;
  c.gate("z", regs.flag.qubit(0), gates::Z());
  c.append(w.adjoint());
  append_zero_reflection(c, qubits_of({regs.data, regs.flag}));
  c.append(w);
  return c;
}

CircuitOp build_g_prime(const QadcRegisters& regs, const PrepTree& tree, bool imag) {
  return build_g_prime(regs, synthesize_ua(tree, regs.data), imag);
}

namespace {

FunctionOracle recovery_for(QadcVariant variant, int m, int t) {
  return variant == QadcVariant::kAbs ? abs_recovery_oracle(m, t) : real_recovery_oracle(m, t);
}

}  // namespace

QadcEngine::QadcEngine(QadcVariant variant, const PrepTree& tree, const QadcRegisters& regs,
                       int m, int g, Execution execution)
    : QadcEngine(variant, synthesize_ua(tree, regs.data), regs, m, g, execution) {}

QadcEngine::QadcEngine(QadcVariant variant, const CircuitOp& ua, const QadcRegisters& regs,
                       int m, int g, Execution execution)
    : variant_(variant),
      regs_(regs),
      m_(m),
      g_(g),
      execution_(execution),
      codec_(qadc_codec(variant, m)),
      recovery_(recovery_for(variant, m, m + g)) {
  const int n = regs.data.width;
  if (n < 1 || regs.address.width != n) {
    throw ValidationError("address and data registers must have the same nonzero width");
  }
  for (int q : ua.support()) {
    if (!regs.data.contains(q)) throw ValidationError("loading circuit leaves the data register");
  }
  if (variant == QadcVariant::kAbs && regs.pair.width != n) {
    throw ValidationError("modulus conversion needs a pair register of the data width");
  }
  if (regs.flag.width != 1) throw ValidationError("flag register must be one qubit");
  if (regs.phase.width != m + g) throw ValidationError("phase register must have m + g qubits");
  if (regs.out.width != codec_.width()) throw ValidationError("output register width mismatch");
  if (variant == QadcVariant::kAbs) {
    append_address_cnots(load_, regs);
    load_.append(build_v(regs, ua));
    grover_ = build_g(regs, ua);
  } else {
    const bool imag = variant == QadcVariant::kImag;
    load_ = build_w(regs, ua, imag);
    grover_ = build_g_prime(regs, ua, imag);
  }
  if (execution_ == Execution::kFused) fused_ = fuse_powers(grover_, regs.phase.width);
}

PhaseEstimationStats QadcEngine::estimate(StateVector& state, bool require_zeroed) const {
  apply(load_, state);
  if (execution_ == Execution::kFused) return phase_estimate(state, fused_, regs_.phase, require_zeroed);
  return phase_estimate(state, grover_, regs_.phase, Execution::kGateByGate, require_zeroed);
}

void QadcEngine::recover(StateVector& state) const {
  apply_basis_oracle(state, regs_.phase, regs_.out, std::span<const std::uint64_t>(*recovery_.table()));
}

PhaseEstimationStats QadcEngine::backward(StateVector& state) const {
  PhaseEstimationStats s = execution_ == Execution::kFused
                               ? inverse_phase_estimate(state, fused_, regs_.phase)
                               : inverse_phase_estimate(state, grover_, regs_.phase,
                                                        Execution::kGateByGate);
  apply(load_.adjoint(), state);
  return s;
}

GateCounter QadcEngine::convert(StateVector& state, bool require_zeroed) const {
  GateCounter c = load_.counter();
  c += estimate(state, require_zeroed).gates;
  recover(state);
  ++c.oracle;
  c += backward(state).gates;
  c += load_.counter();
  return c;
}

namespace {

Eigen::MatrixXd conditional_on_rows(Eigen::MatrixXd joint) {
  for (Eigen::Index k = 0; k < joint.rows(); ++k) {
    const double s = joint.row(k).sum();
    if (s > 0) joint.row(k) /= s;
  }
  return joint;
}

}  // namespace

QadcResult run_qadc(QadcVariant variant, const PrepTree& tree, int m, int g, Execution execution) {
  QadcResult r;
  r.variant = variant;
  r.n = tree.depth();
  r.m = m;
  r.g = g;
  r.layout = qadc_layout(variant, r.n, m, g);
  if (r.layout.total() > qubit_cap()) {
    throw ResourceError("conversion needs " + std::to_string(r.layout.total()) +
                        " qubits, above the cap of " + std::to_string(qubit_cap()));
  }
  const QadcRegisters regs = qadc_registers(r.layout);
  const QadcEngine engine(variant, tree, regs, m, g, execution);

  StateVector state(regs.phase.end());
  for (int i = 0; i < regs.address.width; ++i) apply_single(state, regs.address.qubit(i), gates::H());
  const PhaseEstimationStats forward = engine.estimate(state);
  r.theta_distribution = conditional_on_rows(joint_distribution(state, regs.address, regs.phase));

  state = extend(state, regs.out.width);
  engine.recover(state);
  const PhaseEstimationStats back = engine.backward(state);

  r.controlled_ua_count = forward.gates.block("U_A") + back.gates.block("U_A");
  r.gates = engine.load().counter();
  r.gates += forward.gates;
  ++r.gates.oracle;
  r.gates += back.gates;
  r.gates += engine.load().counter();

  const FixedPointCodec& codec = engine.codec();
  r.estimate_distribution = conditional_on_rows(joint_distribution(state, regs.address, regs.out));
  const std::uint64_t n_addr = tree.size();
  StateVector::Vector ideal = StateVector::Vector::Zero(static_cast<Eigen::Index>(state.dim()));
  for (std::uint64_t k = 0; k < n_addr; ++k) {
    const double target = qadc_target(variant, tree.amplitude(k));
    r.true_values.push_back(target);
    Eigen::Index mode = 0;
    r.modal_probability.push_back(r.estimate_distribution.row(static_cast<Eigen::Index>(k)).maxCoeff(&mode));
    r.estimates.push_back(codec.decode(static_cast<std::uint64_t>(mode)));
    const std::uint64_t idx = regs.address.deposit(k) | regs.out.deposit(codec.encode_saturating(target));
    ideal(static_cast<Eigen::Index>(idx)) = 1 / std::sqrt(static_cast<double>(n_addr));
  }
  r.fidelity_vs_ideal = std::min(1.0, std::abs(ideal.dot(state.amplitudes())));
  const std::uint64_t work = (state.dim() - 1) & ~(regs.address.mask() | regs.out.mask());
  for (std::uint64_t i = 0; i < state.dim(); ++i) {
    if (i & work) r.residual += std::norm(state[i]);
  }
  r.digital_state = std::move(state);
  return r;
}

}  // namespace qconv
