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

#include "qconv/qdac.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "qconv/gates.hpp"

namespace qconv {

namespace {

int address_bits(std::uint64_t n) {
  int bits = 0;
  while ((std::uint64_t{1} << bits) < n) ++bits;
  return bits;
}

double norm_sq_outside(const StateVector& s, const Register& keep) {
  const std::uint64_t others = (s.dim() - 1) & ~keep.mask();
  double p = 0;
  for (std::uint64_t i = 0; i < s.dim(); ++i) {
    if (i & others) p += std::norm(s[i]);
  }
  return p;
}

struct AngleTable {
  AngleCodec codec;
  std::shared_ptr<const std::vector<std::uint64_t>> table;
  std::vector<double> realized;
};

AngleTable build_angle_table(const DigitalState& input, const Activation& act, int angle_bits) {
  const FixedPointCodec& codec = input.codec;
  std::vector<double> values(codec.size());
  bool negative = codec.is_signed();
  for (std::uint64_t b = 0; b < codec.size(); ++b) {
    values[b] = act(codec.decode(b));
    if (!std::isfinite(values[b]) || std::abs(values[b]) > 1) {
      throw DomainError("activation '" + act.name + "' leaves [-1, 1] at input " +
                        std::to_string(codec.decode(b)));
    }
    negative = negative || values[b] < 0;
  }
  AngleTable t{AngleCodec(angle_bits, negative), nullptr, {}};
  auto table = std::make_shared<std::vector<std::uint64_t>>(codec.size());
  for (std::uint64_t b = 0; b < codec.size(); ++b) (*table)[b] = t.codec.encode(values[b]);
  for (std::uint64_t code : input.codes) t.realized.push_back(t.codec.amplitude((*table)[code]));
  t.table = std::move(table);
  return t;
}

}  // namespace

DigitalState make_digital_state(std::span<const double> data, int m, bool is_signed,
                                bool saturate) {
  const std::uint64_t n = data.size();
  if (n == 0 || (n & (n - 1)) != 0) throw ValidationError("data length must be a power of two");
  FixedPointCodec codec(m, is_signed);
  const int nb = address_bits(n);
  std::vector<std::uint64_t> codes;
  codes.reserve(n);
  for (double d : data) codes.push_back(saturate ? codec.encode_saturating(d) : codec.encode(d));

  const Register data_reg{0, codec.width()};
  const Register addr{codec.width(), nb};
  const int total = codec.width() + nb;
  if (total > qubit_cap()) throw ResourceError("digital state exceeds the qubit cap");
  StateVector::Vector amps = StateVector::Vector::Zero(Eigen::Index{1} << total);
  const double a = 1 / std::sqrt(static_cast<double>(n));
  for (std::uint64_t j = 0; j < n; ++j) {
    amps(static_cast<Eigen::Index>(addr.deposit(j) | data_reg.deposit(codes[j]))) = a;
  }
  return {StateVector::from_amplitudes(std::move(amps)), codec, data_reg, addr, std::move(codes)};
}

QdacMode parse_qdac_mode(const std::string& name) {
  if (name == "sample") return QdacMode::kSample;
  if (name == "postselect") return QdacMode::kPostselect;
  if (name == "amplify") return QdacMode::kAmplify;
  throw ValidationError("unknown qdac mode '" + name + "'");
}

std::string to_string(QdacMode mode) {
  switch (mode) {
    case QdacMode::kSample: return "sample";
    case QdacMode::kPostselect: return "postselect";
    case QdacMode::kAmplify: return "amplify";
  }
  return "unknown";
}

QdacOutcome qdac_run(const DigitalState& input, const std::string& f, Rng& rng,
                     const QdacOptions& options) {
  const Activation& act = find_activation(f);
  if (act.uses_imag) throw ValidationError("activation '" + f + "' needs the complex pipeline");
  if (options.mode == QdacMode::kSample && options.shots == 0) {
    throw ValidationError("sample mode needs at least one shot");
  }
  const int angle_bits = options.angle_bits > 0 ? options.angle_bits : input.codec.frac_bits();
  const AngleTable angles = build_angle_table(input, act, angle_bits);

  QdacOutcome out;
  out.realized = angles.realized;
  const auto n = static_cast<double>(input.size());
  for (double v : out.realized) out.predicted_probability += v * v / n;
  if (out.predicted_probability <= kDegenerateProbability) {
    throw DegenerateBranchError("every converted amplitude is zero");
  }

  const int base = input.state.n_qubits();
  const Register phi{base, angles.codec.width()};
  const int anc = phi.end();
  const int total = anc + 1;

  CircuitOp rotate;
  rotate.oracle("angle", input.data, phi, angles.table);
  for (int i = 0; i <= angle_bits; ++i) {
    const double theta = std::numbers::pi * std::ldexp(1.0, i - angle_bits);
    rotate.controlled({{phi.qubit(i), true}}, "ry", anc, gates::ry(theta), {theta});
  }
  if (angles.codec.with_sign()) rotate.gate("z", phi.qubit(angles.codec.sign_bit()), gates::Z());

  auto codes = std::make_shared<std::vector<std::uint64_t>>(input.address.size(), 0);
  std::copy(input.codes.begin(), input.codes.end(), codes->begin());
  CircuitOp uncompute;
  uncompute.oracle("angle", input.data, phi, angles.table);
  uncompute.oracle("U_D", input.address, input.data, codes);

  StateVector state = extend(input.state, total - base);
  out.gates = rotate.counter();
  out.gates += uncompute.counter();

  switch (options.mode) {
    case QdacMode::kPostselect: {
      apply(rotate, state);
      out.exact_probability = 1 - probability_one(state, anc);
      out.empirical_probability = out.exact_probability;
      out.success = true;
      out.attempts = 1;
      out.successes = 1;
      out.shots = 1;
      break;
    }
    case QdacMode::kSample: {
      apply(rotate, state);
      out.exact_probability = 1 - probability_one(state, anc);
      out.shots = options.shots;
      for (std::uint64_t k = 0; k < options.shots; ++k) {
        if (uniform01(rng) < out.exact_probability) {
          if (out.successes == 0) out.attempts = k + 1;
          ++out.successes;
        }
      }
      out.empirical_probability = static_cast<double>(out.successes) / static_cast<double>(out.shots);
      out.success = out.successes > 0;
      if (!out.success) out.attempts = out.shots;
      break;
    }
    case QdacMode::kAmplify: {
      CircuitOp prep;
      for (int q = input.address.offset; q < input.address.end(); ++q) prep.gate("h", q, gates::H());
      prep.oracle("U_D", input.address, input.data, codes);
      prep.append(rotate);
      const auto p0 = [&] {
        StateVector probe = extend(input.state, total - base);
        apply(rotate, probe);
        return 1 - probability_one(probe, anc);
      }();
      out.rounds = optimal_rounds(p0);
      AmplificationResult amp = amplitude_amplify(prep, total, {anc, false}, out.rounds);
      state = std::move(amp.state);
      out.exact_probability = amp.good_probability;
      out.empirical_probability = amp.good_probability;
      out.success = true;
      out.attempts = 1;
      out.successes = 1;
      out.shots = 1;
      break;
    }
  }
  if (!out.success) return out;

  auto [branch, p] = postselect(state, anc, 0);
  (void)p;
  apply(uncompute, branch);
  out.residual = norm_sq_outside(branch, input.address);
  out.analog = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(input.size()));
  for (std::uint64_t j = 0; j < input.size(); ++j) {
    out.analog(static_cast<Eigen::Index>(j)) = branch[input.address.deposit(j)];
  }
  Eigen::VectorXcd ideal(static_cast<Eigen::Index>(input.size()));
  for (std::uint64_t j = 0; j < input.size(); ++j) ideal(static_cast<Eigen::Index>(j)) = out.realized[j];
  ideal.normalize();
  out.fidelity = std::min(1.0, std::abs(ideal.dot(out.analog)));
  out.output = std::move(branch);
  return out;
}

double predict_success(std::span<const double> data, const std::string& f) {
  if (data.empty()) throw ValidationError("empty data");
  const Activation& act = find_activation(f);
  double s = 0;
  for (double d : data) {
    const double v = act(d);
    s += v * v;
  }
  return s / static_cast<double>(data.size());
}

double predict_success_quantized(const DigitalState& input, const std::string& f, int angle_bits) {
  const AngleTable angles = build_angle_table(input, find_activation(f), angle_bits);
  double s = 0;
  for (double v : angles.realized) s += v * v;
  return s / static_cast<double>(input.size());
}

Moments moments(std::span<const double> data) {
  if (data.empty()) throw ValidationError("empty data");
  const auto n = static_cast<double>(data.size());
  const double mean = std::accumulate(data.begin(), data.end(), 0.0) / n;
  double var = 0;
  for (double d : data) var += (d - mean) * (d - mean);
  return {mean, var / n};
}

int optimal_rounds(double p) {
  if (!(p > 0 && p <= 1)) throw DegenerateBranchError("amplification needs a nonzero success probability");
  const double theta = std::asin(std::sqrt(p));
  return std::max(0, static_cast<int>(std::floor(std::numbers::pi / (4 * theta))));
}

AmplificationResult amplitude_amplify(const CircuitOp& procedure, int n_qubits, Control good,
                                      int rounds) {
  if (rounds < 0) throw ValidationError("rounds must be nonnegative");
  AmplificationResult r;
  r.state = StateVector(n_qubits);
  apply(procedure, r.state);
  const double p1 = probability_one(r.state, good.qubit);
  r.initial_probability = good.value ? p1 : 1 - p1;
  if (r.initial_probability <= kDegenerateProbability) {
    throw DegenerateBranchError("amplification needs a nonzero success amplitude");
  }

  CircuitOp iterate;
  iterate.gate("s_good", good.qubit, good.value ? gates::Z() : gates::zero_flip());
  iterate.append(procedure.adjoint());
  std::vector<int> all(static_cast<std::size_t>(n_qubits));
  std::iota(all.begin(), all.end(), 0);
  append_zero_reflection(iterate, all);
  iterate.append(procedure);
  for (int k = 0; k < rounds; ++k) apply(iterate, r.state);

  const double q1 = probability_one(r.state, good.qubit);
  r.good_probability = good.value ? q1 : 1 - q1;
  return r;
}

}  // namespace qconv
