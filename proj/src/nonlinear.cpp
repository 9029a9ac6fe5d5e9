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

#include "qconv/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "qconv/gates.hpp"
#include "qconv/parallel.hpp"

namespace qconv {

AnsatzCircuit::AnsatzCircuit(int n_qubits, int layers)
    : AnsatzCircuit(n_qubits, layers,
                    std::vector<double>(static_cast<std::size_t>(2 * std::max(0, n_qubits) *
                                                                 std::max(0, layers)),
                                        0.0)) {}

AnsatzCircuit::AnsatzCircuit(int n_qubits, int layers, std::vector<double> params)
    : n_qubits_(n_qubits), layers_(layers) {
  if (n_qubits < 1 || layers < 0) throw ValidationError("ansatz needs n >= 1 and layers >= 0");
  set_params(std::move(params));
}

void AnsatzCircuit::set_params(std::vector<double> params) {
  if (params.size() != static_cast<std::size_t>(2 * n_qubits_ * layers_)) {
    throw ValidationError("ansatz needs exactly 2 * n * layers parameters");
  }
  params_ = std::move(params);
}

CircuitOp AnsatzCircuit::circuit(const Register& reg) const {
  if (reg.width != n_qubits_) throw ValidationError("ansatz register width mismatch");
  CircuitOp c;
  std::size_t p = 0;
  for (int l = 0; l < layers_; ++l) {
    for (int q = 0; q < n_qubits_; ++q) {
      const double a = params_[p++];
      c.gate("ry", reg.qubit(q), gates::ry(a), {a});
    }
    for (int q = 0; q < n_qubits_; ++q) {
      const double a = params_[p++];
      if (n_qubits_ == 1) {
        c.gate("ry", reg.qubit(0), gates::ry(a), {a});
      } else {
        c.controlled({{reg.qubit(q), true}}, "ry", reg.qubit((q + 1) % n_qubits_), gates::ry(a), {a});
      }
    }
  }
  return c;
}

AnsatzCircuit AnsatzCircuit::random(int n_qubits, int layers, Rng& rng) {
  std::vector<double> params(static_cast<std::size_t>(2 * n_qubits * layers));
  for (double& a : params) a = (2 * uniform01(rng) - 1) * std::numbers::pi;
  return AnsatzCircuit(n_qubits, layers, std::move(params));
}

Eigen::MatrixXcd ansatz_matrix(const AnsatzCircuit& ansatz) {
  std::vector<int> support(static_cast<std::size_t>(ansatz.n_qubits()));
  for (int q = 0; q < ansatz.n_qubits(); ++q) support[static_cast<std::size_t>(q)] = q;
  CircuitOp c = ansatz.circuit({0, ansatz.n_qubits()});
  if (c.empty()) {
    const auto dim = Eigen::Index{1} << ansatz.n_qubits();
    return Eigen::MatrixXcd::Identity(dim, dim);
  }
  return fuse(c, support);
}

namespace {

struct Layout {
  Register address, data, flag, phase, x, y, anc;
  int total = 0;
};

Layout pipeline_layout(int n, int m, int g, bool uses_imag) {
  RegisterLayout l;
  Layout r;
  r.address = l.add("ad", n);
  r.data = l.add("data", n);
  r.flag = l.add("B", 1);
  r.phase = l.add("reg'", m + g);
  r.x = l.add("x", m + 1);
  if (uses_imag) r.y = l.add("y", m + 1);
  r.anc = l.add("anc", 1);
  r.total = l.total();
  return r;
}

}  // namespace

NonlinearOutcome run_pipeline(const CircuitOp& loader, int n, const Eigen::VectorXcd& c,
                              const std::string& f, Rng& rng, const PipelineOptions& options) {
  const Activation act = find_activation(f);
  if (options.mode == QdacMode::kAmplify) {
    throw ValidationError("the nonlinear pipeline supports sample and postselect modes");
  }
  if (options.mode == QdacMode::kSample && options.shots == 0) {
    throw ValidationError("sample mode needs at least one shot");
  }
  if (c.size() != (Eigen::Index{1} << n)) throw ValidationError("reference vector length mismatch");
  const int m = options.m;
  const Layout lay = pipeline_layout(n, m, options.g, act.uses_imag);
  if (lay.total > qubit_cap()) {
    throw ResourceError("pipeline needs " + std::to_string(lay.total) + " qubits, above the cap of " +
                        std::to_string(qubit_cap()));
  }
  const CircuitOp ua = loader.shifted(lay.data.offset);
  const FixedPointCodec codec(m, true);
  const AngleCodec angle(m, true);

  // Rotation table over the digital registers, range-checked on every input.
  const Register selector{lay.x.offset, act.uses_imag ? 2 * lay.x.width : lay.x.width};
  std::vector<double> realized_table(selector.size());
  auto gates_table = std::make_shared<std::vector<Matrix2cd>>(selector.size());
  for (std::uint64_t v = 0; v < selector.size(); ++v) {
    const double xv = codec.decode(v & (codec.size() - 1));
    const double yv = act.uses_imag ? codec.decode(v >> lay.x.width) : 0.0;
    const double fv = act(xv, yv);
    if (!std::isfinite(fv) || std::abs(fv) > 1) {
      throw DomainError("activation '" + f + "' leaves [-1, 1] at (" + std::to_string(xv) + ", " +
                        std::to_string(yv) + ")");
    }
    const std::uint64_t code = angle.encode(fv);
    realized_table[v] = angle.amplitude(code);
    const double theta = std::numbers::pi * angle.phi(code);
    (*gates_table)[v] = (fv < 0 ? -1.0 : 1.0) * gates::ry(theta);
  }

  NonlinearOutcome out;
  out.qubits = lay.total;
  double sum_sq = 0;
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    const double xk = codec.quantize(c(k).real());
    const double yk = codec.quantize(c(k).imag());
    const double v = angle.amplitude(angle.encode(std::clamp(act(xk, yk), -1.0, 1.0)));
    out.realized.push_back(v);
    sum_sq += v * v;
  }
  out.ideal_probability = sum_sq / static_cast<double>(c.size());
  out.normalization = sum_sq > 0 ? 1 / std::sqrt(sum_sq) : 0;

  QadcRegisters rr{lay.address, {}, lay.data, lay.flag, lay.phase, lay.x};
  const QadcEngine real(QadcVariant::kReal, ua, rr, m, options.g, options.execution);
  std::optional<QadcEngine> imag;
  if (act.uses_imag) {
    QadcRegisters ri{lay.address, {}, lay.data, lay.flag, lay.phase, lay.y};
    imag.emplace(QadcVariant::kImag, ua, ri, m, options.g, options.execution);
  }

  StateVector state(lay.phase.end());
  for (int i = 0; i < n; ++i) apply_single(state, lay.address.qubit(i), gates::H());
  auto convert = [&](const QadcEngine& e, bool fresh) {
    const PhaseEstimationStats a = e.estimate(state, fresh);
    if (state.n_qubits() < e.registers().out.end()) {
      state = extend(state, e.registers().out.end() - state.n_qubits());
    }
    e.recover(state);
    const PhaseEstimationStats b = e.backward(state);
    out.controlled_ua_count += a.gates.block("U_A") + b.gates.block("U_A");
    out.gates += e.load().counter();
    out.gates += a.gates;
    ++out.gates.oracle;
    out.gates += b.gates;
    out.gates += e.load().counter();
  };
  convert(real, true);
  if (imag) convert(*imag, false);

  state = extend(state, lay.anc.end() - state.n_qubits());
  const auto dist = register_distribution(state, selector);
  for (std::uint64_t v = 0; v < selector.size(); ++v) {
    out.predicted_probability += dist(static_cast<Eigen::Index>(v)) * realized_table[v] * realized_table[v];
  }
  apply_multiplexed(state, selector, lay.anc.qubit(0), std::span<const Matrix2cd>(*gates_table));
  out.gates.controlled += 1;
  out.exact_probability = 1 - probability_one(state, lay.anc.qubit(0));

  if (options.mode == QdacMode::kSample) {
    out.shots = options.shots;
    for (std::uint64_t k = 0; k < options.shots; ++k) {
      if (uniform01(rng) < out.exact_probability) {
        if (out.successes == 0) out.attempts = k + 1;
        ++out.successes;
      }
    }
    out.empirical_probability = static_cast<double>(out.successes) / static_cast<double>(out.shots);
    out.success = out.successes > 0;
    if (!out.success) {
      out.attempts = out.shots;
      return out;
    }
  } else {
    out.shots = out.successes = out.attempts = 1;
    out.empirical_probability = out.exact_probability;
    out.success = true;
  }

  auto [branch, p] = postselect(state, lay.anc.qubit(0), 0);
  (void)p;
  state = std::move(branch);
  if (imag) convert(*imag, false);
  convert(real, false);

  out.raw = Eigen::VectorXcd(c.size());
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    out.raw(k) = state[lay.address.deposit(static_cast<std::uint64_t>(k))];
  }
  const double kept = out.raw.squaredNorm();
  out.leakage = std::max(0.0, 1 - kept);
  out.output = kept > 0 ? Eigen::VectorXcd(out.raw / std::sqrt(kept)) : out.raw;
  Eigen::VectorXcd ideal(c.size());
  for (Eigen::Index k = 0; k < c.size(); ++k) ideal(k) = out.realized[static_cast<std::size_t>(k)];
  if (ideal.norm() > 0) {
    ideal.normalize();
    out.fidelity = std::min(1.0, std::abs(ideal.dot(out.output)));
  }
  return out;
}

NonlinearOutcome nonlinear_transform(const PrepTree& tree, const std::string& f, Rng& rng,
                                     const PipelineOptions& options) {
  const int n = tree.depth();
  return run_pipeline(synthesize_ua(tree, {0, n}), n, tree.amplitudes(), f, rng, options);
}

NonlinearOutcome perceptron_forward(const PrepTree& tree, const AnsatzCircuit& ansatz,
                                    const std::string& sigma, Rng& rng,
                                    const PipelineOptions& options) {
  const int n = tree.depth();
  if (ansatz.n_qubits() != n) throw ValidationError("ansatz width must match the data register");
  if (find_activation(sigma).uses_imag) {
    throw ValidationError("perceptron activations act on the real part only");
  }
  CircuitOp loader = synthesize_ua(tree, {0, n});
  loader.append(ansatz.circuit({0, n}));
  const Eigen::VectorXcd wx = ansatz_matrix(ansatz) * tree.amplitudes();
  return run_pipeline(loader, n, wx, sigma, rng, options);
}

PerceptronReadout swap_test_readout(const Eigen::VectorXcd& psi, std::uint64_t k,
                                    std::uint64_t shots, Rng& rng) {
  if (shots == 0) throw ValidationError("readout needs at least one shot");
  const StateVector target = StateVector::from_amplitudes(psi, true);
  const int n = target.n_qubits();
  if (k >= target.dim()) throw ValidationError("basis index out of range");
  StateVector basis(n);
  basis.mutable_amplitudes().setZero();
  basis.mutable_amplitudes()(static_cast<Eigen::Index>(k)) = 1;
  StateVector s = extend(tensor(basis, target), 1);
  const int anc = 2 * n;
  CircuitOp c;
  c.gate("h", anc, gates::H());
  for (int i = 0; i < n; ++i) append_cswap(c, anc, i, n + i);
  c.gate("h", anc, gates::H());
  apply(c, s);

  PerceptronReadout r;
  r.k = k;
  r.shots = shots;
  r.exact_overlap = std::norm(target[k]);
  r.p0_exact = 1 - probability_one(s, anc);
  std::uint64_t zeros = 0;
  for (std::uint64_t i = 0; i < shots; ++i) {
    if (uniform01(rng) < r.p0_exact) ++zeros;
  }
  r.p0_hat = static_cast<double>(zeros) / static_cast<double>(shots);
  r.estimate = std::clamp(2 * r.p0_hat - 1, 0.0, 1.0);
  r.p0_standard_error = std::sqrt(r.p0_hat * (1 - r.p0_hat) / static_cast<double>(shots));
  r.standard_error = 2 * r.p0_standard_error;
  return r;
}

double readout_loss(const NonlinearOutcome& out, const std::vector<double>& targets) {
  if (static_cast<std::size_t>(out.output.size()) != targets.size()) {
    throw ValidationError("one target per basis state is required");
  }
  double loss = 0;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const double d = std::norm(out.output(static_cast<Eigen::Index>(k))) - targets[k];
    loss += d * d;
  }
  return loss;
}

TrainResult train_demo(const PrepTree& tree, const std::vector<double>& targets,
                       AnsatzCircuit ansatz, const std::string& sigma, Rng& rng,
                       const TrainOptions& options) {
  if (options.budget < 0) throw ValidationError("budget must be nonnegative");
  if (options.shots == 0) throw ValidationError("shots must be positive");
  PipelineOptions forward = options.pipeline;
  forward.mode = QdacMode::kPostselect;
  auto loss_of = [&](const std::vector<double>& params, std::uint64_t seed) {
    AnsatzCircuit a(ansatz.n_qubits(), ansatz.layers(), params);
    Rng stream(seed);
    return readout_loss(perceptron_forward(tree, a, sigma, stream, forward), targets);
  };

  TrainResult r;
  r.noise_floor = static_cast<double>(targets.size()) / static_cast<double>(options.shots);
  r.best_params = ansatz.params();
  r.best_loss = r.initial_loss = loss_of(r.best_params, rng());
  double step = options.initial_step;
  while (r.evaluations < options.budget && step >= options.min_step &&
         r.best_loss > r.noise_floor) {
    std::vector<std::vector<double>> candidates;
    for (std::size_t i = 0; i < r.best_params.size(); ++i) {
      for (double dir : {1.0, -1.0}) {
        candidates.push_back(r.best_params);
        candidates.back()[i] += dir * step;
      }
    }
    candidates.resize(std::min(candidates.size(),
                               static_cast<std::size_t>(options.budget - r.evaluations)));
    std::vector<std::uint64_t> seeds(candidates.size());
    for (auto& s : seeds) s = rng();
    std::vector<double> losses(candidates.size());
    parallel_for(candidates.size(), [&](std::size_t i) { losses[i] = loss_of(candidates[i], seeds[i]); });

    bool improved = false;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      ++r.evaluations;
      if (losses[i] < r.best_loss) {
        r.best_loss = losses[i];
        r.best_params = candidates[i];
        improved = true;
      }
      r.trace.push_back(r.best_loss);
    }
    if (!improved) step /= 2;
  }
  return r;
}

}  // namespace qconv
