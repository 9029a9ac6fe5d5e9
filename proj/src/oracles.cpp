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

#include "qconv/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "qconv/error.hpp"
#include "qconv/gates.hpp"
#include "qconv/phase_estimation.hpp"
#include "qconv/qadc.hpp"
#include "qconv/qdac.hpp"
#include "qconv/state_prep.hpp"

namespace qconv::oracle {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Matrix2cd projector(bool one) {
  Eigen::Matrix2cd p = Eigen::Matrix2cd::Zero();
  p(one ? 1 : 0, one ? 1 : 0) = 1;
  return p;
}

Eigen::Matrix2cd ry_matrix(double a) {
  Eigen::Matrix2cd r;
  r << std::cos(a / 2), -std::sin(a / 2), std::sin(a / 2), std::cos(a / 2);
  return r;
}

std::uint64_t field(std::uint64_t i, const Register& r) {
  return (i >> r.offset) & ((std::uint64_t{1} << r.width) - 1);
}

bool controls_hold(std::uint64_t i, const std::vector<Control>& controls) {
  for (const Control& c : controls) {
    if (((i >> c.qubit) & 1) != static_cast<std::uint64_t>(c.value)) return false;
  }
  return true;
}

// Round half up with saturation, the codec convention.
double round_to_grid(double v, int bits, double lo, double hi) {
  const double scale = std::ldexp(1.0, bits);
  return std::clamp(std::floor(v * scale + 0.5) / scale, lo, hi);
}

double modal_part(double part, int m, int g) {
  const int t = m + g;
  const double theta = std::asin(std::sqrt((1 + part) / 2)) / kPi;
  const Eigen::VectorXd p = 0.5 * (pe_distribution(theta, t) + pe_distribution(1 - theta, t));
  Eigen::Index best = 0;
  p.maxCoeff(&best);
  const double th = std::ldexp(static_cast<double>(best), -t);
  const double s = std::sin(kPi * std::min(th, 1 - th));
  const double step = std::ldexp(1.0, -m);
  return round_to_grid(2 * s * s - 1, m, -1, 1 - step);
}

double angle_amplitude(double v, int m) {
  const double phi = round_to_grid(2 / kPi * std::acos(std::min(1.0, std::abs(v))), m, 0,
                                   2 - std::ldexp(1.0, -m));
  const double a = std::cos(kPi * phi / 2);
  return v < 0 ? -a : a;
}

}  // namespace

Eigen::VectorXd pe_distribution(double phase, int t) {
  if (t < 1 || t > 24) throw ValidationError("t must lie in [1, 24]");
  const double size = std::ldexp(1.0, t);
  Eigen::VectorXd p(static_cast<Eigen::Index>(size));
  for (Eigen::Index y = 0; y < p.size(); ++y) {
    double delta = phase - static_cast<double>(y) / size;
    delta -= std::round(delta);
    const double den = std::sin(kPi * delta);
    if (std::abs(den) < 1e-15) {
      p(y) = 1;
    } else {
      const double num = std::sin(kPi * size * delta);
      p(y) = num * num / (size * size * den * den);
    }
  }
  return p;
}

Eigen::MatrixXcd kron_embed(int n, const std::map<int, Eigen::Matrix2cd>& factors) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = n - 1; q >= 0; --q) {
    auto it = factors.find(q);
    const Eigen::Matrix2cd f = it == factors.end() ? Eigen::Matrix2cd::Identity() : it->second;
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      for (Eigen::Index c = 0; c < out.cols(); ++c) next.block<2, 2>(2 * r, 2 * c) = out(r, c) * f;
    }
    out = std::move(next);
  }
  return out;
}

Eigen::MatrixXcd circuit_matrix(const CircuitOp& circuit, int n_qubits) {
  if (n_qubits < 1 || n_qubits > 12) throw ValidationError("dense oracle supports 1..12 qubits");
  if (circuit.max_qubit() >= n_qubits) throw ValidationError("circuit exceeds the qubit count");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Identity(dim, dim);
  for (const Operation& op : circuit.ops()) {
    Eigen::MatrixXcd m;
    if (const auto* u = std::get_if<UnitaryGate>(&op.gate)) {
      std::map<int, Eigen::Matrix2cd> f;
      for (const Control& c : op.controls) f[c.qubit] = projector(c.value);
      f[u->target] = u->matrix - Eigen::Matrix2cd::Identity();
      m = Eigen::MatrixXcd::Identity(dim, dim) + kron_embed(n_qubits, f);
    } else {
      m = Eigen::MatrixXcd::Zero(dim, dim);
      for (Eigen::Index col = 0; col < dim; ++col) {
        const auto i = static_cast<std::uint64_t>(col);
        if (!controls_hold(i, op.controls)) {
          m(col, col) = 1;
        } else if (const auto* o = std::get_if<OracleGate>(&op.gate)) {
          const std::uint64_t a = field(i, o->input);
          const std::uint64_t j = i ^ (o->table->at(a) << o->output.offset);
          m(static_cast<Eigen::Index>(j), col) = 1;
        } else {
          const auto& x = std::get<MultiplexedGate>(op.gate);
          const Eigen::Matrix2cd& g = x.gates->at(field(i, x.selector));
          const std::uint64_t bit = (i >> x.target) & 1;
          const std::uint64_t base = i & ~(std::uint64_t{1} << x.target);
          m(static_cast<Eigen::Index>(base), col) = g(0, static_cast<Eigen::Index>(bit));
          m(static_cast<Eigen::Index>(base | (std::uint64_t{1} << x.target)), col) =
              g(1, static_cast<Eigen::Index>(bit));
        }
      }
    }
    total = (m * total).eval();
  }
  return total;
}

Eigen::MatrixXcd ansatz_reference(const AnsatzCircuit& ansatz) {
  const int n = ansatz.n_qubits();
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  const auto& p = ansatz.params();
  std::size_t k = 0;
  for (int l = 0; l < ansatz.layers(); ++l) {
    std::map<int, Eigen::Matrix2cd> layer;
    for (int q = 0; q < n; ++q) layer[q] = ry_matrix(p[k++]);
    u = (kron_embed(n, layer) * u).eval();
    for (int q = 0; q < n; ++q) {
      const double a = p[k++];
      Eigen::MatrixXcd step;
      if (n == 1) {
        step = ry_matrix(a);
      } else {
        const int t = (q + 1) % n;
        step = kron_embed(n, {{q, projector(false)}}) +
               kron_embed(n, {{q, projector(true)}, {t, ry_matrix(a)}});
      }
      u = (step * u).eval();
    }
  }
  return u;
}

Eigen::VectorXcd swap_test_state(const Eigen::VectorXcd& c, std::uint64_t k) {
  const Eigen::Index n = c.size();
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(2 * n * n);
  const auto kk = static_cast<Eigen::Index>(k);
  for (Eigen::Index j = 0; j < n; ++j) {
    // |a>_A |d>_data |b>_B sits at a + n d + n^2 b.
    psi(kk + n * j) += c(j) / 2.0;
    psi(j + n * kk) += c(j) / 2.0;
    psi(kk + n * j + n * n) += c(j) / 2.0;
    psi(j + n * kk + n * n) -= c(j) / 2.0;
  }
  return psi;
}

Eigen::VectorXcd hadamard_test_state(const Eigen::VectorXcd& c, std::uint64_t k, bool imag) {
  const Eigen::Index n = c.size();
  const std::complex<double> w = imag ? std::complex<double>(0, 1) : 1.0;
  Eigen::VectorXcd psi(2 * n);
  psi.head(n) = c / 2.0;
  psi.tail(n) = c / 2.0;
  psi(static_cast<Eigen::Index>(k)) += w / 2.0;
  psi(n + static_cast<Eigen::Index>(k)) -= w / 2.0;
  return psi;
}

Eigen::MatrixXcd reflection_operator(const Eigen::VectorXcd& psi, int flag) {
  const Eigen::Index dim = psi.size();
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Identity(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    if ((i >> flag) & 1) z(i, i) = -1;
  }
  const Eigen::MatrixXcd r = Eigen::MatrixXcd::Identity(dim, dim) - 2.0 * psi * psi.adjoint();
  return r * z;
}

BlockSpectrum block_spectrum(const Eigen::MatrixXcd& g, const Eigen::VectorXcd& psi) {
  const Eigen::VectorXcd e0 = psi.normalized();
  Eigen::VectorXcd e1 = g * e0;
  e1 -= e0.dot(e1) * e0;
  BlockSpectrum s;
  Eigen::MatrixXcd basis;
  if (e1.norm() < 1e-9) {
    basis = e0;
    s.dimension = 1;
  } else {
    basis.resize(e0.size(), 2);
    basis.col(0) = e0;
    basis.col(1) = e1.normalized();
    s.dimension = 2;
  }
  const Eigen::MatrixXcd block = basis.adjoint() * g * basis;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(block);
  for (Eigen::Index i = 0; i < block.rows(); ++i) {
    s.eigenvalues.push_back(solver.eigenvalues()(i));
    s.overlaps.push_back(std::abs(solver.eigenvectors().col(i).normalized()(0)));
  }
  return s;
}

PipelineReference classical_pipeline(const Eigen::VectorXcd& c, const std::string& f, int m,
                                     int g) {
  const Activation& act = find_activation(f);
  PipelineReference r;
  Eigen::VectorXd out(c.size());
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    const double x = modal_part(c(k).real(), m, g);
    const double y = act.uses_imag ? modal_part(c(k).imag(), m, g) : 0.0;
    r.x.push_back(x);
    r.y.push_back(y);
    out(k) = angle_amplitude(act(x, y), m);
    r.amplitude.push_back(out(k));
  }
  r.output = out.norm() > 0 ? Eigen::VectorXd(out.normalized()) : out;
  return r;
}

namespace {

Eigen::VectorXcd random_state(Eigen::Index dim, Rng& rng, bool complex) {
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double re = 2 * uniform01(rng) - 1;
    const double im = complex ? 2 * uniform01(rng) - 1 : 0.0;
    v(i) = {re, im};
  }
  return v.normalized();
}

OracleRow prep_row(const SuiteOptions& o, Rng& rng) {
  OracleRow row{"prep", "binary-tree loading vs target amplitudes (1 - fidelity)", 0, 1e-10};
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXcd c = random_state(Eigen::Index{1} << o.n, rng, true);
    StateVector s(o.n);
    apply_ua(s, {0, o.n}, PrepTree::build(c));
    const double f = std::norm(c.dot(s.amplitudes()));
    row.deviation = std::max(row.deviation, 1 - f);
  }
  return row;
}

OracleRow circuit_row(const SuiteOptions& o, Rng& rng) {
  OracleRow row{"circuit", "gate application vs Kronecker-product matrices", 0, 1e-10};
  const int n = std::max(o.n + 2, 4);
  CircuitOp c = qft_circuit({0, n});
  for (int i = 0; i < 12; ++i) {
    const int t = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    const int ctl = (t + 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n - 1))) % n;
    const double a = 2 * kPi * uniform01(rng);
    c.controlled({{ctl, (rng() & 1) != 0}}, "ry", t, gates::ry(a), {a});
    c.gate("p", t, gates::phase(a), {a});
  }
  auto table = std::make_shared<std::vector<std::uint64_t>>(4);
  for (auto& v : *table) v = rng() % 4;
  c.oracle("table", {0, 2}, {2, 2}, table);
  auto mux = std::make_shared<std::vector<Matrix2cd>>(4);
  for (auto& g : *mux) g = gates::ry(2 * kPi * uniform01(rng));
  c.multiplexed("mux", {0, 2}, n - 1, mux);
  const Eigen::MatrixXcd dense = circuit_matrix(c, n);
  const Eigen::VectorXcd v = random_state(Eigen::Index{1} << n, rng, true);
  StateVector s = StateVector::from_amplitudes(v);
  apply(c, s);
  row.deviation = (s.amplitudes() - dense * v).cwiseAbs().maxCoeff();
  std::vector<int> support(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) support[static_cast<std::size_t>(q)] = q;
  row.deviation = std::max(row.deviation, (fuse(c, support) - dense).cwiseAbs().maxCoeff());
  return row;
}

OracleRow phase_row(const SuiteOptions& o, Rng& rng) {
  OracleRow row{"phase-estimation", "register distribution vs closed form", 0, 1e-10};
  const int t = o.m;
  std::vector<double> phases = {0.0, 0.25, 1.0 / 3.0, 0.7, uniform01(rng)};
  for (double phi : phases) {
    CircuitOp u;
    u.gate("p", 0, gates::phase(2 * kPi * phi), {2 * kPi * phi});
    StateVector s(1 + t);
    apply_single(s, 0, gates::X());
    phase_estimate(s, u, {1, t});
    const Eigen::VectorXd got = register_distribution(s, Register{1, t});
    row.deviation = std::max(row.deviation, (got - pe_distribution(phi, t)).cwiseAbs().maxCoeff());
  }
  return row;
}

double spectrum_deviation(const GroverSpectrum& expect, const BlockSpectrum& got) {
  double dev = 0;
  if (expect.degenerate) {
    if (got.dimension != 1) return 1;
    dev = std::abs(got.eigenvalues[0] - expect.lambda_plus);
    return std::max(dev, std::abs(got.overlaps[0] - 1));
  }
  if (got.dimension != 2) return 1;
  for (std::size_t i = 0; i < 2; ++i) {
    const double to_plus = std::abs(got.eigenvalues[i] - expect.lambda_plus);
    const double to_minus = std::abs(got.eigenvalues[i] - expect.lambda_minus);
    const double want = to_plus <= to_minus ? std::abs(expect.a_plus) : std::abs(expect.a_minus);
    dev = std::max({dev, std::min(to_plus, to_minus), std::abs(got.overlaps[i] - want)});
  }
  const double spread = std::abs(got.eigenvalues[0] - got.eigenvalues[1]);
  const double want_spread = std::abs(expect.lambda_plus - expect.lambda_minus);
  return std::max(dev, std::abs(spread - want_spread));
}

OracleRow spectrum_row(const SuiteOptions&, Rng& rng) {
  OracleRow row{"spectrum", "dense Grover block eigenpairs vs closed form", 0, 1e-10};
  std::vector<double> rs = {0.0, 1.0};
  for (int i = 0; i < 100; ++i) rs.push_back(uniform01(rng));
  for (double r : rs) {
    Eigen::VectorXcd c(2);
    c << r, std::sqrt(std::max(0.0, 1 - r * r));
    const Eigen::VectorXcd psi = swap_test_state(c, 0);
    const BlockSpectrum got = block_spectrum(reflection_operator(psi, 2), psi);
    row.deviation = std::max(row.deviation, spectrum_deviation(spectrum_oracle(r), got));
  }
  return row;
}

// The circuit-built Grover operator on the address-k slice against the dense
// reflection built from the closed-form test state.
OracleRow grover_row(const SuiteOptions& o, Rng& rng) {
  OracleRow row{"grover-circuit", "circuit Grover operators vs dense reflections", 0, 1e-10};
  const int n = std::min(o.n, 2);
  const Eigen::VectorXcd c = random_state(Eigen::Index{1} << n, rng, true);
  const PrepTree tree = PrepTree::build(c);
  for (QadcVariant v : {QadcVariant::kAbs, QadcVariant::kReal, QadcVariant::kImag}) {
    const RegisterLayout layout = qadc_layout(v, n, 1, 0);
    const QadcRegisters regs = qadc_registers(layout);
    const CircuitOp g = v == QadcVariant::kAbs ? build_g(regs, tree)
                                                : build_g_prime(regs, tree, v == QadcVariant::kImag);
    const int width = regs.flag.end();
    const Eigen::MatrixXcd dense = circuit_matrix(g, width);
    const Eigen::Index slice = Eigen::Index{1} << (width - n);
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
      const Eigen::VectorXcd psi = v == QadcVariant::kAbs
                                       ? swap_test_state(c, k)
                                       : hadamard_test_state(c, k, v == QadcVariant::kImag);
      const Eigen::MatrixXcd want = reflection_operator(psi, width - n - 1);
      Eigen::MatrixXcd got(slice, slice);
      for (Eigen::Index r = 0; r < slice; ++r) {
        for (Eigen::Index col = 0; col < slice; ++col) {
          got(r, col) = dense((r << n) | static_cast<Eigen::Index>(k),
                              (col << n) | static_cast<Eigen::Index>(k));
        }
      }
      row.deviation = std::max(row.deviation, (got - want).cwiseAbs().maxCoeff());
    }
  }
  return row;
}

OracleRow qadc_row(const SuiteOptions& o, Rng& rng) {
  OracleRow row{"qadc", "phase-register distributions vs eigenphase mixtures", 0, 1e-10};
  const Eigen::VectorXcd c = random_state(Eigen::Index{1} << o.n, rng, true);
  const PrepTree tree = PrepTree::build(c);
  const int t = o.m + o.g;
  for (QadcVariant v : {QadcVariant::kAbs, QadcVariant::kReal, QadcVariant::kImag}) {
    const QadcResult r = run_qadc(v, tree, o.m, o.g);
    for (Eigen::Index k = 0; k < c.size(); ++k) {
      const double part = v == QadcVariant::kAbs    ? std::norm(c(k))
                          : v == QadcVariant::kReal ? c(k).real()
                                                    : c(k).imag();
      const double theta = std::asin(std::sqrt((1 + part) / 2)) / kPi;
      const Eigen::VectorXd want = 0.5 * (pe_distribution(theta, t) + pe_distribution(1 - theta, t));
      row.deviation =
          std::max(row.deviation, (r.theta_distribution.row(k).transpose() - want).cwiseAbs().maxCoeff());
    }
  }
  return row;
}

OracleRow qdac_row(const SuiteOptions& o, Rng& rng) {
  OracleRow row{"qdac", "postselection probability vs quantized sum of squares", 0, 1e-10};
  for (const char* f : {"identity", "square", "tanh"}) {
    std::vector<double> d(std::size_t{1} << o.n);
    for (double& x : d) x = uniform01(rng);
    const DigitalState in = make_digital_state(d, o.m);
    const QdacOutcome out = qdac_run(in, f, rng);
    const Activation& act = find_activation(f);
    double want = 0;
    for (std::size_t j = 0; j < d.size(); ++j) {
      const double a = angle_amplitude(act(in.value(j), 0), o.m);
      want += a * a / static_cast<double>(d.size());
    }
    row.deviation = std::max(row.deviation, std::abs(out.exact_probability - want));
  }
  return row;
}

OracleRow pipeline_row(const SuiteOptions& o, Rng& rng) {
  OracleRow row{"pipeline", "nonlinear transform vs classical modal pipeline", 0, 0};
  Eigen::VectorXcd c(2);
  c << 0.3 + 0.4 * uniform01(rng), 0.3 + 0.4 * uniform01(rng);
  c.normalize();
  PipelineOptions opt;
  opt.m = o.m;
  opt.g = o.g;
  const NonlinearOutcome out = nonlinear_transform(PrepTree::build(c), "tanh", rng, opt);
  const PipelineReference ref = classical_pipeline(c, "tanh", o.m, o.g);
  row.deviation = (out.output.real() - ref.output).cwiseAbs().maxCoeff();
  row.tolerance = 2 * std::ldexp(1.0, -o.m) + out.leakage;
  return row;
}

OracleRow ansatz_row(const SuiteOptions& o, Rng& rng) {
  OracleRow row{"ansatz", "ansatz circuit vs Kronecker-product reference", 0, 1e-12};
  const AnsatzCircuit a = AnsatzCircuit::random(o.n, 2, rng);
  row.deviation = (ansatz_matrix(a) - ansatz_reference(a)).cwiseAbs().maxCoeff();
  return row;
}

using RowFn = std::function<OracleRow(const SuiteOptions&, Rng&)>;

const std::vector<std::pair<std::string, RowFn>>& registry() {
  static const std::vector<std::pair<std::string, RowFn>> rows = {
      {"prep", prep_row},         {"circuit", circuit_row},
      {"phase-estimation", phase_row}, {"spectrum", spectrum_row},
      {"grover-circuit", grover_row},  {"qadc", qadc_row},
      {"qdac", qdac_row},         {"pipeline", pipeline_row},
      {"ansatz", ansatz_row},
  };
  return rows;
}

}  // namespace

std::vector<std::string> oracle_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry()) names.push_back(name);
  return names;
}

std::vector<OracleRow> oracle_suite(const std::vector<std::string>& scope,
                                    const SuiteOptions& options) {
  for (const std::string& s : scope) {
    const auto& r = registry();
    if (std::none_of(r.begin(), r.end(), [&](const auto& e) { return e.first == s; })) {
      throw ValidationError("unknown oracle '" + s + "'");
    }
  }
  std::vector<OracleRow> rows;
  std::uint64_t index = 0;
  for (const auto& [name, fn] : registry()) {
    ++index;
    if (std::find(scope.begin(), scope.end(), name) == scope.end()) continue;
    Rng rng(options.seed * 1000003 + index);
    rows.push_back(fn(options, rng));
  }
  return rows;
}

}  // namespace qconv::oracle
