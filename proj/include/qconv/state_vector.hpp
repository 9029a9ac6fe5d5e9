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

// Dense statevector and the primitive kernels every protocol is built from.
//
// Qubit 0 is the least significant bit of the amplitude index. Kernels
// mutate the state in place; they preserve the norm up to rounding.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qconv/error.hpp"
#include "qconv/register_layout.hpp"

namespace qconv {

inline constexpr int kDefaultQubitCap = 24;

namespace detail {
inline std::atomic<int>& qubit_cap_storage() {
  static std::atomic<int> cap{kDefaultQubitCap};
  return cap;
}
}  // namespace detail

/// Largest state any operation will allocate.
inline int qubit_cap() { return detail::qubit_cap_storage().load(); }
inline void set_qubit_cap(int cap) {
  if (cap < 1 || cap > 40) throw ValidationError("qubit cap must lie in [1, 40]");
  detail::qubit_cap_storage().store(cap);
}

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits; identical on every
/// standard library, unlike std::uniform_real_distribution.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename Real>
using Matrix2 = Eigen::Matrix<std::complex<Real>, 2, 2>;

/// A control qubit and the basis value it must hold.
struct Control {
  int qubit = 0;
  bool value = true;
  friend constexpr bool operator==(const Control&, const Control&) = default;
};

template <typename Real>
class BasicStateVector {
 public:
  using RealScalar = Real;
  using Scalar = std::complex<Real>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  /// |0...0> on `n_qubits` qubits.
  explicit BasicStateVector(int n_qubits) : n_qubits_(n_qubits) {
    check_size(n_qubits);
    amplitudes_ = Vector::Zero(Eigen::Index{1} << n_qubits);
    amplitudes_(0) = Scalar(1);
  }

  /// Wraps an amplitude vector of power-of-two length. Rejects vectors whose
  /// norm is off by more than `tolerance` unless `renormalize` is set.
  static BasicStateVector from_amplitudes(Vector amplitudes, bool renormalize = false,
                                          Real tolerance = Real(1e-10)) {
    const auto dim = amplitudes.size();
    if (dim < 2 || (dim & (dim - 1)) != 0) {
      throw ValidationError("amplitude count must be a power of two >= 2");
    }
    int n = 0;
    while ((Eigen::Index{1} << n) < dim) ++n;
    check_size(n);
    const Real norm = amplitudes.norm();
    if (norm == Real(0)) throw ValidationError("zero amplitude vector");
    if (renormalize) {
      amplitudes /= norm;
    } else if (std::abs(norm - Real(1)) > tolerance) {
      throw ValidationError("amplitudes are not normalized");
    }
    BasicStateVector s;
    s.n_qubits_ = n;
    s.amplitudes_ = std::move(amplitudes);
    return s;
  }

  int n_qubits() const { return n_qubits_; }
  std::uint64_t dim() const { return std::uint64_t{1} << n_qubits_; }
  const Vector& amplitudes() const { return amplitudes_; }
  Scalar operator[](std::uint64_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }
  Real norm() const { return amplitudes_.norm(); }

  /// Raw access for kernels. Callers keep the norm invariant.
  Vector& mutable_amplitudes() { return amplitudes_; }

  void check_qubit(int q) const {
    if (q < 0 || q >= n_qubits_) {
      throw ValidationError("qubit index " + std::to_string(q) + " out of range for " +
                            std::to_string(n_qubits_) + "-qubit state");
    }
  }
  void check_register(const Register& r) const {
    if (r.width < 0 || r.offset < 0 || r.end() > n_qubits_) {
      throw ValidationError("register [" + std::to_string(r.offset) + ", " +
                            std::to_string(r.end()) + ") out of range");
    }
  }

 private:
  BasicStateVector() = default;

  static void check_size(int n) {
    if (n < 1) throw ValidationError("a state needs at least one qubit");
    if (n > qubit_cap()) {
      throw ResourceError("state of " + std::to_string(n) + " qubits exceeds cap of " +
                          std::to_string(qubit_cap()) + " (" +
                          std::to_string((std::uint64_t{16} << n) >> 20) + " MiB)");
    }
  }

  int n_qubits_ = 0;
  Vector amplitudes_;
};

using StateVector = BasicStateVector<double>;
using Matrix2cd = Matrix2<double>;

template <typename Real>
BasicStateVector<Real> new_zero_state(int n_qubits) {
  return BasicStateVector<Real>(n_qubits);
}

inline StateVector new_zero_state(int n_qubits) { return StateVector(n_qubits); }

template <typename Real>
struct BasicMeasurementOutcome {
  int bit = 0;
  Real probability = 0;
  BasicStateVector<Real> collapsed;
};
using MeasurementOutcome = BasicMeasurementOutcome<double>;

namespace detail {

inline std::uint64_t insert_zero_bit(std::uint64_t x, int pos) {
  const std::uint64_t low = x & ((std::uint64_t{1} << pos) - 1);
  return ((x >> pos) << (pos + 1)) | low;
}

/// Calls f(i) for every index whose bits at `fixed` (ascending) are zero,
/// with `set_bits` OR-ed in.
template <typename F>
void for_each_base(int n_qubits, std::span<const int> fixed, std::uint64_t set_bits, F&& f) {
  const std::uint64_t count = std::uint64_t{1} << (n_qubits - static_cast<int>(fixed.size()));
  for (std::uint64_t k = 0; k < count; ++k) {
    std::uint64_t idx = k;
    for (int p : fixed) idx = insert_zero_bit(idx, p);
    f(idx | set_bits);
  }
}

template <typename Real>
void check_controls(const BasicStateVector<Real>& s, std::span<const Control> controls,
                    std::span<const int> targets) {
  std::vector<int> all(targets.begin(), targets.end());
  for (const Control& c : controls) all.push_back(c.qubit);
  for (int q : all) s.check_qubit(q);
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw ValidationError("controls and targets must be distinct qubits");
  }
}

inline std::uint64_t control_bits(std::span<const Control> controls) {
  std::uint64_t bits = 0;
  for (const Control& c : controls) {
    if (c.value) bits |= std::uint64_t{1} << c.qubit;
  }
  return bits;
}

inline std::uint64_t control_mask(std::span<const Control> controls) {
  std::uint64_t mask = 0;
  for (const Control& c : controls) mask |= std::uint64_t{1} << c.qubit;
  return mask;
}

}  // namespace detail

/// Applies `u` to `target` on the subspace where every control holds its value.
template <typename Real>
void apply_controlled(BasicStateVector<Real>& state, std::span<const Control> controls,
                      int target, const Matrix2<Real>& u) {
  const int t[1] = {target};
  detail::check_controls(state, controls, t);
  std::vector<int> fixed{target};
  for (const Control& c : controls) fixed.push_back(c.qubit);
  std::sort(fixed.begin(), fixed.end());

  auto& a = state.mutable_amplitudes();
  const std::uint64_t step = std::uint64_t{1} << target;
  const auto u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
  const bool diagonal = u01 == std::complex<Real>(0) && u10 == std::complex<Real>(0);
  if (diagonal) {
    detail::for_each_base(state.n_qubits(), fixed, detail::control_bits(controls),
                          [&](std::uint64_t i0) {
                            a(static_cast<Eigen::Index>(i0)) *= u00;
                            a(static_cast<Eigen::Index>(i0 | step)) *= u11;
                          });
    return;
  }
  detail::for_each_base(state.n_qubits(), fixed, detail::control_bits(controls),
                        [&](std::uint64_t i0) {
                          const auto j0 = static_cast<Eigen::Index>(i0);
                          const auto j1 = static_cast<Eigen::Index>(i0 | step);
                          const auto x0 = a(j0);
                          const auto x1 = a(j1);
                          a(j0) = u00 * x0 + u01 * x1;
                          a(j1) = u10 * x0 + u11 * x1;
                        });
}

template <typename Real>
void apply_controlled(BasicStateVector<Real>& state, std::initializer_list<Control> controls,
                      int target, const Matrix2<Real>& u) {
  apply_controlled(state, std::span<const Control>(controls.begin(), controls.size()), target, u);
}

template <typename Real>
void apply_single(BasicStateVector<Real>& state, int target, const Matrix2<Real>& u) {
  apply_controlled(state, std::span<const Control>{}, target, u);
}

/// Applies a dense 2^k x 2^k matrix to `qubits` (qubits[0] is the least
/// significant local bit), conditioned on `controls`.
template <typename Real, typename Derived>
void apply_dense(BasicStateVector<Real>& state, std::span<const int> qubits,
                 const Eigen::MatrixBase<Derived>& u, std::span<const Control> controls = {}) {
  using Scalar = std::complex<Real>;
  const int k = static_cast<int>(qubits.size());
  const Eigen::Index local = Eigen::Index{1} << k;
  if (u.rows() != local || u.cols() != local) {
    throw ValidationError("dense operator size does not match its qubit count");
  }
  detail::check_controls(state, controls, qubits);

  std::vector<int> fixed(qubits.begin(), qubits.end());
  for (const Control& c : controls) fixed.push_back(c.qubit);
  std::sort(fixed.begin(), fixed.end());

  std::vector<std::uint64_t> offsets(static_cast<std::size_t>(local));
  for (Eigen::Index l = 0; l < local; ++l) {
    std::uint64_t off = 0;
    for (int b = 0; b < k; ++b) {
      if ((l >> b) & 1) off |= std::uint64_t{1} << qubits[static_cast<std::size_t>(b)];
    }
    offsets[static_cast<std::size_t>(l)] = off;
  }

  constexpr Eigen::Index kBatch = 256;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> op = u;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> in(local, kBatch), out(local, kBatch);
  std::vector<std::uint64_t> bases;
  bases.reserve(kBatch);
  auto& a = state.mutable_amplitudes();

  auto flush = [&]() {
    const auto cols = static_cast<Eigen::Index>(bases.size());
    for (Eigen::Index c = 0; c < cols; ++c) {
      for (Eigen::Index l = 0; l < local; ++l) {
        in(l, c) = a(static_cast<Eigen::Index>(bases[static_cast<std::size_t>(c)] |
                                               offsets[static_cast<std::size_t>(l)]));
      }
    }
    out.leftCols(cols).noalias() = op * in.leftCols(cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
      for (Eigen::Index l = 0; l < local; ++l) {
        a(static_cast<Eigen::Index>(bases[static_cast<std::size_t>(c)] |
                                    offsets[static_cast<std::size_t>(l)])) = out(l, c);
      }
    }
    bases.clear();
  };

  detail::for_each_base(state.n_qubits(), fixed, detail::control_bits(controls),
                        [&](std::uint64_t base) {
                          bases.push_back(base);
                          if (static_cast<Eigen::Index>(bases.size()) == kBatch) flush();
                        });
  if (!bases.empty()) flush();
}

/// |a>|b> -> |a>|b XOR table[a]>, conditioned on `controls`.
template <typename Real>
void apply_basis_oracle(BasicStateVector<Real>& state, const Register& input,
                        const Register& output, std::span<const std::uint64_t> table,
                        std::span<const Control> controls = {}) {
  state.check_register(input);
  state.check_register(output);
  if (input.overlaps(output)) throw ValidationError("oracle registers overlap");
  if (table.size() != input.size()) {
    throw ValidationError("oracle table does not cover the input register");
  }
  for (std::uint64_t v : table) {
    if (output.width < 64 && v >= output.size()) {
      throw ValidationError("oracle output exceeds the output register width");
    }
  }
  for (const Control& c : controls) {
    state.check_qubit(c.qubit);
    if (input.contains(c.qubit) || output.contains(c.qubit)) {
      throw ValidationError("oracle control overlaps an oracle register");
    }
  }
  const std::uint64_t cmask = detail::control_mask(controls);
  const std::uint64_t cbits = detail::control_bits(controls);
  auto& a = state.mutable_amplitudes();
  for (std::uint64_t i = 0; i < state.dim(); ++i) {
    if ((i & cmask) != cbits) continue;
    const std::uint64_t j = i ^ output.deposit(table[input.extract(i)]);
    if (j > i) std::swap(a(static_cast<Eigen::Index>(i)), a(static_cast<Eigen::Index>(j)));
  }
}

template <typename Real, typename F>
  requires std::invocable<F, std::uint64_t>
void apply_basis_oracle(BasicStateVector<Real>& state, const Register& input,
                        const Register& output, F&& f) {
  std::vector<std::uint64_t> table(input.size());
  for (std::uint64_t v = 0; v < table.size(); ++v) table[v] = f(v);
  apply_basis_oracle(state, input, output, std::span<const std::uint64_t>(table));
}

/// Applies gates[v] to `target` on the branch where `selector` holds v.
template <typename Real>
void apply_multiplexed(BasicStateVector<Real>& state, const Register& selector, int target,
                       std::span<const Matrix2<Real>> gates,
                       std::span<const Control> controls = {}) {
  state.check_register(selector);
  state.check_qubit(target);
  if (selector.contains(target)) throw ValidationError("multiplexer target inside selector");
  if (gates.size() != selector.size()) {
    throw ValidationError("multiplexer needs one gate per selector value");
  }
  for (const Control& c : controls) {
    state.check_qubit(c.qubit);
    if (selector.contains(c.qubit) || c.qubit == target) {
      throw ValidationError("multiplexer control overlaps selector or target");
    }
  }
  const std::uint64_t cmask = detail::control_mask(controls);
  const std::uint64_t cbits = detail::control_bits(controls);
  const std::uint64_t step = std::uint64_t{1} << target;
  auto& a = state.mutable_amplitudes();
  for (std::uint64_t i0 = 0; i0 < state.dim(); ++i0) {
    if ((i0 & step) || (i0 & cmask) != cbits) continue;
    const auto& u = gates[selector.extract(i0)];
    const auto j0 = static_cast<Eigen::Index>(i0);
    const auto j1 = static_cast<Eigen::Index>(i0 | step);
    const auto x0 = a(j0);
    const auto x1 = a(j1);
    a(j0) = u(0, 0) * x0 + u(0, 1) * x1;
    a(j1) = u(1, 0) * x0 + u(1, 1) * x1;
  }
}

/// Probability that `qubit` reads 1.
template <typename Real>
Real probability_one(const BasicStateVector<Real>& state, int qubit) {
  state.check_qubit(qubit);
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  Real p = 0;
  const auto& a = state.amplitudes();
  for (std::uint64_t i = 0; i < state.dim(); ++i) {
    if (i & bit) p += std::norm(a(static_cast<Eigen::Index>(i)));
  }
  return p;
}

/// Zeroes every amplitude where `qubit` != bit and returns the kept weight.
/// The result is left unnormalized.
template <typename Real>
Real project(BasicStateVector<Real>& state, int qubit, int bit) {
  state.check_qubit(qubit);
  const std::uint64_t mask = std::uint64_t{1} << qubit;
  const std::uint64_t want = bit ? mask : 0;
  Real kept = 0;
  auto& a = state.mutable_amplitudes();
  for (std::uint64_t i = 0; i < state.dim(); ++i) {
    const auto j = static_cast<Eigen::Index>(i);
    if ((i & mask) == want) {
      kept += std::norm(a(j));
    } else {
      a(j) = 0;
    }
  }
  return kept;
}

inline constexpr double kDegenerateProbability = 1e-24;

/// Renormalized branch with `qubit` == bit, and the branch probability.
template <typename Real>
std::pair<BasicStateVector<Real>, Real> postselect(const BasicStateVector<Real>& state,
                                                   int qubit, int bit) {
  if (bit != 0 && bit != 1) throw ValidationError("postselected bit must be 0 or 1");
  BasicStateVector<Real> branch = state;
  const Real p = project(branch, qubit, bit);
  if (p <= Real(kDegenerateProbability)) {
    throw DegenerateBranchError("postselected branch has zero probability");
  }
  branch.mutable_amplitudes() /= std::sqrt(p);
  return {std::move(branch), p};
}

template <typename Real>
BasicMeasurementOutcome<Real> measure(const BasicStateVector<Real>& state, int qubit, Rng& rng) {
  const Real p1 = probability_one(state, qubit);
  const int bit = uniform01(rng) < static_cast<double>(p1) ? 1 : 0;
  auto [collapsed, p] = postselect(state, qubit, bit);
  return {bit, p, std::move(collapsed)};
}

template <typename Real>
std::complex<Real> inner_product(const BasicStateVector<Real>& a, const BasicStateVector<Real>& b) {
  if (a.n_qubits() != b.n_qubits()) throw ValidationError("state dimensions differ");
  return a.amplitudes().dot(b.amplitudes());
}

/// |<a|b>|.
template <typename Real>
Real fidelity(const BasicStateVector<Real>& a, const BasicStateVector<Real>& b) {
  return std::min(Real(1), std::abs(inner_product(a, b)));
}

/// a (x) b with a's qubits as the high-order bits.
template <typename Real>
BasicStateVector<Real> tensor(const BasicStateVector<Real>& a, const BasicStateVector<Real>& b) {
  const int n = a.n_qubits() + b.n_qubits();
  if (n > qubit_cap()) {
    throw ResourceError("tensor product of " + std::to_string(n) + " qubits exceeds cap");
  }
  typename BasicStateVector<Real>::Vector out(Eigen::Index{1} << n);
  const auto db = static_cast<Eigen::Index>(b.dim());
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(a.dim()); ++i) {
    out.segment(i * db, db) = a.amplitudes()(i) * b.amplitudes();
  }
  return BasicStateVector<Real>::from_amplitudes(std::move(out), false, Real(1e-9));
}

/// Adds `k` fresh |0> qubits above the existing ones.
template <typename Real>
BasicStateVector<Real> extend(const BasicStateVector<Real>& s, int k) {
  if (k == 0) return s;
  return tensor(BasicStateVector<Real>(k), s);
}

/// Marginal distribution of a register's value.
template <typename Real>
Eigen::Matrix<Real, Eigen::Dynamic, 1> register_distribution(const BasicStateVector<Real>& s,
                                                             const Register& r) {
  s.check_register(r);
  Eigen::Matrix<Real, Eigen::Dynamic, 1> p =
      Eigen::Matrix<Real, Eigen::Dynamic, 1>::Zero(static_cast<Eigen::Index>(r.size()));
  for (std::uint64_t i = 0; i < s.dim(); ++i) {
    p(static_cast<Eigen::Index>(r.extract(i))) += std::norm(s[i]);
  }
  return p;
}

/// Joint distribution P(row = value of `rows`, col = value of `cols`).
template <typename Real>
Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> joint_distribution(
    const BasicStateVector<Real>& s, const Register& rows, const Register& cols) {
  s.check_register(rows);
  s.check_register(cols);
  if (rows.overlaps(cols)) throw ValidationError("joint distribution registers overlap");
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> p =
      Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>::Zero(
          static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::uint64_t i = 0; i < s.dim(); ++i) {
    p(static_cast<Eigen::Index>(rows.extract(i)), static_cast<Eigen::Index>(cols.extract(i))) +=
        std::norm(s[i]);
  }
  return p;
}

/// Debug dump: one "index, re, im" line per amplitude in index order.
template <typename Real>
void write_dump(std::ostream& os, const BasicStateVector<Real>& s) {
  const auto old = os.precision(17);
  for (std::uint64_t i = 0; i < s.dim(); ++i) {
    os << i << ", " << s[i].real() << ", " << s[i].imag() << '\n';
  }
  os.precision(old);
}

}  // namespace qconv
