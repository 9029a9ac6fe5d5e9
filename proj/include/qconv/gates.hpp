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

#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "qconv/state_vector.hpp"

namespace qconv::gates {

template <typename Real = double>
Matrix2<Real> H() {
  const Real s = Real(1) / std::sqrt(Real(2));
  Matrix2<Real> m;
  m << s, s, s, -s;
  return m;
}

template <typename Real = double>
Matrix2<Real> X() {
  Matrix2<Real> m;
  m << 0, 1, 1, 0;
  return m;
}

template <typename Real = double>
Matrix2<Real> Y() {
  using C = std::complex<Real>;
  Matrix2<Real> m;
  m << C(0), C(0, -1), C(0, 1), C(0);
  return m;
}

template <typename Real = double>
Matrix2<Real> Z() {
  Matrix2<Real> m;
  m << 1, 0, 0, -1;
  return m;
}

template <typename Real = double>
Matrix2<Real> diag(std::complex<Real> a, std::complex<Real> b) {
  Matrix2<Real> m;
  m << a, 0, 0, b;
  return m;
}

/// diag(1, e^{i phi}).
template <typename Real = double>
Matrix2<Real> phase(Real phi) {
  return diag<Real>(1, std::polar(Real(1), phi));
}

template <typename Real = double>
Matrix2<Real> S() {
  return diag<Real>(1, std::complex<Real>(0, 1));
}

template <typename Real = double>
Matrix2<Real> Sdg() {
  return diag<Real>(1, std::complex<Real>(0, -1));
}

/// exp(-i theta Y / 2): |0> -> cos(theta/2)|0> + sin(theta/2)|1>.
template <typename Real = double>
Matrix2<Real> ry(Real theta) {
  const Real c = std::cos(theta / 2), s = std::sin(theta / 2);
  Matrix2<Real> m;
  m << c, -s, s, c;
  return m;
}

/// exp(-i theta Z / 2).
template <typename Real = double>
Matrix2<Real> rz(Real theta) {
  return diag<Real>(std::polar(Real(1), -theta / 2), std::polar(Real(1), theta / 2));
}

/// I - 2|0><0| restricted to one qubit, used as the core of zero reflections.
template <typename Real = double>
Matrix2<Real> zero_flip() {
  return diag<Real>(-1, 1);
}

}  // namespace qconv::gates
