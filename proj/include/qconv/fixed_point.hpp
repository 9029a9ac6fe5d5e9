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

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace qconv {

/// Binary fraction with `frac_bits` fraction bits, `int_bits` integer bits
/// and, when signed, a two's-complement sign bit on top.
///
/// Unsigned values cover [0, 2^int_bits); signed values cover
/// [-2^int_bits, 2^int_bits). Rounding is to nearest, ties up.
class FixedPointCodec {
 public:
  explicit FixedPointCodec(int frac_bits, bool is_signed = false, int int_bits = 0);

  int frac_bits() const { return frac_bits_; }
  int int_bits() const { return int_bits_; }
  bool is_signed() const { return signed_; }
  int width() const { return frac_bits_ + int_bits_ + (signed_ ? 1 : 0); }
  std::uint64_t size() const { return std::uint64_t{1} << width(); }
  double resolution() const;
  double min_value() const;
  double max_value() const;

  /// Nearest representable value. Throws DomainError outside the range;
  /// values inside the range that round past max_value() saturate.
  std::uint64_t encode(double v) const;
  /// Clamps into [min_value(), max_value()] first.
  std::uint64_t encode_saturating(double v) const;
  double decode(std::uint64_t bits) const;
  double quantize(double v) const { return decode(encode_saturating(v)); }

  /// Most significant bit first.
  std::string to_bitstring(std::uint64_t bits) const;

  friend bool operator==(const FixedPointCodec&, const FixedPointCodec&) = default;

 private:
  int frac_bits_;
  int int_bits_;
  bool signed_;
};

/// A real function tabulated over every input bit pattern.
class FunctionOracle {
 public:
  using Fn = std::function<double(double)>;

  /// `strict` evaluates the true function and throws DomainError outside
  /// the mathematical domain; `total` is what the table is built from and
  /// must accept every decodable input.
  FunctionOracle(std::string name, FixedPointCodec input, FixedPointCodec output, Fn strict,
                 Fn total);

  const std::string& name() const { return name_; }
  const FixedPointCodec& input() const { return input_; }
  const FixedPointCodec& output() const { return output_; }

  double evaluate(double x) const { return strict_(x); }
  std::uint64_t operator()(std::uint64_t bits) const { return (*table_)[bits]; }
  double decoded(std::uint64_t bits) const { return output_.decode((*table_)[bits]); }
  std::shared_ptr<const std::vector<std::uint64_t>> table() const { return table_; }

 private:
  std::string name_;
  FixedPointCodec input_;
  FixedPointCodec output_;
  Fn strict_;
  std::shared_ptr<const std::vector<std::uint64_t>> table_;
};

/// Rotation-angle register used by digital-to-analog conversion:
/// phi = (2/pi) acos(|v|) with `frac_bits` fraction bits and one integer bit
/// (so phi = 1 is exact), plus a sign bit above when `with_sign` is set.
class AngleCodec {
 public:
  AngleCodec(int frac_bits, bool with_sign);

  int frac_bits() const { return frac_bits_; }
  bool with_sign() const { return with_sign_; }
  int width() const { return frac_bits_ + 1 + (with_sign_ ? 1 : 0); }
  /// Qubit offset of the sign bit within the register.
  int sign_bit() const { return frac_bits_ + 1; }

  std::uint64_t encode(double v) const;
  /// Magnitude of phi in [0, 1].
  double phi(std::uint64_t bits) const;
  /// The amplitude the rotation realizes: sign * cos(pi phi / 2).
  double amplitude(std::uint64_t bits) const;

 private:
  int frac_bits_;
  bool with_sign_;
};

/// phi = (2/pi) acos(d) for d in [0, 1), output with one integer bit.
FunctionOracle arccos_oracle(int m);

/// r = sqrt(2 sin^2(pi theta) - 1) from a t-bit theta into m unsigned bits.
/// Radicands down to -2^-m clamp to 0; the table clamps every input.
FunctionOracle abs_recovery_oracle(int m, int t);

/// x = 2 sin^2(pi theta) - 1 from a t-bit theta into m + 1 signed bits.
FunctionOracle real_recovery_oracle(int m, int t);

/// Named activation f(x, y) of a complex value's real and imaginary parts.
struct Activation {
  std::string name;
  /// Whether f reads the imaginary part.
  bool uses_imag = false;
  std::function<double(double, double)> fn;
  double operator()(double x, double y = 0) const { return fn(x, y); }
};

/// identity, tanh, relu-capped, square, product (x*y), plus anything added
/// with register_activation.
const Activation& find_activation(const std::string& name);
std::vector<std::string> activation_names();
void register_activation(Activation activation);

/// Tabulates a unary activation over the m-bit codec (signed: m + 1 bits).
/// Probes every input and throws DomainError when an output leaves [0, 1]
/// (unsigned) or [-1, 1] (signed).
FunctionOracle activation_oracle(const std::string& name, int m, bool is_signed);

/// Same range probe for a two-argument activation over signed inputs.
void probe_activation_range(const Activation& activation, const FixedPointCodec& x,
                            const FixedPointCodec& y, bool is_signed);

}  // namespace qconv
