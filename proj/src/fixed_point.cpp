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

#include "qconv/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "qconv/error.hpp"

namespace qconv {

FixedPointCodec::FixedPointCodec(int frac_bits, bool is_signed, int int_bits)
    : frac_bits_(frac_bits), int_bits_(int_bits), signed_(is_signed) {
  if (frac_bits < 1 || int_bits < 0 || width() > 52) {
    throw ValidationError("fixed-point format needs 1 <= frac_bits and width <= 52");
  }
}

double FixedPointCodec::resolution() const { return std::ldexp(1.0, -frac_bits_); }

double FixedPointCodec::min_value() const {
  return signed_ ? -std::ldexp(1.0, int_bits_) : 0.0;
}

double FixedPointCodec::max_value() const {
  return std::ldexp(1.0, int_bits_) - resolution();
}

std::uint64_t FixedPointCodec::encode(double v) const {
  if (!std::isfinite(v) || v < min_value() || v >= std::ldexp(1.0, int_bits_)) {
    throw DomainError("value " + std::to_string(v) + " outside the fixed-point range");
  }
  return encode_saturating(v);
}

std::uint64_t FixedPointCodec::encode_saturating(double v) const {
  if (std::isnan(v)) throw DomainError("cannot encode NaN");
  const double scale = std::ldexp(1.0, frac_bits_);
  const auto lo = static_cast<std::int64_t>(std::llround(min_value() * scale));
  const auto hi = static_cast<std::int64_t>(std::llround(max_value() * scale));
  const double clamped = std::clamp(v, min_value(), max_value());
  auto k = static_cast<std::int64_t>(std::floor(clamped * scale + 0.5));
  k = std::clamp(k, lo, hi);
  return static_cast<std::uint64_t>(k) & (size() - 1);
}

double FixedPointCodec::decode(std::uint64_t bits) const {
  if (bits >= size()) throw ValidationError("bit pattern wider than the codec");
  auto k = static_cast<std::int64_t>(bits);
  if (signed_ && (bits >> (width() - 1)) != 0) k -= static_cast<std::int64_t>(size());
  return std::ldexp(static_cast<double>(k), -frac_bits_);
}

std::string FixedPointCodec::to_bitstring(std::uint64_t bits) const {
  std::string s(static_cast<std::size_t>(width()), '0');
  for (int i = 0; i < width(); ++i) {
    if ((bits >> i) & 1) s[static_cast<std::size_t>(width() - 1 - i)] = '1';
  }
  return s;
}

FunctionOracle::FunctionOracle(std::string name, FixedPointCodec input, FixedPointCodec output,
                               Fn strict, Fn total)
    : name_(std::move(name)), input_(input), output_(output), strict_(std::move(strict)) {
  auto table = std::make_shared<std::vector<std::uint64_t>>(input_.size());
  for (std::uint64_t b = 0; b < input_.size(); ++b) {
    (*table)[b] = output_.encode_saturating(total(input_.decode(b)));
  }
  table_ = std::move(table);
}

AngleCodec::AngleCodec(int frac_bits, bool with_sign) : frac_bits_(frac_bits), with_sign_(with_sign) {
  if (frac_bits < 1 || frac_bits > 24) throw ValidationError("angle register needs 1..24 fraction bits");
}

std::uint64_t AngleCodec::encode(double v) const {
  if (!std::isfinite(v) || std::abs(v) > 1) {
    throw DomainError("amplitude " + std::to_string(v) + " outside [-1, 1]");
  }
  if (v < 0 && !with_sign_) throw DomainError("negative amplitude needs a sign bit");
  const double phi = 2 / std::numbers::pi * std::acos(std::abs(v));
  const std::uint64_t k = static_cast<std::uint64_t>(std::floor(std::ldexp(phi, frac_bits_) + 0.5));
  const std::uint64_t magnitude = std::min(k, std::uint64_t{1} << frac_bits_);
  return magnitude | (v < 0 ? std::uint64_t{1} << sign_bit() : 0);
}

double AngleCodec::phi(std::uint64_t bits) const {
  const std::uint64_t magnitude = bits & ((std::uint64_t{2} << frac_bits_) - 1);
  return std::ldexp(static_cast<double>(magnitude), -frac_bits_);
}

double AngleCodec::amplitude(std::uint64_t bits) const {
  const double a = std::cos(std::numbers::pi * phi(bits) / 2);
  const bool negative = with_sign_ && ((bits >> sign_bit()) & 1);
  return negative ? -a : a;
}

FunctionOracle arccos_oracle(int m) {
  auto total = [](double d) { return 2 / std::numbers::pi * std::acos(std::clamp(d, 0.0, 1.0)); };
  auto strict = [total](double d) {
    if (!(d >= 0 && d <= 1)) throw DomainError("arccos oracle needs d in [0, 1]");
    return total(d);
  };
  return FunctionOracle("arccos", FixedPointCodec(m), FixedPointCodec(m, false, 1), strict, total);
}

namespace {

double sin2_symmetric(double theta) {
  const double t = std::min(theta, 1 - theta);
  const double s = std::sin(std::numbers::pi * t);
  return s * s;
}

}  // namespace

FunctionOracle abs_recovery_oracle(int m, int t) {
  const double window = std::ldexp(1.0, -m);
  auto total = [](double theta) { return std::sqrt(std::max(0.0, 2 * sin2_symmetric(theta) - 1)); };
  auto strict = [window](double theta) {
    if (!(theta >= 0 && theta <= 1)) throw DomainError("theta must lie in [0, 1]");
    const double radicand = 2 * sin2_symmetric(theta) - 1;
    if (radicand < -window) throw DomainError("abs recovery radicand is negative");
    return std::sqrt(std::max(0.0, radicand));
  };
  return FunctionOracle("abs_recovery", FixedPointCodec(t), FixedPointCodec(m), strict, total);
}

FunctionOracle real_recovery_oracle(int m, int t) {
  auto total = [](double theta) { return 2 * sin2_symmetric(theta) - 1; };
  auto strict = [total](double theta) {
    if (!(theta >= 0 && theta <= 1)) throw DomainError("theta must lie in [0, 1]");
    return total(theta);
  };
  return FunctionOracle("real_recovery", FixedPointCodec(t), FixedPointCodec(m, true), strict,
                        total);
}

namespace {

struct Registry {
  std::mutex mu;
  std::map<std::string, Activation> entries;

  Registry() {
    auto add = [this](std::string name, bool uses_imag, std::function<double(double, double)> fn) {
      entries.emplace(name, Activation{name, uses_imag, std::move(fn)});
    };
    add("identity", false, [](double x, double) { return x; });
    add("tanh", false, [](double x, double) { return std::tanh(x); });
    add("relu-capped", false, [](double x, double) { return std::clamp(x, 0.0, 1.0); });
    add("square", false, [](double x, double) { return x * x; });
    add("product", true, [](double x, double y) { return x * y; });
  }
};

Registry& registry() {
  static Registry r;
  return r;
}

void check_range(const std::string& name, double v, bool is_signed) {
  const double lo = is_signed ? -1.0 : 0.0;
  if (!std::isfinite(v) || v < lo || v > 1) {
    throw DomainError("activation '" + name + "' leaves its range (value " + std::to_string(v) + ")");
  }
}

}  // namespace

const Activation& find_activation(const std::string& name) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  auto it = r.entries.find(name);
  if (it == r.entries.end()) throw ValidationError("unknown activation '" + name + "'");
  return it->second;
}

std::vector<std::string> activation_names() {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  std::vector<std::string> names;
  for (const auto& [k, v] : r.entries) names.push_back(k);
  return names;
}

void register_activation(Activation activation) {
  if (activation.name.empty() || !activation.fn) throw ValidationError("activation needs a name and a function");
  auto& r = registry();
  std::lock_guard lock(r.mu);
  r.entries.insert_or_assign(activation.name, std::move(activation));
}

FunctionOracle activation_oracle(const std::string& name, int m, bool is_signed) {
  const Activation f = find_activation(name);
  if (f.uses_imag) throw ValidationError("activation '" + name + "' needs two arguments");
  const FixedPointCodec codec(m, is_signed);
  for (std::uint64_t b = 0; b < codec.size(); ++b) check_range(name, f(codec.decode(b)), is_signed);
  auto total = [f](double x) { return f(x); };
  auto strict = [f, is_signed](double x) {
    const double v = f(x);
    check_range(f.name, v, is_signed);
    return v;
  };
  return FunctionOracle(name, codec, codec, strict, total);
}

void probe_activation_range(const Activation& activation, const FixedPointCodec& x,
                            const FixedPointCodec& y, bool is_signed) {
  for (std::uint64_t a = 0; a < x.size(); ++a) {
    for (std::uint64_t b = 0; b < (activation.uses_imag ? y.size() : 1); ++b) {
      check_range(activation.name, activation(x.decode(a), activation.uses_imag ? y.decode(b) : 0.0),
                  is_signed);
    }
  }
}

}  // namespace qconv
