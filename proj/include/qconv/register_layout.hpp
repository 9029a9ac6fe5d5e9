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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qconv {

/// A contiguous range of qubits. The lowest qubit carries the least
/// significant bit of the register value.
struct Register {
  int offset = 0;
  int width = 0;

  constexpr int end() const { return offset + width; }
  constexpr int qubit(int i) const { return offset + i; }
  constexpr bool contains(int q) const { return q >= offset && q < end(); }
  constexpr std::uint64_t size() const { return std::uint64_t{1} << width; }
  constexpr std::uint64_t mask() const {
    return width == 0 ? 0 : (((std::uint64_t{1} << width) - 1) << offset);
  }
  constexpr std::uint64_t extract(std::uint64_t index) const {
    return (index & mask()) >> offset;
  }
  constexpr std::uint64_t deposit(std::uint64_t value) const {
    return (value << offset) & mask();
  }
  constexpr bool overlaps(const Register& o) const {
    return width > 0 && o.width > 0 && offset < o.end() && o.offset < end();
  }
  friend constexpr bool operator==(const Register&, const Register&) = default;
};

/// Named, pairwise-disjoint registers allocated bottom-up from qubit 0.
class RegisterLayout {
 public:
  RegisterLayout() = default;

  /// Appends a register above every existing one.
  Register add(std::string name, int width);

  const Register& operator[](std::string_view name) const;
  bool has(std::string_view name) const;
  int total() const { return total_; }
  const std::vector<std::pair<std::string, Register>>& registers() const {
    return registers_;
  }

  /// Every qubit of `total()` belongs to exactly one register.
  bool is_valid() const;

 private:
  std::vector<std::pair<std::string, Register>> registers_;
  int total_ = 0;
};

}  // namespace qconv
