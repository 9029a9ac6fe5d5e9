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

#include "qconv/register_layout.hpp"

#include <algorithm>

#include "qconv/error.hpp"

namespace qconv {

Register RegisterLayout::add(std::string name, int width) {
  if (width < 0) throw ValidationError("register '" + name + "' has negative width");
  if (has(name)) throw ValidationError("duplicate register '" + name + "'");
  Register r{total_, width};
  registers_.emplace_back(std::move(name), r);
  total_ += width;
  return r;
}

const Register& RegisterLayout::operator[](std::string_view name) const {
  for (const auto& [n, r] : registers_) {
    if (n == name) return r;
  }
  throw ValidationError("unknown register '" + std::string(name) + "'");
}

bool RegisterLayout::has(std::string_view name) const {
  return std::any_of(registers_.begin(), registers_.end(),
                     [&](const auto& e) { return e.first == name; });
}

bool RegisterLayout::is_valid() const {
  std::vector<int> owner(static_cast<std::size_t>(total_), 0);
  for (const auto& [n, r] : registers_) {
    if (r.offset < 0 || r.end() > total_) return false;
    for (int q = r.offset; q < r.end(); ++q) ++owner[static_cast<std::size_t>(q)];
  }
  return std::all_of(owner.begin(), owner.end(), [](int c) { return c == 1; });
}

}  // namespace qconv
