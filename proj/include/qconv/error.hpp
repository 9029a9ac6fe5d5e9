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

#include <stdexcept>
#include <string>

namespace qconv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments: index out of range, register overlap, width mismatch,
/// malformed configuration.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Qubit cap or memory budget exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Postselection onto a branch with zero probability.
class DegenerateBranchError : public Error {
 public:
  using Error::Error;
};

/// Function evaluated outside its domain, or its range escapes the codec.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace qconv
