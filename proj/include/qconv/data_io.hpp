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

// Data vectors from text and binary files.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qconv {

/// One value per line: "re" or "re,im". Blank lines and lines starting with
/// '#' are skipped.
Eigen::VectorXcd read_csv_vector(std::istream& in);
Eigen::VectorXcd read_csv_vector(const std::filesystem::path& path);

/// Packed little-endian float64 values, all real.
Eigen::VectorXcd read_raw_f64(const std::filesystem::path& path);

/// By extension: .bin and .f64 are raw, anything else is CSV. With
/// `normalize` the vector is scaled to unit norm.
Eigen::VectorXcd load_vector(const std::filesystem::path& path, bool normalize);

/// Parses "0.6,0.8" or "0.5+0.5i,-0.5i" style inline lists.
Eigen::VectorXcd parse_inline_vector(const std::string& text);

/// Comma-separated table with a header line; values printed with 17
/// significant digits.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace qconv
