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

#include "qconv/data_io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "qconv/error.hpp"

namespace qconv {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& text, const std::string& where) {
  std::string t = trim(text);
  if (t.size() > 1 && t[0] == '+') t.erase(0, 1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ValidationError(where + ": cannot parse '" + t + "' as a number");
  }
  return v;
}

// "a", "bi", "a+bi", "a-bi", "i", "-i".
std::complex<double> parse_complex(std::string t, const std::string& where) {
  t = trim(t);
  if (t.empty()) throw ValidationError(where + ": empty value");
  if (t.back() != 'i') return {parse_double(t, where), 0.0};
  t.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t i = t.size(); i-- > 1;) {
    if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_of = [&](std::string s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_double(s, where);
  };
  if (split == std::string::npos) return {0.0, imag_of(t)};
  return {parse_double(t.substr(0, split), where), imag_of(t.substr(split))};
}

void check_length(Eigen::Index n) {
  if (n < 2 || (n & (n - 1)) != 0) {
    throw ValidationError("data length " + std::to_string(n) + " is not a power of two >= 2");
  }
}

}  // namespace

Eigen::VectorXcd read_csv_vector(std::istream& in) {
  std::vector<std::complex<double>> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const std::string where = "line " + std::to_string(line_no);
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      values.emplace_back(parse_double(line, where), 0.0);
    } else {
      if (line.find(',', comma + 1) != std::string::npos) {
        throw ValidationError(where + ": expected at most two columns");
      }
      values.emplace_back(parse_double(line.substr(0, comma), where),
                          parse_double(line.substr(comma + 1), where));
    }
  }
  Eigen::VectorXcd v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
  return v;
}

Eigen::VectorXcd read_csv_vector(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  return read_csv_vector(in);
}

Eigen::VectorXcd read_raw_f64(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() % 8 != 0) throw ValidationError("raw file size is not a multiple of 8 bytes");
  Eigen::VectorXcd v(static_cast<Eigen::Index>(bytes.size() / 8));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::uint64_t word = 0;
    for (int b = 7; b >= 0; --b) {
      word = (word << 8) | static_cast<unsigned char>(bytes[static_cast<std::size_t>(8 * i + b)]);
    }
    const double d = std::bit_cast<double>(word);
    if (!std::isfinite(d)) throw ValidationError("raw value " + std::to_string(i) + " is not finite");
    v(i) = d;
  }
  return v;
}

Eigen::VectorXcd load_vector(const std::filesystem::path& path, bool normalize) {
  const std::string ext = path.extension().string();
  Eigen::VectorXcd v = (ext == ".bin" || ext == ".f64") ? read_raw_f64(path) : read_csv_vector(path);
  check_length(v.size());
  if (normalize) {
    if (v.norm() == 0) throw ValidationError("data vector is zero");
    v.normalize();
  }
  return v;
}

Eigen::VectorXcd parse_inline_vector(const std::string& text) {
  std::vector<std::complex<double>> values;
  std::stringstream ss(text);
  std::string item;
  int index = 0;
  while (std::getline(ss, item, ',')) {
    values.push_back(parse_complex(item, "value " + std::to_string(index++)));
  }
  Eigen::VectorXcd v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
  return v;
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  std::ostringstream cell;
  cell << std::setprecision(17);
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw ValidationError("CSV row width differs from header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      cell.str("");
      cell << row[i];
      out << (i ? "," : "") << cell.str();
    }
    out << '\n';
  }
}

}  // namespace qconv
