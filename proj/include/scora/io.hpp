// Copyright 2026 The scora Authors.
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

#ifndef SCORA_IO_HPP_
#define SCORA_IO_HPP_

// CSV files. Entity indices are 0-based.
//
//   dataset       kind,first,second,value     (second empty for ratings)
//   ground truth  entity,theta_dagger
//   clusters      entity,cluster
//   scores        entity,score

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "scora/core_model.hpp"
#include "scora/error.hpp"

namespace scora::io {

// Shortest text that parses back to the same double.
inline std::string FormatDouble(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

inline double ParseDouble(std::string_view s, const std::string& where) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw InputError(where + ": cannot parse '" + std::string(s) + "' as a number");
  }
  return v;
}

inline int ParseIndex(std::string_view s, const std::string& where) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || v < 0) {
    throw InputError(where + ": cannot parse '" + std::string(s) + "' as an index");
  }
  return v;
}

namespace detail {

inline std::string_view StripCr(const std::string& line) {
  std::string_view v(line);
  if (!v.empty() && v.back() == '\r') v.remove_suffix(1);
  return v;
}

inline void ExpectHeader(std::istream& in, std::string_view header) {
  std::string line;
  if (!std::getline(in, line) || StripCr(line) != header) {
    throw InputError("expected CSV header '" + std::string(header) + "'");
  }
}

}  // namespace detail

inline void WriteDatasetCsv(std::ostream& out, const Dataset& data) {
  out << "kind,first,second,value\n";
  for (const auto& c : data.comparisons) {
    out << "comparison," << c.first << ',' << c.second << ','
        << FormatDouble(c.value) << '\n';
  }
  for (const auto& r : data.ratings) {
    out << "rating," << r.entity << ",," << FormatDouble(r.value) << '\n';
  }
}

inline Dataset ReadDatasetCsv(std::istream& in) {
  detail::ExpectHeader(in, "kind,first,second,value");
  Dataset data;
  std::string line;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view v = detail::StripCr(line);
    if (v.empty()) continue;
    const std::string where = "dataset line " + std::to_string(lineno);
    auto f = SplitFields(v);
    if (f.size() != 4) throw InputError(where + ": expected 4 fields");
    if (f[0] == "comparison") {
      data.comparisons.push_back({ParseIndex(f[1], where), ParseIndex(f[2], where),
                                  ParseDouble(f[3], where)});
    } else if (f[0] == "rating") {
      if (!f[2].empty()) throw InputError(where + ": rating with a second entity");
      data.ratings.push_back({ParseIndex(f[1], where), ParseDouble(f[3], where)});
    } else {
      throw InputError(where + ": unknown kind '" + std::string(f[0]) + "'");
    }
  }
  return data;
}

// Two-column "entity,<name>" table of reals.
inline void WriteEntityColumnCsv(std::ostream& out, std::string_view name,
                                 const Vector& values) {
  out << "entity," << name << '\n';
  for (Eigen::Index a = 0; a < values.size(); ++a) {
    out << a << ',' << FormatDouble(values(a)) << '\n';
  }
}

inline Vector ReadEntityColumnCsv(std::istream& in, std::string_view name) {
  detail::ExpectHeader(in, "entity," + std::string(name));
  std::vector<double> values;
  std::string line;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view v = detail::StripCr(line);
    if (v.empty()) continue;
    const std::string where = "line " + std::to_string(lineno);
    auto f = SplitFields(v);
    if (f.size() != 2) throw InputError(where + ": expected 2 fields");
    if (ParseIndex(f[0], where) != static_cast<int>(values.size())) {
      throw InputError(where + ": entities must be listed in order from 0");
    }
    values.push_back(ParseDouble(f[1], where));
  }
  return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

inline void WriteClustersCsv(std::ostream& out, const std::vector<int>& clusters) {
  out << "entity,cluster\n";
  for (std::size_t a = 0; a < clusters.size(); ++a) {
    out << a << ',' << clusters[a] << '\n';
  }
}

inline std::vector<int> ReadClustersCsv(std::istream& in) {
  const Vector v = ReadEntityColumnCsv(in, "cluster");
  std::vector<int> clusters(v.size());
  for (Eigen::Index a = 0; a < v.size(); ++a) {
    clusters[a] = static_cast<int>(v(a));
    if (clusters[a] != v(a) || clusters[a] < 0) {
      throw InputError("cluster ids must be nonnegative integers");
    }
  }
  return clusters;
}

}  // namespace scora::io

#endif  // SCORA_IO_HPP_
