// Copyright 2026 The localgt Authors
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

#include "localgt/libsvm.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

namespace localgt {
namespace {

using Kind = LibsvmError::Kind;

bool ParseDouble(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool ParseIndex(std::string_view s, std::size_t& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string_view> Tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

std::vector<SparseSample> ParseLibsvm(std::istream& in) {
  std::vector<SparseSample> samples;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tokens = Tokens(line);
    if (tokens.empty()) continue;

    SparseSample s;
    s.line = lineno;
    double label;
    if (!ParseDouble(tokens[0], label) ||
        (label != 0.0 && label != 1.0 && label != -1.0)) {
      throw LibsvmError(Kind::kMalformedToken,
                        "malformed label '" + std::string(tokens[0]) + "'", lineno);
    }
    s.label = label == 1.0 ? 1.0 : -1.0;

    std::size_t prev = 0;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const auto tok = tokens[t];
      const auto colon = tok.find(':');
      std::size_t idx;
      double val;
      if (colon == std::string_view::npos || !ParseIndex(tok.substr(0, colon), idx) ||
          idx == 0 || !ParseDouble(tok.substr(colon + 1), val)) {
        throw LibsvmError(Kind::kMalformedToken,
                          "malformed token '" + std::string(tok) + "'", lineno);
      }
      if (idx <= prev) {
        throw LibsvmError(Kind::kNonIncreasingIndex,
                          "non-increasing index " + std::to_string(idx) +
                              " after " + std::to_string(prev),
                          lineno);
      }
      prev = idx;
      s.entries.emplace_back(idx, val);
    }
    samples.push_back(std::move(s));
  }
  if (samples.empty()) throw LibsvmError(Kind::kEmptyInput, "empty input", lineno);
  return samples;
}

void WriteLibsvm(std::ostream& out, std::span<const SparseSample> samples) {
  char buf[32];
  for (const auto& s : samples) {
    out << (s.label > 0.0 ? "+1" : "-1");
    for (const auto& [idx, val] : s.entries) {
      std::snprintf(buf, sizeof buf, "%.17g", val);
      out << ' ' << idx << ':' << buf;
    }
    out << '\n';
  }
}

std::vector<LabeledSample> Densify(std::span<const SparseSample> samples,
                                   std::size_t d) {
  if (d == 0) throw InvalidArgument("Densify: dimension must be positive");
  std::vector<LabeledSample> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    LabeledSample dense{s.label, Vector(d, 0.0)};
    for (const auto& [idx, val] : s.entries) {
      if (idx > d) {
        throw LibsvmError(Kind::kIndexOutOfRange,
                          "index " + std::to_string(idx) + " exceeds dimension " +
                              std::to_string(d),
                          s.line);
      }
      dense.features[idx - 1] = val;
    }
    out.push_back(std::move(dense));
  }
  return out;
}

}  // namespace localgt
