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

#ifndef LOCALGT_LIBSVM_H_
#define LOCALGT_LIBSVM_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "localgt/errors.h"
#include "localgt/problems.h"

namespace localgt {

// A parsed LIBSVM line. Indices are 1-based and strictly increasing.
struct SparseSample {
  double label = 0.0;
  std::vector<std::pair<std::size_t, double>> entries;
  std::size_t line = 0;

  friend bool operator==(const SparseSample& a, const SparseSample& b) {
    return a.label == b.label && a.entries == b.entries;
  }
};

class LibsvmError : public ParseError {
 public:
  enum class Kind { kMalformedToken, kNonIncreasingIndex, kIndexOutOfRange, kEmptyInput };

  LibsvmError(Kind kind, const std::string& what, std::size_t line)
      : ParseError(what, line), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Parses "<label> <idx>:<val> ..." lines. Labels 0 and -1 map to -1, labels
// 1 and +1 map to +1; anything else is a malformed token. Blank lines are
// skipped but still counted for line numbers.
std::vector<SparseSample> ParseLibsvm(std::istream& in);

// Writes samples back out; ParseLibsvm of the result reproduces them.
void WriteLibsvm(std::ostream& out, std::span<const SparseSample> samples);

// Expands to dense d-dimensional vectors; index k lands at position k - 1.
std::vector<LabeledSample> Densify(std::span<const SparseSample> samples,
                                   std::size_t d);

}  // namespace localgt

#endif  // LOCALGT_LIBSVM_H_
