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

#ifndef LOCALGT_TESTS_TEST_UTIL_H_
#define LOCALGT_TESTS_TEST_UTIL_H_

#include <cstdint>

#include "localgt/linalg.h"
#include "localgt/problems.h"
#include "localgt/rng.h"

namespace localgt::testing {

inline Matrix RandomMatrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (double& v : m.data()) v = rng.Normal();
  return m;
}

inline Vector RandomVector(std::size_t n, Rng& rng) {
  Vector v(n);
  for (double& e : v) e = rng.Normal();
  return v;
}

// Small ridge logistic instance with labels in {-1, +1}.
inline Problem RandomLogistic(std::size_t m, std::size_t n, std::size_t d,
                              double reg, Rng& rng) {
  Dataset data;
  data.dim = d;
  for (std::size_t i = 0; i < m; ++i) {
    AgentData a{RandomMatrix(n, d, rng), Vector(n)};
    for (double& y : a.targets) y = rng.Bernoulli(0.5) ? 1.0 : -1.0;
    data.agents.push_back(std::move(a));
  }
  return Problem::RidgeLogistic(std::move(data), reg);
}

// Least squares with random (generally non-interpolating) targets.
inline Problem RandomLeastSquares(std::size_t m, std::size_t n, std::size_t d,
                                  Rng& rng) {
  Dataset data;
  data.dim = d;
  for (std::size_t i = 0; i < m; ++i) {
    data.agents.push_back({RandomMatrix(n, d, rng), RandomVector(n, rng)});
  }
  return Problem::LeastSquares(std::move(data));
}

}  // namespace localgt::testing

#endif  // LOCALGT_TESTS_TEST_UTIL_H_
