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

#ifndef LOCALGT_ALGORITHMS_H_
#define LOCALGT_ALGORITHMS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "localgt/linalg.h"
#include "localgt/problems.h"
#include "localgt/topology.h"

namespace localgt {

enum class Algorithm { kDgd, kDgt };

const char* AlgorithmName(Algorithm a);
// Accepts "dgd" and "dgt"; throws InvalidArgument("unknown algorithm ...").
Algorithm ParseAlgorithm(std::string_view name);

// Iterates of both methods, stacked column-wise: column i of `x` is agent i's
// model. `y` holds the gradient trackers (DGT only) and `grad` caches ∇F(X)
// at the current round start so the tracker update reuses it.
struct AlgorithmState {
  Algorithm algorithm = Algorithm::kDgt;
  // Additional local updates per round; a round costs K + 1 gradient
  // evaluations per agent.
  std::size_t K = 0;
  double eta = 0.0;
  std::size_t round = 0;
  Matrix x;
  std::optional<Matrix> y;
  std::optional<Matrix> grad;
  // Worker threads for per-agent gradient work; 0 or 1 runs sequentially.
  std::size_t threads = 0;

  std::size_t dim() const { return x.rows(); }
  std::size_t num_agents() const { return x.cols(); }
};

struct InitPolicy {
  enum class Kind { kZeros, kSharedRandom, kPerAgentRandom };
  Kind kind = Kind::kZeros;
  std::uint64_t seed = 0;

  static InitPolicy Zeros() { return {}; }
  static InitPolicy SharedRandom(std::uint64_t seed) { return {Kind::kSharedRandom, seed}; }
  static InitPolicy PerAgentRandom(std::uint64_t seed) { return {Kind::kPerAgentRandom, seed}; }
};

AlgorithmState InitState(const Problem& p, const MixingMatrix& w, Algorithm algo,
                         std::size_t K, double eta,
                         InitPolicy init = InitPolicy::Zeros(),
                         std::size_t threads = 0);

// The K + 1 inner iterates X_{r,0..K} of one round (and Y_{r,0..K} for DGT).
struct RoundIterates {
  std::vector<Matrix> x;
  std::vector<Matrix> y;
};

// ∇F(X): column i is ∇f_i(x^i).
Matrix StackedGradient(const Problem& p, const Matrix& x, std::size_t threads = 0);

// One round of local DGD: K local gradient steps, then one more gradient
// step fused with the gossip average,
//   x^i ← Σ_j w_ij (x^j - η∇f_j(x^j)).
// Throws DivergenceError if any entry leaves [-1e100, 1e100].
void StepRoundDgd(AlgorithmState& state, const Problem& p, const MixingMatrix& w,
                  RoundIterates* inner = nullptr);

// One round of local DGT in stacked form:
//   X_{r,k+1} = X_{r,k} - η(Y_r + ∇F(X_{r,k}) - ∇F(X_r)),  k < K
//   Y_{r,k+1} = Y_r + ∇F(X_{r,k+1}) - ∇F(X_r)
//   X_{r+1}   = (X_{r,K} - ηY_{r,K}) W
//   Y_{r+1}   = (Y_{r,K} + ∇F(X_{r+1}) - ∇F(X_{r,K})) W
void StepRoundDgt(AlgorithmState& state, const Problem& p, const MixingMatrix& w,
                  RoundIterates* inner = nullptr);

// Dispatches on state.algorithm.
void StepRound(AlgorithmState& state, const Problem& p, const MixingMatrix& w,
               RoundIterates* inner = nullptr);

// x̄: mean of the columns.
Vector ColumnMean(const Matrix& x);

}  // namespace localgt

#endif  // LOCALGT_ALGORITHMS_H_
