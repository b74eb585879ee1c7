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

#include "localgt/algorithms.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "localgt/errors.h"
#include "localgt/rng.h"

namespace localgt {
namespace {

constexpr double kDivergenceBound = 1e100;

template <typename Fn>
void ForEachAgent(std::size_t m, std::size_t threads, Fn&& fn) {
  if (threads <= 1 || m <= 1) {
    for (std::size_t i = 0; i < m; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min(threads, m);
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < m; i += workers) fn(i);
    });
  }
}

void CheckFinite(const Matrix& m, std::size_t round, const char* what) {
  for (double v : m.data()) {
    if (!(std::abs(v) <= kDivergenceBound)) {
      throw DivergenceError(std::string("diverged: ") + what +
                                " left the finite range in round " +
                                std::to_string(round),
                            round);
    }
  }
}

// a ← a + alpha·b
void AddScaled(Matrix& a, double alpha, const Matrix& b) {
  Axpy(alpha, b.data(), a.data());
}

}  // namespace

const char* AlgorithmName(Algorithm a) { return a == Algorithm::kDgd ? "dgd" : "dgt"; }

Algorithm ParseAlgorithm(std::string_view name) {
  if (name == "dgd") return Algorithm::kDgd;
  if (name == "dgt") return Algorithm::kDgt;
  throw InvalidArgument("unknown algorithm '" + std::string(name) + "'");
}

Vector ColumnMean(const Matrix& x) {
  Vector mean(x.rows(), 0.0);
  const double inv_m = 1.0 / static_cast<double>(x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    double s = 0.0;
    for (double v : x.row(r)) s += v;
    mean[r] = s * inv_m;
  }
  return mean;
}

Matrix StackedGradient(const Problem& p, const Matrix& x, std::size_t threads) {
  const std::size_t d = x.rows();
  const std::size_t m = x.cols();
  if (d != p.dim() || m != p.num_agents())
    throw InvalidArgument("StackedGradient: X must be d x m");
  Matrix g(d, m);
  ForEachAgent(m, threads, [&](std::size_t i) {
    const Vector xi = x.column(i);
    Vector gi(d);
    p.GradientInto(i, xi, gi);
    for (std::size_t k = 0; k < d; ++k) g(k, i) = gi[k];
  });
  return g;
}

AlgorithmState InitState(const Problem& p, const MixingMatrix& w, Algorithm algo,
                         std::size_t K, double eta, InitPolicy init,
                         std::size_t threads) {
  if (!(eta > 0.0) || !std::isfinite(eta))
    throw InvalidArgument("InitState: eta must be positive");
  if (w.num_agents() != p.num_agents())
    throw InvalidArgument("InitState: mixing matrix size does not match agent count");
  const std::size_t d = p.dim();
  const std::size_t m = p.num_agents();
  AlgorithmState s;
  s.algorithm = algo;
  s.K = K;
  s.eta = eta;
  s.threads = threads;
  s.x = Matrix(d, m);
  Rng rng(init.seed);
  switch (init.kind) {
    case InitPolicy::Kind::kZeros:
      break;
    case InitPolicy::Kind::kSharedRandom: {
      Vector x0(d);
      for (double& v : x0) v = rng.Normal();
      for (std::size_t i = 0; i < m; ++i) s.x.set_column(i, x0);
      break;
    }
    case InitPolicy::Kind::kPerAgentRandom:
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < d; ++k) s.x(k, i) = rng.Normal();
      break;
  }
  if (algo == Algorithm::kDgt) {
    s.grad = StackedGradient(p, s.x, threads);
    s.y = *s.grad;
  }
  return s;
}

void StepRoundDgd(AlgorithmState& s, const Problem& p, const MixingMatrix& w,
                  RoundIterates* inner) {
  if (s.algorithm != Algorithm::kDgd)
    throw InvalidArgument("StepRoundDgd: state belongs to another algorithm");
  if (inner != nullptr) {
    inner->x.clear();
    inner->y.clear();
  }
  for (std::size_t k = 0; k < s.K; ++k) {
    if (inner != nullptr) inner->x.push_back(s.x);
    const Matrix g = StackedGradient(p, s.x, s.threads);
    AddScaled(s.x, -s.eta, g);
  }
  if (inner != nullptr) inner->x.push_back(s.x);
  Matrix pre_mix = s.x;
  AddScaled(pre_mix, -s.eta, StackedGradient(p, s.x, s.threads));
  s.x = MatMul(pre_mix, w.weights());
  CheckFinite(s.x, s.round, "x");
  ++s.round;
}

void StepRoundDgt(AlgorithmState& s, const Problem& p, const MixingMatrix& w,
                  RoundIterates* inner) {
  if (s.algorithm != Algorithm::kDgt || !s.y)
    throw InvalidArgument("StepRoundDgt: state has no tracking variables");
  if (!s.grad) s.grad = StackedGradient(p, s.x, s.threads);
  if (inner != nullptr) {
    inner->x.clear();
    inner->y.clear();
    inner->x.push_back(s.x);
    inner->y.push_back(*s.y);
  }
  const Matrix& y_start = *s.y;
  const Matrix& g_start = *s.grad;

  // Local phase. x_k and y_k hold X_{r,k}, Y_{r,k}; g_k holds ∇F(X_{r,k}).
  Matrix x_k = s.x;
  Matrix y_k = y_start;
  Matrix g_k = g_start;
  for (std::size_t k = 0; k < s.K; ++k) {
    AddScaled(x_k, -s.eta, y_k);
    g_k = StackedGradient(p, x_k, s.threads);
    y_k = y_start;
    AddScaled(y_k, 1.0, g_k);
    AddScaled(y_k, -1.0, g_start);
    if (inner != nullptr) {
      inner->x.push_back(x_k);
      inner->y.push_back(y_k);
    }
  }

  // Communication.
  Matrix pre_x = x_k;
  AddScaled(pre_x, -s.eta, y_k);
  Matrix x_next = MatMul(pre_x, w.weights());
  CheckFinite(x_next, s.round, "x");
  Matrix g_next = StackedGradient(p, x_next, s.threads);
  Matrix pre_y = y_k;
  AddScaled(pre_y, 1.0, g_next);
  AddScaled(pre_y, -1.0, g_k);
  Matrix y_next = MatMul(pre_y, w.weights());
  CheckFinite(y_next, s.round, "y");

  s.x = std::move(x_next);
  s.y = std::move(y_next);
  s.grad = std::move(g_next);
  ++s.round;
}

void StepRound(AlgorithmState& s, const Problem& p, const MixingMatrix& w,
               RoundIterates* inner) {
  if (s.algorithm == Algorithm::kDgd) {
    StepRoundDgd(s, p, w, inner);
  } else {
    StepRoundDgt(s, p, w, inner);
  }
}

}  // namespace localgt
