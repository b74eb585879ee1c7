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

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "localgt/errors.h"
#include "localgt/rng.h"
#include "test_util.h"

namespace localgt {
namespace {

using ::localgt::testing::RandomLeastSquares;
using ::localgt::testing::RandomLogistic;
using ::localgt::testing::RandomVector;

// Per-agent scripted form of one local DGD round: K local steps, then
// x^i ← Σ_j w_ij (x^j - η∇f_j(x^j)).
std::vector<Vector> ReferenceDgdRound(const Problem& p, const Matrix& w,
                                      std::vector<Vector> x, std::size_t K,
                                      double eta) {
  const std::size_t m = x.size();
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t i = 0; i < m; ++i) Axpy(-eta, p.Gradient(i, x[i]), x[i]);
  std::vector<Vector> pre(m);
  for (std::size_t j = 0; j < m; ++j) {
    pre[j] = x[j];
    Axpy(-eta, p.Gradient(j, x[j]), pre[j]);
  }
  std::vector<Vector> out(m, Vector(p.dim(), 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) Axpy(w(i, j), pre[j], out[i]);
  return out;
}

// Per-agent scripted form of one local DGT round using the telescoping
// tracker update y ← y + ∇f_i(x_new) - ∇f_i(x_old).
void ReferenceDgtRound(const Problem& p, const Matrix& w, std::vector<Vector>& x,
                       std::vector<Vector>& y, std::size_t K, double eta) {
  const std::size_t m = x.size();
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t i = 0; i < m; ++i) {
      const Vector g_old = p.Gradient(i, x[i]);
      Axpy(-eta, y[i], x[i]);
      const Vector g_new = p.Gradient(i, x[i]);
      Axpy(1.0, g_new, y[i]);
      Axpy(-1.0, g_old, y[i]);
    }
  }
  std::vector<Vector> pre_x(m), x_next(m, Vector(p.dim(), 0.0));
  for (std::size_t j = 0; j < m; ++j) {
    pre_x[j] = x[j];
    Axpy(-eta, y[j], pre_x[j]);
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) Axpy(w(i, j), pre_x[j], x_next[i]);
  std::vector<Vector> pre_y(m), y_next(m, Vector(p.dim(), 0.0));
  for (std::size_t j = 0; j < m; ++j) {
    pre_y[j] = y[j];
    Axpy(1.0, p.Gradient(j, x_next[j]), pre_y[j]);
    Axpy(-1.0, p.Gradient(j, x[j]), pre_y[j]);
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) Axpy(w(i, j), pre_y[j], y_next[i]);
  x = std::move(x_next);
  y = std::move(y_next);
}

std::vector<Vector> Columns(const Matrix& x) {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < x.cols(); ++i) out.push_back(x.column(i));
  return out;
}

Problem SymmetricPair() { return ScalarQuadratics(Vector{1, 1}, Vector{1, -1}); }

MixingMatrix HalfHalf() { return UniformWeights(Complete(2)); }

TEST(InitTest, Policies) {
  const Problem p = SymmetricPair();
  const AlgorithmState s = InitState(p, HalfHalf(), Algorithm::kDgt, 0, 0.5);
  EXPECT_EQ(s.x, Matrix(1, 2));
  ASSERT_TRUE(s.y);
  EXPECT_EQ(*s.y, (Matrix{{-1, 1}}));
  EXPECT_EQ(s.round, 0u);

  Rng rng(1);
  const Problem q = RandomLeastSquares(4, 3, 5, rng);
  const AlgorithmState shared = InitState(q, MetropolisWeights(Ring(4)), Algorithm::kDgd, 2,
                                          0.1, InitPolicy::SharedRandom(3));
  for (std::size_t i = 1; i < 4; ++i) EXPECT_EQ(shared.x.column(i), shared.x.column(0));
  EXPECT_FALSE(shared.y);
  const AlgorithmState spread = InitState(q, MetropolisWeights(Ring(4)), Algorithm::kDgd, 2,
                                          0.1, InitPolicy::PerAgentRandom(3));
  EXPECT_NE(spread.x.column(1), spread.x.column(0));
  EXPECT_THROW(InitState(q, MetropolisWeights(Ring(4)), Algorithm::kDgd, 0, 0.0),
               InvalidArgument);
  EXPECT_THROW(InitState(q, HalfHalf(), Algorithm::kDgd, 0, 0.1), InvalidArgument);
}

TEST(DgdTest, SymmetricPairExamples) {
  const Problem p = SymmetricPair();
  AlgorithmState s = InitState(p, HalfHalf(), Algorithm::kDgd, 0, 0.5);
  StepRoundDgd(s, p, HalfHalf());
  EXPECT_EQ(s.x, (Matrix{{0, 0}}));
  EXPECT_EQ(s.round, 1u);

  s.x = Matrix{{2, 2}};
  StepRoundDgd(s, p, HalfHalf());
  EXPECT_DOUBLE_EQ(s.x(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(s.x(0, 1), 1.0);
  EXPECT_EQ(ReferenceDgdRound(p, HalfHalf().weights(), {{2}, {2}}, 0, 0.5)[0][0], 1.0);
}

TEST(DgdTest, SingleAgentIsGradientDescent) {
  const Problem p = ScalarQuadratics(Vector{3}, Vector{2});
  const MixingMatrix w = MetropolisWeights(Graph(1, {}));
  AlgorithmState s = InitState(p, w, Algorithm::kDgd, 0, 0.1);
  s.x = Matrix{{5}};
  StepRoundDgd(s, p, w);
  EXPECT_DOUBLE_EQ(s.x(0, 0), 5 - 0.1 * 3 * (5 - 2));
}

TEST(DgdTest, MatchesScriptedReferenceOnRandomQuadratics) {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const Problem p = RandomLeastSquares(3, 4, 3, rng);
    const MixingMatrix w = MetropolisWeights(Complete(3));
    for (std::size_t K : {0u, 3u}) {
      AlgorithmState s = InitState(p, w, Algorithm::kDgd, K, 0.05, InitPolicy::PerAgentRandom(trial));
      const auto want = ReferenceDgdRound(p, w.weights(), Columns(s.x), K, 0.05);
      StepRoundDgd(s, p, w);
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(s.x(k, i), want[i][k], 1e-12);
    }
  }
}

TEST(DgdTest, RecordsInnerIterates) {
  Rng rng(2);
  const Problem p = RandomLeastSquares(3, 2, 2, rng);
  const MixingMatrix w = MetropolisWeights(Ring(3));
  AlgorithmState s = InitState(p, w, Algorithm::kDgd, 4, 0.01, InitPolicy::PerAgentRandom(1));
  const Matrix start = s.x;
  RoundIterates inner;
  StepRoundDgd(s, p, w, &inner);
  ASSERT_EQ(inner.x.size(), 5u);
  EXPECT_EQ(inner.x.front(), start);
  EXPECT_TRUE(inner.y.empty());
}

TEST(DgtTest, SymmetricPairExample) {
  const Problem p = SymmetricPair();
  AlgorithmState s = InitState(p, HalfHalf(), Algorithm::kDgt, 0, 0.5);
  s.x = Matrix{{2, 2}};
  s.y = Matrix{{1, 3}};
  s.grad.reset();
  StepRoundDgt(s, p, HalfHalf());
  EXPECT_DOUBLE_EQ(s.x(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(s.x(0, 1), 1.0);
  EXPECT_DOUBLE_EQ((*s.y)(0, 0), 1.0);
  EXPECT_DOUBLE_EQ((*s.y)(0, 1), 1.0);
  // Tracking: mean(Y') = mean(∇f_i(1)) = (0 + 2)/2.
  const double mean_grad = (p.Gradient(0, Vector{1})[0] + p.Gradient(1, Vector{1})[0]) / 2;
  EXPECT_DOUBLE_EQ(mean_grad, 1.0);
}

TEST(DgtTest, ConsensusOptimumIsFixedPoint) {
  const Problem p = SymmetricPair();
  for (std::size_t K : {0u, 2u, 5u}) {
    AlgorithmState s = InitState(p, HalfHalf(), Algorithm::kDgt, K, 0.3);
    EXPECT_EQ(*s.y, (Matrix{{-1, 1}}));
    StepRoundDgt(s, p, HalfHalf());
    EXPECT_NEAR(s.x(0, 0), 0.0, 1e-15);
    EXPECT_NEAR(s.x(0, 1), 0.0, 1e-15);
  }
}

TEST(DgtTest, MatchesPerAgentRecursion) {
  Rng rng(41);
  for (int trial = 0; trial < 8; ++trial) {
    const bool logistic = trial % 2 == 0;
    const Problem p = logistic ? RandomLogistic(4, 5, 3, 0.1, rng) : RandomLeastSquares(4, 5, 3, rng);
    const MixingMatrix w = MetropolisWeights(Ring(4));
    const std::size_t K = trial % 3;
    AlgorithmState s = InitState(p, w, Algorithm::kDgt, K, 0.02, InitPolicy::PerAgentRandom(trial));
    std::vector<Vector> x = Columns(s.x), y = Columns(*s.y);
    for (int r = 0; r < 5; ++r) {
      StepRoundDgt(s, p, w);
      ReferenceDgtRound(p, w.weights(), x, y, K, 0.02);
    }
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_NEAR(s.x(k, i), x[i][k], 1e-10);
        EXPECT_NEAR((*s.y)(k, i), y[i][k], 1e-10);
      }
    }
  }
}

TEST(DgtTest, TrackingConservationAtEveryStep) {
  Rng rng(5);
  const Problem p = RandomLogistic(5, 6, 4, 0.05, rng);
  const MixingMatrix w = MetropolisWeights(Ring(5));
  AlgorithmState s = InitState(p, w, Algorithm::kDgt, 3, 0.01, InitPolicy::PerAgentRandom(2));
  RoundIterates inner;
  for (int r = 0; r < 20; ++r) {
    StepRoundDgt(s, p, w, &inner);
    ASSERT_EQ(inner.y.size(), 4u);
    for (std::size_t k = 0; k < inner.x.size(); ++k) {
      const Vector mean_y = ColumnMean(inner.y[k]);
      const Vector mean_g = ColumnMean(StackedGradient(p, inner.x[k]));
      EXPECT_LE(Norm(Sub(mean_y, mean_g)), 1e-10);
    }
    EXPECT_LE(Norm(Sub(ColumnMean(*s.y), ColumnMean(StackedGradient(p, s.x)))), 1e-10);
  }
}

TEST(DgtTest, PermutingAgentsPermutesColumns) {
  Rng rng(13);
  const Problem p = RandomLeastSquares(5, 3, 4, rng);
  const Graph g = ErdosRenyi(5, 0.6, 4);
  const MixingMatrix w = MetropolisWeights(g);
  const std::vector<std::size_t> perm{3, 0, 4, 1, 2};

  Dataset permuted;
  permuted.dim = p.dim();
  for (std::size_t i = 0; i < 5; ++i) permuted.agents.push_back(p.data().agents[perm[i]]);
  const Problem q = Problem::LeastSquares(permuted);
  std::vector<Graph::Edge> edges;
  for (const auto& [a, b] : g.edges()) {
    std::size_t pa = 0, pb = 0;
    for (std::size_t i = 0; i < 5; ++i) {
      if (perm[i] == a) pa = i;
      if (perm[i] == b) pb = i;
    }
    edges.emplace_back(pa, pb);
  }
  Matrix wq(5, 5);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) wq(i, j) = w.weights()(perm[i], perm[j]);
  const MixingMatrix mq(Graph(5, edges), wq);

  AlgorithmState a = InitState(p, w, Algorithm::kDgt, 2, 0.05, InitPolicy::PerAgentRandom(8));
  AlgorithmState b = InitState(q, mq, Algorithm::kDgt, 2, 0.05);
  for (std::size_t i = 0; i < 5; ++i) b.x.set_column(i, a.x.column(perm[i]));
  b.grad = StackedGradient(q, b.x);
  b.y = *b.grad;
  for (int r = 0; r < 10; ++r) {
    StepRoundDgt(a, p, w);
    StepRoundDgt(b, q, mq);
  }
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t k = 0; k < 4; ++k) {
      EXPECT_NEAR(b.x(k, i), a.x(k, perm[i]), 1e-12);
      EXPECT_NEAR((*b.y)(k, i), (*a.y)(k, perm[i]), 1e-12);
    }
  }
}

TEST(ParallelTest, ThreadedRoundsMatchSequentialExactly) {
  Rng rng(77);
  const Problem p = RandomLogistic(6, 10, 5, 0.01, rng);
  const MixingMatrix w = MetropolisWeights(Ring(6));
  for (Algorithm algo : {Algorithm::kDgd, Algorithm::kDgt}) {
    AlgorithmState seq = InitState(p, w, algo, 2, 0.01, InitPolicy::PerAgentRandom(1), 0);
    AlgorithmState par = InitState(p, w, algo, 2, 0.01, InitPolicy::PerAgentRandom(1), 4);
    for (int r = 0; r < 10; ++r) {
      StepRound(seq, p, w);
      StepRound(par, p, w);
    }
    for (std::size_t i = 0; i < seq.x.data().size(); ++i)
      EXPECT_NEAR(par.x.data()[i], seq.x.data()[i], 1e-12);
  }
}

TEST(DivergenceTest, HugeStepThrowsWithRound) {
  const Problem p = ScalarQuadratics(Vector{1, 2}, Vector{1, -1});
  const MixingMatrix w = HalfHalf();
  AlgorithmState s = InitState(p, w, Algorithm::kDgt, 1, 1e6);
  s.x = Matrix{{1, 1}};
  s.grad.reset();
  s.y = StackedGradient(p, s.x);
  try {
    for (int r = 0; r < 1000; ++r) StepRound(s, p, w);
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_GT(e.round(), 0u);
    EXPECT_LT(e.round(), 1000u);
  }
}

TEST(AlgorithmNameTest, ParseRoundTrip) {
  EXPECT_EQ(ParseAlgorithm("dgd"), Algorithm::kDgd);
  EXPECT_EQ(ParseAlgorithm(AlgorithmName(Algorithm::kDgt)), Algorithm::kDgt);
  try {
    ParseAlgorithm("scaffold");
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("unknown algorithm"), std::string::npos);
  }
}

}  // namespace
}  // namespace localgt
