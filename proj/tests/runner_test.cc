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

#include "localgt/runner.h"

#include <cmath>

#include <gtest/gtest.h>

#include "localgt/errors.h"
#include "localgt/rng.h"
#include "localgt/theory.h"
#include "test_util.h"

namespace localgt {
namespace {

using ::localgt::testing::RandomLeastSquares;
using ::localgt::testing::RandomLogistic;

// Small strongly convex logistic instance and its Eq.-(52)-style step.
struct Toy {
  Problem problem;
  MixingMatrix mixing;
  double eta;
};

Toy DrlrToy(std::size_t K) {
  Problem p = Problem::RidgeLogistic(GenerateConnectivityScenario({10, 20, 5, 3}), 0.05);
  MixingMatrix w = MetropolisWeights(Ring(10));
  const ProblemConstants c = MeasureConstants(p);
  BoundInputs in;
  in.L = c.L;
  in.mu = c.mu;
  in.delta = c.delta;
  in.rho = w.rho();
  in.K = K;
  const double eta = StepSizeDgt(in);
  return {std::move(p), std::move(w), eta};
}

TEST(RunTest, InfiniteEpsilonStopsImmediately) {
  const Problem p = ScalarQuadratics(Vector{1, 2}, Vector{1, -1});
  const MixingMatrix w = UniformWeights(Complete(2));
  AlgorithmState s = InitState(p, w, Algorithm::kDgt, 1, 0.1);
  const RunTrace t = localgt::Run(s, p, w, {10, INFINITY, Measure::kAvgGradNorm});
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0].round, 0u);
  EXPECT_EQ(t.termination, Termination::kReachedEpsilon);
  EXPECT_EQ(s.round, 0u);
}

TEST(RunTest, RowsAndCountersAndSink) {
  const Problem p = ScalarQuadratics(Vector{1, 2, 3}, Vector{1, -1, 0.5});
  const MixingMatrix w = MetropolisWeights(Ring(3));
  AlgorithmState s = InitState(p, w, Algorithm::kDgd, 4, 0.05);
  std::size_t seen = 0;
  RunOptions opts;
  opts.sink = [&](const RoundMetrics& row) { EXPECT_EQ(row.round, seen++); };
  const RunTrace t = localgt::Run(s, p, w, {25, 0.0, Measure::kAvgGradNorm}, opts);
  ASSERT_EQ(t.rows.size(), 26u);
  EXPECT_EQ(seen, 26u);
  EXPECT_EQ(t.termination, Termination::kMaxRounds);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    EXPECT_EQ(t.rows[r].round, r);
    EXPECT_EQ(t.rows[r].comm_rounds, r);
    EXPECT_EQ(t.rows[r].grad_evals_per_agent, 5 * r);
    EXPECT_TRUE(t.rows[r].G && t.rows[r].D);
    EXPECT_GE(*t.rows[r].D, t.rows[r].S);
  }
}

TEST(RunTest, BasicMetricsSkipExpensiveColumns) {
  const Problem p = ScalarQuadratics(Vector{1, 2}, Vector{1, -1});
  const MixingMatrix w = UniformWeights(Complete(2));
  AlgorithmState s = InitState(p, w, Algorithm::kDgt, 1, 0.1);
  RunOptions opts;
  opts.metrics.full = false;
  const RunTrace t = localgt::Run(s, p, w, {5, 0.0, Measure::kAvgGradNorm}, opts);
  for (const auto& row : t.rows) {
    EXPECT_FALSE(row.G || row.Gamma);
    EXPECT_TRUE(row.D);
  }
}

TEST(RunTest, MissingReferenceIsRejected) {
  const Problem p = ScalarQuadratics(Vector{1, 2}, Vector{1, -1});
  const MixingMatrix w = UniformWeights(Complete(2));
  AlgorithmState s = InitState(p, w, Algorithm::kDgt, 1, 0.1);
  EXPECT_THROW(localgt::Run(s, p, w, {5, 0.0, Measure::kDistMinNorm}), InvalidArgument);
  EXPECT_THROW(localgt::Run(s, p, w, {0, 0.0, Measure::kAvgGradNorm}), InvalidArgument);
}

TEST(RunTest, DivergenceIsRecorded) {
  const Problem p = ScalarQuadratics(Vector{1, 2}, Vector{1, -1});
  const MixingMatrix w = UniformWeights(Complete(2));
  AlgorithmState s = InitState(p, w, Algorithm::kDgd, 0, 1e3);
  const RunTrace t = localgt::Run(s, p, w, {1000, 0.0, Measure::kAvgGradNorm});
  EXPECT_EQ(t.termination, Termination::kDiverged);
  ASSERT_TRUE(t.diverged_round);
  EXPECT_FALSE(t.error.empty());
  EXPECT_LT(t.rows.size(), 1000u);
}

TEST(RunTest, SingleAgentDgtIsGradientDescent) {
  Rng rng(8);
  const Problem p = RandomLogistic(1, 15, 4, 0.1, rng);
  const MixingMatrix w = MetropolisWeights(Graph(1, {}));
  const double eta = 0.01;
  for (std::size_t K : {0u, 3u}) {
    AlgorithmState s = InitState(p, w, Algorithm::kDgt, K, eta, InitPolicy::SharedRandom(1));
    Vector x = s.x.column(0);
    for (int r = 0; r < 50; ++r) {
      StepRound(s, p, w);
      for (std::size_t k = 0; k <= K; ++k) Axpy(-eta, p.Gradient(0, x), x);
      for (std::size_t c = 0; c < x.size(); ++c) EXPECT_NEAR(s.x(c, 0), x[c], 1e-12);
    }
  }
}

TEST(RunTest, UniformMixingDgtIsCentralizedGradientDescent) {
  Rng rng(19);
  const Problem p = RandomLogistic(5, 8, 3, 0.2, rng);
  const MixingMatrix w = UniformWeights(Complete(5));
  const double eta = 0.02;
  AlgorithmState s = InitState(p, w, Algorithm::kDgt, 0, eta, InitPolicy::SharedRandom(2));
  Vector x = s.x.column(0);
  for (int r = 0; r < 100; ++r) {
    StepRound(s, p, w);
    Axpy(-eta, p.AverageGradient(x), x);
    const Vector mean = ColumnMean(s.x);
    for (std::size_t c = 0; c < x.size(); ++c) ASSERT_NEAR(mean[c], x[c], 1e-10);
  }
}

TEST(RunTest, DgtWithTheoryStepDecreasesMonotonically) {
  const Toy toy = DrlrToy(2);
  AlgorithmState s = InitState(toy.problem, toy.mixing, Algorithm::kDgt, 2, toy.eta);
  const RunTrace t = localgt::Run(s, toy.problem, toy.mixing, {300, 0.0, Measure::kAvgGradNorm});
  ASSERT_NE(t.termination, Termination::kDiverged);
  for (std::size_t r = 4; r < t.rows.size(); ++r)
    EXPECT_LE(t.rows[r].avg_grad_norm, t.rows[r - 1].avg_grad_norm) << "round " << r;
  // Consensus error contracts over the second half.
  EXPECT_LE(t.rows.back().S, t.rows[t.rows.size() / 2].S);
}

TEST(RunTest, TrackingErrorVanishesWithConvergence) {
  Rng rng(23);
  const Problem p = RandomLogistic(4, 10, 3, 0.5, rng);
  const MixingMatrix w = MetropolisWeights(Ring(4));
  AlgorithmState s = InitState(p, w, Algorithm::kDgt, 2, 0.01);
  const RunTrace t = localgt::Run(s, p, w, {20000, 1e-7, Measure::kAvgGradNorm});
  ASSERT_EQ(t.termination, Termination::kReachedEpsilon);
  for (const auto& row : t.rows)
    if (row.avg_grad_norm < 1e-6) EXPECT_LT(*row.Gamma, 1e-8) << row.round;
}

TEST(RunTest, DgdIsBiasedWhereDgtIsExact) {
  const Problem p = ScalarQuadratics(Vector{1, 2, 3, 4}, Vector{-3, -1, 2, 5});
  const MixingMatrix w = MetropolisWeights(Ring(4));
  const StoppingRule stop{3000, 0.0, Measure::kAvgGradNorm};
  AlgorithmState dgd = InitState(p, w, Algorithm::kDgd, 0, 0.1);
  AlgorithmState dgt = InitState(p, w, Algorithm::kDgt, 0, 0.1);
  const double dgd_final = localgt::Run(dgd, p, w, stop).rows.back().avg_grad_norm;
  const double dgt_final = localgt::Run(dgt, p, w, stop).rows.back().avg_grad_norm;
  EXPECT_LE(dgt_final, 1e-10);
  EXPECT_GE(dgd_final, 10 * dgt_final);
  EXPECT_GT(dgd_final, 1e-3);
}

TEST(RunTest, ZeroInitDgdApproachesMinNormSolution) {
  const Problem p = GenerateOverparamLeastSquares({4, 2, 20, 0.3, 7});
  const MixingMatrix w = MetropolisWeights(Ring(4));
  RunOptions opts;
  opts.metrics.x_star = ComputeReferenceOptimum(p).x_star;
  opts.metrics.f_star = 0.0;
  const double eta = 0.5 / MeasureConstants(p).L;
  AlgorithmState s = InitState(p, w, Algorithm::kDgd, 2, eta);
  const RunTrace t = localgt::Run(s, p, w, {3000, 1e-9, Measure::kDistMinNorm}, opts);
  EXPECT_EQ(t.termination, Termination::kReachedEpsilon);
  for (std::size_t r = t.rows.size() / 2 + 1; r < t.rows.size(); ++r)
    EXPECT_LE(*t.rows[r].dist_min_norm, *t.rows[r - 1].dist_min_norm * (1 + 1e-12));
}

TEST(TuneTest, DivergentCandidateRanksLast) {
  const Problem p = ScalarQuadratics(Vector{1, 2}, Vector{1, -1});
  const MixingMatrix w = UniformWeights(Complete(2));
  const std::vector<double> grid{0.3, 1e6};
  const TuningResult r =
      TuneStepSize(p, w, Algorithm::kDgt, 1, grid, {500, 1e-8, Measure::kAvgGradNorm});
  EXPECT_EQ(r.eta, 0.3);
  EXPECT_EQ(r.trace.termination, Termination::kReachedEpsilon);
  EXPECT_EQ(r.candidates.size(), 2u);
}

TEST(TuneTest, DuplicateGridPoints) {
  const Problem p = ScalarQuadratics(Vector{1, 2}, Vector{1, -1});
  const MixingMatrix w = UniformWeights(Complete(2));
  const std::vector<double> grid{0.2, 0.2};
  EXPECT_EQ(TuneStepSize(p, w, Algorithm::kDgd, 0, grid, {500, 1e-8, Measure::kAvgGradNorm}).eta,
            0.2);
}

TEST(TuneTest, PrefersFasterAndBreaksTiesUpward) {
  const Problem p = ScalarQuadratics(Vector{1, 1}, Vector{0, 0});
  const MixingMatrix w = UniformWeights(Complete(2));
  // ∇f(x) = x, so eta = 1 reaches zero in one round and eta = 0.5 is slower.
  const std::vector<double> grid{0.5, 1.0};
  const TuningResult r = TuneStepSize(p, w, Algorithm::kDgd, 0, grid,
                                      {100, 1e-12, Measure::kAvgGradNorm}, {},
                                      InitPolicy::SharedRandom(1));
  EXPECT_EQ(r.eta, 1.0);
}

TEST(TuneTest, GridOnOverparamInstanceIsReproducible) {
  const Problem p = GenerateOverparamLeastSquares({5, 2, 60, 0.1, 11});
  const MixingMatrix w = MetropolisWeights(Ring(5));
  const double L = MeasureConstants(p).L;
  const auto grid = LogSpaced(1e-2 / L, 1.0 / L, 8);
  RunOptions opts;
  opts.metrics.x_star = ComputeReferenceOptimum(p).x_star;
  opts.metrics.f_star = 0.0;
  const StoppingRule stop{4000, 1e-6, Measure::kDistMinNorm};
  const TuningResult a = TuneStepSize(p, w, Algorithm::kDgd, 2, grid, stop, opts);
  const TuningResult b = TuneStepSize(p, w, Algorithm::kDgd, 2, grid, stop, opts);
  EXPECT_EQ(a.eta, b.eta);
  EXPECT_EQ(a.trace.rows.size(), b.trace.rows.size());
  EXPECT_EQ(a.trace.termination, Termination::kReachedEpsilon);
}

TEST(TuneTest, AllDivergentIsAnError) {
  const Problem p = ScalarQuadratics(Vector{1, 2}, Vector{1, -1});
  const MixingMatrix w = UniformWeights(Complete(2));
  const std::vector<double> grid{1e5, 1e6};
  EXPECT_THROW(TuneStepSize(p, w, Algorithm::kDgd, 0, grid, {1000, 1e-8, Measure::kAvgGradNorm}),
               TuningError);
  EXPECT_THROW(TuneStepSize(p, w, Algorithm::kDgd, 0, {}, {1000, 1e-8, Measure::kAvgGradNorm}),
               InvalidArgument);
}

TEST(LogSpacedTest, Endpoints) {
  const auto g = LogSpaced(1e-3, 1.0, 4);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_EQ(g.front(), 1e-3);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_NEAR(g[1], 1e-2, 1e-15);
}

}  // namespace
}  // namespace localgt
