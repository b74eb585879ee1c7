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

#ifndef LOCALGT_METRICS_H_
#define LOCALGT_METRICS_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "localgt/algorithms.h"
#include "localgt/linalg.h"
#include "localgt/problems.h"

namespace localgt {

// Diagnostics of communication round r, evaluated at X_r = X_{r,0}:
//   F_r     f(x̄^r) - f⋆ (raw f(x̄^r) when f⋆ is unknown, see F_is_raw)
//   S_r     Σ_i ||x^i_r - x̄^r||²
//   Gamma_r (1/m)||Y_r - ∇f(X_r)||²_F, DGT only; ∇f is the average loss
//   G_r     Σ_i Σ_k ||∇f(x^i_{r,k})||² / (m(K+1)) over the round's iterates
//   D_r     Σ_i Σ_k ||x^i_{r,k} - x̄^r||²
// Gamma and G cost m full-gradient evaluations per point and are only filled
// when full diagnostics are requested; D is always filled.
struct RoundMetrics {
  std::size_t round = 0;
  std::size_t comm_rounds = 0;
  std::size_t grad_evals_per_agent = 0;
  double F = 0.0;
  bool F_is_raw = false;
  double S = 0.0;
  std::optional<double> Gamma;
  std::optional<double> G;
  std::optional<double> D;
  double avg_grad_norm = 0.0;
  std::optional<double> dist_min_norm;
};

enum class Measure { kAvgGradNorm, kSuboptimality, kDistMinNorm };

const char* MeasureName(Measure m);
Measure ParseMeasure(std::string_view name);

// Value of `m` in a row; absent when the row cannot provide it.
std::optional<double> MeasureValue(const RoundMetrics& row, Measure m);

struct MetricsOptions {
  std::optional<double> f_star;
  std::optional<Vector> x_star;
  bool full = true;
};

// Everything except G and D, which need the round's inner iterates.
RoundMetrics RoundStartMetrics(const Problem& p, const AlgorithmState& state,
                               const MetricsOptions& opts);

// Fills D (and G when `with_gradients`) of `row` from X_{r,0..K}. With no
// inner iterates (the final row of a run, or round 0 of a trace that stops
// immediately) only the k = 0 terms are used.
void FillRoundIterateMetrics(const Problem& p, const AlgorithmState& state,
                             const RoundIterates* inner, RoundMetrics& row,
                             bool with_gradients = true);

// Convenience: both of the above.
RoundMetrics ComputeRoundMetrics(const Problem& p, const AlgorithmState& state,
                                 const RoundIterates* inner,
                                 const MetricsOptions& opts);

// Σ_i ||x^i - x̄||² two ways: direct deviations, and ||X(I - J)||²_F.
double ConsensusError(const Matrix& x);
double ConsensusErrorProjected(const Matrix& x);

enum class Termination { kReachedEpsilon, kMaxRounds, kDiverged };

const char* TerminationName(Termination t);

struct RunTrace {
  Algorithm algorithm = Algorithm::kDgt;
  std::size_t K = 0;
  double eta = 0.0;
  double rho = 0.0;
  std::vector<RoundMetrics> rows;
  Termination termination = Termination::kMaxRounds;
  // Set when the run diverged: round index and message.
  std::optional<std::size_t> diverged_round;
  std::string error;
};

// Header: round,comm_rounds,grad_evals_per_agent,F_r,S_r,Gamma_r,G_r,D_r,
// avg_grad_norm,dist_min_norm. 17 significant digits, empty cells for
// absent values.
void WriteTraceCsv(std::ostream& out, const RunTrace& trace);

// Smallest r with measure <= epsilon; the first crossing counts even if the
// measure rises again later.
std::optional<std::size_t> RoundsToEpsilon(const RunTrace& trace, Measure m,
                                           double epsilon);

struct LinearFit {
  double slope = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

// Least squares fit of ln(measure) against r over the last `last_fraction`
// of the rows. The window is cut at its first nonpositive value; fewer than
// five usable points throws InvalidArgument.
LinearFit FitLinearRate(const RunTrace& trace, Measure m, double last_fraction);
// Same, on a bare sequence indexed from `first_round`.
LinearFit FitLinearRate(std::span<const double> values, std::size_t first_round = 0);

struct ReferenceOptimum {
  double f_star = 0.0;
  std::optional<Vector> x_star;
};

// Least squares with fewer rows than unknowns: x⋆ is the minimum norm
// interpolant of the stacked data and f⋆ = 0. With at least as many rows,
// x⋆ solves the normal equations of f and f⋆ = f(x⋆). Ridge logistic: f⋆ from a damped Newton solve on f, iterated until
// ||∇f|| <= 1e-12 or the gradient stops shrinking at roundoff level.
ReferenceOptimum ComputeReferenceOptimum(const Problem& p);

}  // namespace localgt

#endif  // LOCALGT_METRICS_H_
