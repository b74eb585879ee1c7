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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "localgt/errors.h"

namespace localgt {

RunTrace Run(AlgorithmState& state, const Problem& p, const MixingMatrix& w,
             const StoppingRule& stop, const RunOptions& opts) {
  if (stop.max_rounds < 1) throw InvalidArgument("Run: max_rounds must be >= 1");
  if (!(stop.epsilon >= 0.0)) throw InvalidArgument("Run: epsilon must be >= 0");
  if (stop.measure == Measure::kDistMinNorm && !opts.metrics.x_star)
    throw InvalidArgument("Run: dist_min_norm needs a reference solution");
  if (stop.measure == Measure::kSuboptimality && !opts.metrics.f_star)
    throw InvalidArgument("Run: suboptimality needs a reference optimum");

  RunTrace trace;
  trace.algorithm = state.algorithm;
  trace.K = state.K;
  trace.eta = state.eta;
  trace.rho = w.rho();

  const bool full = opts.metrics.full;
  auto emit = [&](RoundMetrics row) {
    if (opts.sink) opts.sink(row);
    trace.rows.push_back(std::move(row));
  };

  RoundIterates inner;
  while (true) {
    RoundMetrics row = RoundStartMetrics(p, state, opts.metrics);
    const double measure = MeasureValue(row, stop.measure).value();
    if (!std::isfinite(measure) || !std::isfinite(row.F)) {
      FillRoundIterateMetrics(p, state, nullptr, row, full);
      emit(std::move(row));
      trace.termination = Termination::kDiverged;
      trace.diverged_round = state.round;
      trace.error = "diverged: non-finite measure at round " + std::to_string(state.round);
      break;
    }
    if (measure <= stop.epsilon || state.round >= stop.max_rounds) {
      FillRoundIterateMetrics(p, state, nullptr, row, full);
      emit(std::move(row));
      trace.termination = measure <= stop.epsilon ? Termination::kReachedEpsilon
                                                  : Termination::kMaxRounds;
      break;
    }
    try {
      StepRound(state, p, w, &inner);
      // inner.x[0] is X_r, which is all the fill needs from the old state.
      FillRoundIterateMetrics(p, state, &inner, row, full);
    } catch (const DivergenceError& e) {
      emit(std::move(row));
      trace.termination = Termination::kDiverged;
      trace.diverged_round = e.round();
      trace.error = e.what();
      break;
    }
    emit(std::move(row));
  }
  return trace;
}

std::vector<double> LogSpaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0 && hi >= lo)) throw InvalidArgument("LogSpaced: need 0 < lo <= hi");
  if (count == 0) return {};
  if (count == 1) return {hi};
  std::vector<double> out(count);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

TuningResult TuneStepSize(const Problem& p, const MixingMatrix& w, Algorithm algo,
                          std::size_t K, std::span<const double> grid,
                          const StoppingRule& stop, const RunOptions& opts,
                          InitPolicy init, std::size_t threads) {
  if (grid.empty()) throw InvalidArgument("TuneStepSize: empty grid");
  for (double eta : grid)
    if (!(eta > 0.0)) throw InvalidArgument("TuneStepSize: step sizes must be positive");

  // Largest first, so an equal round count never displaces a larger eta.
  std::vector<double> order(grid.begin(), grid.end());
  std::stable_sort(order.begin(), order.end(), std::greater<>());

  RunOptions quick;
  quick.metrics = opts.metrics;
  quick.metrics.full = false;

  TuningResult result;
  std::optional<std::size_t> best_rounds;
  std::optional<std::size_t> best_index;
  for (double eta : order) {
    StoppingRule capped = stop;
    if (best_rounds) {
      // A tie loses to the incumbent's larger step, so it must do strictly better.
      if (*best_rounds == 0) {
        result.candidates.push_back({eta, std::nullopt, 0.0, false});
        continue;
      }
      capped.max_rounds = *best_rounds - 1;
    }
    AlgorithmState state = InitState(p, w, algo, K, eta, init, threads);
    std::optional<std::size_t> rounds;
    TuningCandidate cand{eta, std::nullopt, 0.0, false};
    if (capped.max_rounds == 0) {
      RoundMetrics row = RoundStartMetrics(p, state, quick.metrics);
      cand.final_measure = MeasureValue(row, stop.measure).value();
      if (cand.final_measure <= stop.epsilon) cand.rounds = 0;
    } else {
      const RunTrace t = Run(state, p, w, capped, quick);
      cand.diverged = t.termination == Termination::kDiverged;
      cand.rounds = t.termination == Termination::kReachedEpsilon
                        ? std::optional<std::size_t>(t.rows.back().round)
                        : std::nullopt;
      cand.final_measure = MeasureValue(t.rows.back(), stop.measure).value();
    }
    if (cand.rounds && (!best_rounds || *cand.rounds < *best_rounds)) {
      best_rounds = cand.rounds;
      best_index = result.candidates.size();
    }
    result.candidates.push_back(cand);
  }

  if (!best_index) {
    // Nobody reached epsilon: rank surviving runs by their final measure.
    double best_final = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < result.candidates.size(); ++i) {
      const auto& c = result.candidates[i];
      if (c.diverged || !std::isfinite(c.final_measure)) continue;
      if (!best_index || c.final_measure < best_final) {
        best_final = c.final_measure;
        best_index = i;
      }
    }
  }
  if (!best_index) throw TuningError("TuneStepSize: every step size on the grid diverged");

  result.eta = result.candidates[*best_index].eta;
  AlgorithmState state = InitState(p, w, algo, K, result.eta, init, threads);
  result.trace = Run(state, p, w, stop, opts);
  return result;
}

}  // namespace localgt
