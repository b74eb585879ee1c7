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

#ifndef LOCALGT_RUNNER_H_
#define LOCALGT_RUNNER_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "localgt/algorithms.h"
#include "localgt/metrics.h"
#include "localgt/problems.h"
#include "localgt/topology.h"

namespace localgt {

struct StoppingRule {
  std::size_t max_rounds = 1000;
  double epsilon = 0.0;
  Measure measure = Measure::kAvgGradNorm;
};

struct RunOptions {
  MetricsOptions metrics;
  // Called with each finished row, in round order.
  std::function<void(const RoundMetrics&)> sink;
};

// Drives StepRound until the stopping measure drops to epsilon or
// max_rounds rounds have run. Row r describes X_r; its G and D use the inner
// iterates of round r. Divergence ends the run with termination kDiverged
// instead of throwing.
RunTrace Run(AlgorithmState& state, const Problem& p, const MixingMatrix& w,
             const StoppingRule& stop, const RunOptions& opts = {});

class TuningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TuningCandidate {
  double eta = 0.0;
  std::optional<std::size_t> rounds;
  double final_measure = 0.0;
  bool diverged = false;
};

struct TuningResult {
  double eta = 0.0;
  RunTrace trace;
  std::vector<TuningCandidate> candidates;
};

// Runs every step size on the grid and keeps the one reaching epsilon in the
// fewest rounds; runs that never get there rank after all that do (by final
// measure) and diverged runs rank last. Ties go to the larger step size.
// Candidates run with basic metrics and are cut off once they cannot beat
// the incumbent; the winner is rerun with `opts` for its trace.
TuningResult TuneStepSize(const Problem& p, const MixingMatrix& w, Algorithm algo,
                          std::size_t K, std::span<const double> grid,
                          const StoppingRule& stop, const RunOptions& opts = {},
                          InitPolicy init = InitPolicy::Zeros(),
                          std::size_t threads = 0);

// `count` log-spaced values from lo to hi inclusive, ascending.
std::vector<double> LogSpaced(double lo, double hi, std::size_t count);

}  // namespace localgt

#endif  // LOCALGT_RUNNER_H_
