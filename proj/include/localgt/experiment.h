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

#ifndef LOCALGT_EXPERIMENT_H_
#define LOCALGT_EXPERIMENT_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "localgt/config.h"
#include "localgt/metrics.h"
#include "localgt/theory.h"

namespace localgt {

inline constexpr const char* kVersion = "0.1.0";

// One problem/topology combination of a sweep.
struct PointInfo {
  std::size_t index = 0;
  double spread = 0.0;
  double p = 1.0;
  double rho = 0.0;
  ProblemConstants constants;
};

struct CellResult {
  Algorithm algorithm = Algorithm::kDgt;
  std::size_t K = 0;
  std::size_t point = 0;
  double rho = 0.0;
  double eta = 0.0;
  std::optional<std::size_t> rounds_to_eps;
  double final_measure = 0.0;
  std::optional<LinearFit> fit;
  std::string trace_file;
};

struct CellFailure {
  Algorithm algorithm = Algorithm::kDgt;
  std::size_t K = 0;
  std::size_t point = 0;
  std::string message;
};

struct ExperimentSummary {
  std::filesystem::path dir;
  std::vector<PointInfo> points;
  std::vector<CellResult> cells;
  std::vector<CellFailure> failures;
  std::vector<std::string> panels;
};

// Builds every point once, then for each (algorithm, K, point) cell picks a
// step size, runs, and writes the trace. Writes under out_dir/name:
// per-cell trace CSVs, summary.csv, errors.csv, points.csv, one SVG per
// (algorithm, point) panel and meta.json. Failing cells are recorded and do
// not stop the others. Progress lines go to `log` when given.
ExperimentSummary RunExperiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);

struct BoundsRow {
  std::string name;
  std::string value;
};

// Every bound evaluator, ζ, K★ and the step size for the given constants. A
// row whose evaluator rejects the inputs carries the error text instead.
std::vector<BoundsRow> BoundsTable(const BoundInputs& in);
void WriteBoundsTable(std::ostream& out, const BoundInputs& in);

}  // namespace localgt

#endif  // LOCALGT_EXPERIMENT_H_
