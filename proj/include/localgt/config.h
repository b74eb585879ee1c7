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

#ifndef LOCALGT_CONFIG_H_
#define LOCALGT_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "localgt/algorithms.h"
#include "localgt/metrics.h"
#include "localgt/problems.h"

namespace localgt {

enum class ProblemKind { kConnectivity, kHeterogeneity, kOverparam, kQuadratic, kLibsvm };
enum class TopologyKind { kComplete, kRing, kErdosRenyi };
enum class WeightScheme { kMetropolis, kUniform };
enum class StepPolicy { kFixed, kTheory, kGrid };

const char* ProblemKindName(ProblemKind k);
const char* TopologyKindName(TopologyKind k);
const char* WeightSchemeName(WeightScheme w);
const char* StepPolicyName(StepPolicy s);

struct ProblemSpec {
  ProblemKind kind = ProblemKind::kConnectivity;
  std::size_t agents = 20;
  std::size_t samples = 1000;  // per agent
  std::size_t dim = 5;
  double reg = 1e-4;
  // Heterogeneity knob; each value is its own problem point. Spread for the
  // logistic heterogeneity scenario, mean scale for least squares.
  std::vector<double> spread{0.0};
  std::vector<double> curvatures;  // quadratic
  std::vector<double> centers;     // quadratic
  std::filesystem::path path;      // libsvm, resolved against the config file
  PartitionScheme partition = PartitionScheme::kUniform;
  std::vector<ClassCounts> class_counts;
};

struct TopologySpec {
  TopologyKind kind = TopologyKind::kErdosRenyi;
  // Edge probabilities; each value is its own topology point.
  std::vector<double> p{1.0};
  WeightScheme weights = WeightScheme::kMetropolis;
  std::size_t max_resamples = 100;
};

struct StepSizeSpec {
  StepPolicy policy = StepPolicy::kGrid;
  double eta = 0.0;
  // Grid bounds in units of 1/L.
  double lo = 1e-2;
  double hi = 1.0;
  std::size_t count = 8;
};

struct StopSpec {
  double epsilon = 1e-8;
  Measure measure = Measure::kAvgGradNorm;
  std::size_t max_rounds = 1000;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "results";
  std::size_t threads = 0;
  // Gamma_r and G_r in traces; they cost m full gradients per iterate.
  bool full_diagnostics = false;
  ProblemSpec problem;
  TopologySpec topology;
  std::vector<Algorithm> algorithms;
  std::vector<std::size_t> K;
  StepSizeSpec step;
  StopSpec stop;
};

// Every problem found while reading or validating a config, one message per
// entry, each prefixed by its field path (e.g. "algorithm.K: ...").
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

// Parses INI text. `base_dir` anchors relative data paths. Throws
// ConfigError listing every problem found.
ExperimentConfig ParseConfig(std::istream& in, const std::filesystem::path& base_dir = {});
ExperimentConfig LoadConfig(const std::filesystem::path& file);

// Domain checks on a parsed config, including that data files exist.
std::vector<std::string> ValidateConfig(const ExperimentConfig& cfg);

// Stable text form of everything that affects results (not out_dir or
// threads), and its 64-bit FNV-1a hash as 16 hex digits.
std::string CanonicalConfig(const ExperimentConfig& cfg);
std::string ConfigHash(const ExperimentConfig& cfg);

}  // namespace localgt

#endif  // LOCALGT_CONFIG_H_
