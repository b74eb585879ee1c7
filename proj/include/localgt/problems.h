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

#ifndef LOCALGT_PROBLEMS_H_
#define LOCALGT_PROBLEMS_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "localgt/linalg.h"

namespace localgt {

// One agent's local data: n×d features and n targets (labels in {-1, +1}
// for classification, real responses for least squares).
struct AgentData {
  Matrix features;
  Vector targets;

  std::size_t num_samples() const { return features.rows(); }
};

struct Dataset {
  std::size_t dim = 0;
  std::vector<AgentData> agents;

  std::size_t num_agents() const { return agents.size(); }
  std::size_t total_samples() const;
};

// Throws InvalidArgument unless every agent has at least one sample of the
// common dimension (and, if `classification`, labels in {-1, +1}).
void ValidateDataset(const Dataset& data, bool classification);

// CSV sidecar with header agent,sample,label,f0..f{d-1}.
void WriteDatasetCsv(std::ostream& out, const Dataset& data);

enum class LossKind { kRidgeLogistic, kLeastSquares };

const char* LossKindName(LossKind kind);

// The m local losses f_i and their exact gradients.
//
//   ridge logistic: f_i(x) = Σ_j ln(1 + exp(-y_j a_jᵀx)) + reg·||x||²
//   least squares:  f_i(x) = (1 / 2n_i) ||A_i x - b_i||²
//
// The logistic sample sum is not divided by n_i and the ridge coefficient is
// reg (gradient 2·reg·x), not reg/2.
class Problem {
 public:
  static Problem RidgeLogistic(Dataset data, double reg);
  static Problem LeastSquares(Dataset data);

  LossKind kind() const { return kind_; }
  const Dataset& data() const { return data_; }
  double reg() const { return reg_; }
  std::size_t num_agents() const { return data_.num_agents(); }
  std::size_t dim() const { return data_.dim; }

  double Value(std::size_t agent, std::span<const double> x) const;
  Vector Gradient(std::size_t agent, std::span<const double> x) const;
  // Writes ∇f_i(x) into `out` (size d) without allocating.
  void GradientInto(std::size_t agent, std::span<const double> x,
                    std::span<double> out) const;

  // f(x) = (1/m) Σ_i f_i(x) and its gradient; agents summed in index order.
  double AverageValue(std::span<const double> x) const;
  Vector AverageGradient(std::span<const double> x) const;
  // ∇²f(x), d×d.
  Matrix AverageHessian(std::span<const double> x) const;

  // Planted interpolating model, when the generator knows one.
  const std::optional<Vector>& planted() const { return planted_; }
  void set_planted(Vector x) { planted_ = std::move(x); }

 private:
  Problem(LossKind kind, Dataset data, double reg);
  void CheckArgs(std::size_t agent, std::span<const double> x) const;

  LossKind kind_;
  Dataset data_;
  double reg_;
  std::optional<Vector> planted_;
};

// f_i(x) = (c_i / 2)·(x - center_i)² in one dimension, expressed as a least
// squares instance with A_i = [sqrt(c_i)], b_i = [sqrt(c_i)·center_i].
Problem ScalarQuadratics(std::span<const double> curvatures,
                         std::span<const double> centers);

struct ConnectivityScenario {
  std::size_t num_agents = 20;
  std::size_t samples_per_agent = 1000;
  std::size_t dim = 5;
  std::uint64_t seed = 0;
};

// Local models x_i = x_b + v_i; agent i (1-based) draws features from
// N(0.2·i·1, 0.55·I); labels from s ~ 1 + U(0,1), y = +1 iff
// s <= 1 + exp(-aᵀx_i).
Dataset GenerateConnectivityScenario(const ConnectivityScenario& cfg);

struct HeterogeneityScenario {
  std::size_t num_agents = 20;
  std::size_t samples_per_agent = 100;
  std::size_t dim = 80;
  double spread = 0.99;
  std::uint64_t seed = 0;
};

// Agent 1 features ~ N(0, I); agent i >= 2 copies them and adds
// spread·N(0, I). Labels follow the connectivity-scenario rule.
Dataset GenerateHeterogeneityScenario(const HeterogeneityScenario& cfg);

struct OverparamScenario {
  std::size_t num_agents = 5;
  std::size_t samples_per_agent = 2;
  std::size_t dim = 60;
  // Agent means are heterogeneity·g_i with g_i ~ N(0, I).
  double heterogeneity = 0.0;
  std::uint64_t seed = 0;
};

// Least squares with N = m·n < d rows drawn N(mean_i, I) and b_i = A_i x_p
// for one shared planted x_p ~ N(0, I/d), so every f_i vanishes at x_p.
Problem GenerateOverparamLeastSquares(const OverparamScenario& cfg);

// All agents' rows and targets stacked in agent order.
Matrix StackedFeatures(const Dataset& data);
Vector StackedTargets(const Dataset& data);

struct ProblemConstants {
  double L = 0.0;
  double mu = 0.0;
  double delta = 0.0;
  double beta = 0.0;
  // 1 - (delta/mu)², may be negative when delta > mu.
  double zeta = 1.0;
  // False when delta is a sampled lower bound rather than exact.
  bool delta_exact = true;
};

// Least squares: eigen-analysis of C_i = A_iᵀA_i/n_i and their mean. L and mu
// are the largest and smallest nonzero eigenvalues of the mean, delta is
// max_i ||C_i - C̄||₂.
// Ridge logistic: L is the analytic bound (1/m)Σ_i λ_max(Σ_j a aᵀ)/4 + 2reg,
// mu = 2reg, and delta is the largest difference quotient of ∇f - ∇f_i seen
// over `delta_samples` random pairs (a lower bound).
ProblemConstants MeasureConstants(const Problem& p, std::uint64_t seed = 0,
                                  std::size_t delta_samples = 64);

struct LabeledSample {
  double label = 0.0;
  Vector features;
};

enum class PartitionScheme { kUniform, kByClass };

// Per-agent number of +1 and -1 samples for the by-class scheme.
struct ClassCounts {
  std::size_t positive = 0;
  std::size_t negative = 0;
};

// Uniform: seeded shuffle then an equal split (the first N mod m agents get
// one extra sample). By class: each class is shuffled separately and dealt
// to agents in order according to `counts` (one entry per agent).
Dataset PartitionDataset(std::span<const LabeledSample> samples, std::size_t m,
                         PartitionScheme scheme, std::uint64_t seed,
                         std::span<const ClassCounts> counts = {});

}  // namespace localgt

#endif  // LOCALGT_PROBLEMS_H_
