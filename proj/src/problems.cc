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

#include "localgt/problems.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "localgt/errors.h"
#include "localgt/rng.h"

namespace localgt {
namespace {

// ln(1 + e^t) without overflow.
double Softplus(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

// Per-sample dot product, kept in this file so the sample loops inline it.
inline double RowDot(const double* row, const double* x, std::size_t d) {
  double s = 0.0;
  for (std::size_t k = 0; k < d; ++k) s += row[k] * x[k];
  return s;
}

double Sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

void DrawLabels(const Vector& model, AgentData& agent, Rng& rng) {
  for (std::size_t j = 0; j < agent.num_samples(); ++j) {
    const double s = 1.0 + rng.Uniform();
    const double margin = Dot(agent.features.row(j), model);
    agent.targets[j] = s <= 1.0 + std::exp(-margin) ? 1.0 : -1.0;
  }
}

Vector StandardNormal(std::size_t d, Rng& rng) {
  Vector v(d);
  for (double& e : v) e = rng.Normal();
  return v;
}

// Largest |eigenvalue| of a symmetric matrix.
double SymmetricSpectralNorm(const Matrix& m) {
  const Vector eig = SymmetricEigenvalues(m);
  return std::max(std::abs(eig.front()), std::abs(eig.back()));
}

// AᵀA / scale
Matrix Gram(const Matrix& a, double scale) {
  const std::size_t d = a.cols();
  Matrix g(d, d);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = a.row(r);
    for (std::size_t i = 0; i < d; ++i) {
      const double ri = row[i];
      if (ri == 0.0) continue;
      for (std::size_t j = 0; j < d; ++j) g(i, j) += ri * row[j];
    }
  }
  for (double& v : g.data()) v /= scale;
  return g;
}

ProblemConstants LeastSquaresConstants(const Problem& p) {
  const std::size_t m = p.num_agents();
  const std::size_t d = p.dim();
  std::vector<Matrix> cov;
  Matrix mean(d, d);
  for (const auto& agent : p.data().agents) {
    cov.push_back(Gram(agent.features, static_cast<double>(agent.num_samples())));
    Axpy(1.0 / static_cast<double>(m), cov.back().data(), mean.data());
  }
  const Vector eig = SymmetricEigenvalues(mean);
  ProblemConstants c;
  c.L = eig.back();
  if (!(c.L > 0.0)) throw InvalidArgument("MeasureConstants: data are all zero");
  const double cutoff = 1e-10 * c.L;
  c.mu = c.L;
  for (double e : eig) {
    if (e > cutoff) {
      c.mu = e;
      break;
    }
  }
  for (const auto& ci : cov) {
    c.delta = std::max(c.delta, SymmetricSpectralNorm(Subtract(ci, mean)));
  }
  c.beta = 0.0;
  c.zeta = 1.0 - (c.delta / c.mu) * (c.delta / c.mu);
  c.delta_exact = true;
  return c;
}

ProblemConstants LogisticConstants(const Problem& p, std::uint64_t seed,
                                   std::size_t samples) {
  const std::size_t m = p.num_agents();
  const std::size_t d = p.dim();
  ProblemConstants c;
  double curvature = 0.0;
  for (const auto& agent : p.data().agents) {
    const Matrix g = Gram(agent.features, 1.0);
    curvature += 0.25 * SymmetricEigenvalues(g).back();
  }
  c.L = curvature / static_cast<double>(m) + 2.0 * p.reg();
  c.mu = 2.0 * p.reg();
  if (!(c.L > 0.0)) throw InvalidArgument("MeasureConstants: data are all zero");

  Rng rng(seed);
  std::vector<Vector> gx(m), gy(m);
  for (std::size_t s = 0; s < samples; ++s) {
    const Vector x = StandardNormal(d, rng);
    const Vector y = StandardNormal(d, rng);
    const double dist = Norm(Sub(x, y));
    if (dist == 0.0) continue;
    Vector mean_x(d, 0.0), mean_y(d, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      gx[i] = p.Gradient(i, x);
      gy[i] = p.Gradient(i, y);
      Axpy(1.0 / static_cast<double>(m), gx[i], mean_x);
      Axpy(1.0 / static_cast<double>(m), gy[i], mean_y);
    }
    for (std::size_t i = 0; i < m; ++i) {
      Vector diff(d);
      for (std::size_t k = 0; k < d; ++k)
        diff[k] = (mean_x[k] - gx[i][k]) - (mean_y[k] - gy[i][k]);
      c.delta = std::max(c.delta, Norm(diff) / dist);
    }
  }
  c.beta = 0.0;
  c.zeta = c.mu > 0.0 ? 1.0 - (c.delta / c.mu) * (c.delta / c.mu) : 1.0;
  c.delta_exact = false;
  return c;
}

}  // namespace

std::size_t Dataset::total_samples() const {
  std::size_t n = 0;
  for (const auto& a : agents) n += a.num_samples();
  return n;
}

void ValidateDataset(const Dataset& data, bool classification) {
  if (data.agents.empty()) throw InvalidArgument("Dataset: no agents");
  if (data.dim == 0) throw InvalidArgument("Dataset: dimension is zero");
  for (std::size_t i = 0; i < data.num_agents(); ++i) {
    const auto& a = data.agents[i];
    const std::string who = "Dataset: agent " + std::to_string(i);
    if (a.num_samples() == 0) throw InvalidArgument(who + " has no samples");
    if (a.features.cols() != data.dim) throw InvalidArgument(who + " has wrong feature dimension");
    if (a.targets.size() != a.num_samples()) throw InvalidArgument(who + " target count mismatch");
    if (!a.features.all_finite()) throw InvalidArgument(who + " has non-finite features");
    for (double y : a.targets) {
      if (!std::isfinite(y)) throw InvalidArgument(who + " has a non-finite target");
      if (classification && y != 1.0 && y != -1.0)
        throw InvalidArgument(who + " has a label outside {-1, +1}");
    }
  }
}

void WriteDatasetCsv(std::ostream& out, const Dataset& data) {
  out << "agent,sample,label";
  for (std::size_t k = 0; k < data.dim; ++k) out << ",f" << k;
  out << '\n';
  char buf[32];
  for (std::size_t i = 0; i < data.num_agents(); ++i) {
    const auto& a = data.agents[i];
    for (std::size_t j = 0; j < a.num_samples(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", a.targets[j]);
      out << i << ',' << j << ',' << buf;
      for (double v : a.features.row(j)) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << ',' << buf;
      }
      out << '\n';
    }
  }
}

const char* LossKindName(LossKind kind) {
  return kind == LossKind::kRidgeLogistic ? "ridge_logistic" : "least_squares";
}

Problem::Problem(LossKind kind, Dataset data, double reg)
    : kind_(kind), data_(std::move(data)), reg_(reg) {}

Problem Problem::RidgeLogistic(Dataset data, double reg) {
  if (!(reg >= 0.0)) throw InvalidArgument("RidgeLogistic: reg must be >= 0");
  ValidateDataset(data, /*classification=*/true);
  return Problem(LossKind::kRidgeLogistic, std::move(data), reg);
}

Problem Problem::LeastSquares(Dataset data) {
  ValidateDataset(data, /*classification=*/false);
  return Problem(LossKind::kLeastSquares, std::move(data), 0.0);
}

void Problem::CheckArgs(std::size_t agent, std::span<const double> x) const {
  if (agent >= num_agents())
    throw InvalidArgument("Problem: agent " + std::to_string(agent) + " out of range");
  if (x.size() != dim())
    throw InvalidArgument("Problem: x has dimension " + std::to_string(x.size()) +
                          ", expected " + std::to_string(dim()));
}

double Problem::Value(std::size_t agent, std::span<const double> x) const {
  CheckArgs(agent, x);
  const AgentData& a = data_.agents[agent];
  const std::size_t n = a.num_samples();
  const std::size_t d = dim();
  const double* rows = a.features.data().data();
  double total = 0.0;
  if (kind_ == LossKind::kRidgeLogistic) {
    for (std::size_t j = 0; j < n; ++j)
      total += Softplus(-a.targets[j] * RowDot(rows + j * d, x.data(), d));
    total += reg_ * SquaredNorm(x);
  } else {
    for (std::size_t j = 0; j < n; ++j) {
      const double r = RowDot(rows + j * d, x.data(), d) - a.targets[j];
      total += r * r;
    }
    total /= 2.0 * static_cast<double>(n);
  }
  return total;
}

void Problem::GradientInto(std::size_t agent, std::span<const double> x,
                           std::span<double> out) const {
  CheckArgs(agent, x);
  if (out.size() != dim()) throw InvalidArgument("GradientInto: output has wrong size");
  const AgentData& a = data_.agents[agent];
  const std::size_t n = a.num_samples();
  const std::size_t d = dim();
  const double* rows = a.features.data().data();
  double* o = out.data();
  std::fill(out.begin(), out.end(), 0.0);
  if (kind_ == LossKind::kRidgeLogistic) {
    for (std::size_t j = 0; j < n; ++j) {
      const double* row = rows + j * d;
      const double y = a.targets[j];
      const double coef = -y * Sigmoid(-y * RowDot(row, x.data(), d));
      for (std::size_t k = 0; k < d; ++k) o[k] += coef * row[k];
    }
    for (std::size_t k = 0; k < d; ++k) o[k] += 2.0 * reg_ * x[k];
  } else {
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double* row = rows + j * d;
      const double r = (RowDot(row, x.data(), d) - a.targets[j]) * inv_n;
      for (std::size_t k = 0; k < d; ++k) o[k] += r * row[k];
    }
  }
}

Vector Problem::Gradient(std::size_t agent, std::span<const double> x) const {
  Vector g(dim());
  GradientInto(agent, x, g);
  return g;
}

double Problem::AverageValue(std::span<const double> x) const {
  double total = 0.0;
  for (std::size_t i = 0; i < num_agents(); ++i) total += Value(i, x);
  return total / static_cast<double>(num_agents());
}

Vector Problem::AverageGradient(std::span<const double> x) const {
  Vector total(dim(), 0.0);
  Vector g(dim());
  for (std::size_t i = 0; i < num_agents(); ++i) {
    GradientInto(i, x, g);
    Axpy(1.0, g, total);
  }
  for (double& v : total) v /= static_cast<double>(num_agents());
  return total;
}

Matrix Problem::AverageHessian(std::span<const double> x) const {
  if (x.size() != dim()) throw InvalidArgument("AverageHessian: dimension mismatch");
  const std::size_t d = dim();
  Matrix h(d, d);
  for (const auto& a : data_.agents) {
    const std::size_t n = a.num_samples();
    for (std::size_t j = 0; j < n; ++j) {
      const auto row = a.features.row(j);
      double w;
      if (kind_ == LossKind::kRidgeLogistic) {
        const double s = Sigmoid(a.targets[j] * Dot(row, x));
        w = s * (1.0 - s);
      } else {
        w = 1.0 / static_cast<double>(n);
      }
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) h(r, c) += w * row[r] * row[c];
    }
  }
  const double inv_m = 1.0 / static_cast<double>(num_agents());
  for (double& v : h.data()) v *= inv_m;
  if (kind_ == LossKind::kRidgeLogistic)
    for (std::size_t r = 0; r < d; ++r) h(r, r) += 2.0 * reg_;
  return h;
}

Problem ScalarQuadratics(std::span<const double> curvatures,
                         std::span<const double> centers) {
  if (curvatures.size() != centers.size() || curvatures.empty())
    throw InvalidArgument("ScalarQuadratics: need matching nonempty lists");
  Dataset data;
  data.dim = 1;
  for (std::size_t i = 0; i < curvatures.size(); ++i) {
    if (!(curvatures[i] >= 0.0)) throw InvalidArgument("ScalarQuadratics: negative curvature");
    const double s = std::sqrt(curvatures[i]);
    data.agents.push_back({Matrix{{s}}, Vector{s * centers[i]}});
  }
  return Problem::LeastSquares(std::move(data));
}

Dataset GenerateConnectivityScenario(const ConnectivityScenario& cfg) {
  if (cfg.num_agents == 0 || cfg.samples_per_agent == 0 || cfg.dim == 0)
    throw InvalidArgument("ConnectivityScenario: sizes must be positive");
  Rng rng(cfg.seed);
  const std::size_t d = cfg.dim;
  const Vector base = StandardNormal(d, rng);
  std::vector<Vector> models(cfg.num_agents);
  for (auto& model : models) {
    model = StandardNormal(d, rng);
    Axpy(1.0, base, model);
  }
  const double stddev = std::sqrt(0.55);
  Dataset data;
  data.dim = d;
  for (std::size_t i = 0; i < cfg.num_agents; ++i) {
    const double mean = 0.2 * static_cast<double>(i + 1);
    AgentData agent{Matrix(cfg.samples_per_agent, d), Vector(cfg.samples_per_agent)};
    for (double& v : agent.features.data()) v = rng.Normal(mean, stddev);
    DrawLabels(models[i], agent, rng);
    data.agents.push_back(std::move(agent));
  }
  return data;
}

Dataset GenerateHeterogeneityScenario(const HeterogeneityScenario& cfg) {
  if (cfg.num_agents == 0 || cfg.samples_per_agent == 0 || cfg.dim == 0)
    throw InvalidArgument("HeterogeneityScenario: sizes must be positive");
  if (!(cfg.spread >= 0.0)) throw InvalidArgument("HeterogeneityScenario: spread must be >= 0");
  Rng rng(cfg.seed);
  const std::size_t d = cfg.dim;
  const std::size_t n = cfg.samples_per_agent;
  const Vector base = StandardNormal(d, rng);
  std::vector<Vector> models(cfg.num_agents);
  for (auto& model : models) {
    model = StandardNormal(d, rng);
    Axpy(1.0, base, model);
  }
  Matrix first(n, d);
  for (double& v : first.data()) v = rng.Normal();
  Dataset data;
  data.dim = d;
  for (std::size_t i = 0; i < cfg.num_agents; ++i) {
    AgentData agent{first, Vector(n)};
    if (i > 0) {
      for (double& v : agent.features.data()) v += cfg.spread * rng.Normal();
    }
    DrawLabels(models[i], agent, rng);
    data.agents.push_back(std::move(agent));
  }
  return data;
}

Problem GenerateOverparamLeastSquares(const OverparamScenario& cfg) {
  const std::size_t m = cfg.num_agents;
  const std::size_t n = cfg.samples_per_agent;
  const std::size_t d = cfg.dim;
  if (m == 0 || n == 0 || d == 0)
    throw InvalidArgument("OverparamScenario: sizes must be positive");
  if (m * n >= d) {
    throw InvalidArgument("OverparamScenario: need m*n < d, got N = " +
                          std::to_string(m * n) + ", d = " + std::to_string(d));
  }
  Rng rng(cfg.seed);
  Vector planted = StandardNormal(d, rng);
  for (double& v : planted) v /= std::sqrt(static_cast<double>(d));
  Dataset data;
  data.dim = d;
  for (std::size_t i = 0; i < m; ++i) {
    Vector mean = StandardNormal(d, rng);
    for (double& v : mean) v *= cfg.heterogeneity;
    AgentData agent{Matrix(n, d), Vector(n)};
    for (std::size_t j = 0; j < n; ++j) {
      auto row = agent.features.row(j);
      for (std::size_t k = 0; k < d; ++k) row[k] = mean[k] + rng.Normal();
      agent.targets[j] = Dot(row, planted);
    }
    data.agents.push_back(std::move(agent));
  }
  Problem p = Problem::LeastSquares(std::move(data));
  p.set_planted(std::move(planted));
  return p;
}

Matrix StackedFeatures(const Dataset& data) {
  Matrix out(data.total_samples(), data.dim);
  std::size_t r = 0;
  for (const auto& a : data.agents) {
    for (std::size_t j = 0; j < a.num_samples(); ++j, ++r) {
      const auto src = a.features.row(j);
      std::copy(src.begin(), src.end(), out.row(r).begin());
    }
  }
  return out;
}

Vector StackedTargets(const Dataset& data) {
  Vector out;
  out.reserve(data.total_samples());
  for (const auto& a : data.agents) out.insert(out.end(), a.targets.begin(), a.targets.end());
  return out;
}

ProblemConstants MeasureConstants(const Problem& p, std::uint64_t seed,
                                  std::size_t delta_samples) {
  if (p.kind() == LossKind::kLeastSquares) return LeastSquaresConstants(p);
  return LogisticConstants(p, seed, delta_samples);
}

Dataset PartitionDataset(std::span<const LabeledSample> samples, std::size_t m,
                         PartitionScheme scheme, std::uint64_t seed,
                         std::span<const ClassCounts> counts) {
  if (m == 0) throw InvalidArgument("PartitionDataset: m must be positive");
  if (samples.empty()) throw InvalidArgument("PartitionDataset: no samples");
  const std::size_t d = samples.front().features.size();
  Rng rng(seed);
  auto shuffle = [&rng](std::vector<std::size_t>& idx) {
    for (std::size_t i = idx.size(); i > 1; --i)
      std::swap(idx[i - 1], idx[rng.Below(i)]);
  };
  auto build = [&](const std::vector<std::size_t>& idx) {
    AgentData a{Matrix(idx.size(), d), Vector(idx.size())};
    for (std::size_t r = 0; r < idx.size(); ++r) {
      const auto& s = samples[idx[r]];
      if (s.features.size() != d) throw InvalidArgument("PartitionDataset: ragged features");
      std::copy(s.features.begin(), s.features.end(), a.features.row(r).begin());
      a.targets[r] = s.label;
    }
    return a;
  };

  Dataset data;
  data.dim = d;
  if (scheme == PartitionScheme::kUniform) {
    if (samples.size() < m)
      throw InvalidArgument("PartitionDataset: fewer samples than agents");
    std::vector<std::size_t> idx(samples.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    shuffle(idx);
    const std::size_t base = samples.size() / m;
    const std::size_t extra = samples.size() % m;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t take = base + (i < extra ? 1 : 0);
      data.agents.push_back(build({idx.begin() + pos, idx.begin() + pos + take}));
      pos += take;
    }
    return data;
  }

  if (counts.size() != m)
    throw InvalidArgument("PartitionDataset: need one class count per agent");
  std::vector<std::size_t> pos_idx, neg_idx;
  for (std::size_t i = 0; i < samples.size(); ++i)
    (samples[i].label > 0.0 ? pos_idx : neg_idx).push_back(i);
  std::size_t need_pos = 0, need_neg = 0;
  for (const auto& c : counts) {
    need_pos += c.positive;
    need_neg += c.negative;
  }
  if (need_pos > pos_idx.size() || need_neg > neg_idx.size()) {
    throw InvalidArgument("PartitionDataset: insufficient class counts (need " +
                          std::to_string(need_pos) + " positive / " +
                          std::to_string(need_neg) + " negative, have " +
                          std::to_string(pos_idx.size()) + " / " +
                          std::to_string(neg_idx.size()) + ")");
  }
  shuffle(pos_idx);
  shuffle(neg_idx);
  std::size_t pp = 0, pn = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (counts[i].positive + counts[i].negative == 0)
      throw InvalidArgument("PartitionDataset: agent " + std::to_string(i) + " gets no samples");
    std::vector<std::size_t> idx(pos_idx.begin() + pp, pos_idx.begin() + pp + counts[i].positive);
    idx.insert(idx.end(), neg_idx.begin() + pn, neg_idx.begin() + pn + counts[i].negative);
    pp += counts[i].positive;
    pn += counts[i].negative;
    data.agents.push_back(build(idx));
  }
  return data;
}

}  // namespace localgt
