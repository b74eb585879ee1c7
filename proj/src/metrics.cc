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

#include "localgt/metrics.h"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "localgt/errors.h"

namespace localgt {
namespace {

void WriteCell(std::ostream& out, std::optional<double> v) {
  if (!v) return;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  out << buf;
}

double SumSquaredDeviation(const Matrix& x, std::span<const double> center) {
  double total = 0.0;
  for (std::size_t i = 0; i < x.cols(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.rows(); ++k) {
      const double diff = x(k, i) - center[k];
      s += diff * diff;
    }
    total += s;
  }
  return total;
}

// Σ_i ||∇f(x^i)||² where ∇f is the average-loss gradient.
double SumSquaredAverageGradient(const Problem& p, const Matrix& x) {
  double total = 0.0;
  for (std::size_t i = 0; i < x.cols(); ++i)
    total += SquaredNorm(p.AverageGradient(x.column(i)));
  return total;
}

}  // namespace

const char* MeasureName(Measure m) {
  switch (m) {
    case Measure::kAvgGradNorm: return "avg_grad_norm";
    case Measure::kSuboptimality: return "suboptimality";
    case Measure::kDistMinNorm: return "dist_min_norm";
  }
  return "?";
}

Measure ParseMeasure(std::string_view name) {
  if (name == "avg_grad_norm") return Measure::kAvgGradNorm;
  if (name == "suboptimality") return Measure::kSuboptimality;
  if (name == "dist_min_norm") return Measure::kDistMinNorm;
  throw InvalidArgument("unknown measure '" + std::string(name) + "'");
}

std::optional<double> MeasureValue(const RoundMetrics& row, Measure m) {
  switch (m) {
    case Measure::kAvgGradNorm: return row.avg_grad_norm;
    case Measure::kSuboptimality:
      if (row.F_is_raw) return std::nullopt;
      return row.F;
    case Measure::kDistMinNorm: return row.dist_min_norm;
  }
  return std::nullopt;
}

double ConsensusError(const Matrix& x) {
  return SumSquaredDeviation(x, ColumnMean(x));
}

double ConsensusErrorProjected(const Matrix& x) {
  const std::size_t m = x.cols();
  Matrix centering = Matrix::Identity(m);
  for (double& v : centering.data()) v -= 1.0 / static_cast<double>(m);
  return SquaredNorm(MatMul(x, centering).data());
}

RoundMetrics RoundStartMetrics(const Problem& p, const AlgorithmState& state,
                               const MetricsOptions& opts) {
  const std::size_t m = state.num_agents();
  RoundMetrics row;
  row.round = state.round;
  row.comm_rounds = state.round;
  row.grad_evals_per_agent = state.round * (state.K + 1);

  const Vector mean = ColumnMean(state.x);
  const double f_mean = p.AverageValue(mean);
  if (opts.f_star) {
    row.F = f_mean - *opts.f_star;
  } else {
    row.F = f_mean;
    row.F_is_raw = true;
  }
  row.S = SumSquaredDeviation(state.x, mean);
  row.avg_grad_norm = Norm(p.AverageGradient(mean));
  if (opts.x_star) row.dist_min_norm = Norm(Sub(mean, *opts.x_star));

  if (opts.full && state.y) {
    double gamma = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const Vector g = p.AverageGradient(state.x.column(i));
      double s = 0.0;
      for (std::size_t k = 0; k < g.size(); ++k) {
        const double diff = (*state.y)(k, i) - g[k];
        s += diff * diff;
      }
      gamma += s;
    }
    row.Gamma = gamma / static_cast<double>(m);
  }
  return row;
}

void FillRoundIterateMetrics(const Problem& p, const AlgorithmState& state,
                             const RoundIterates* inner, RoundMetrics& row,
                             bool with_gradients) {
  const double m = static_cast<double>(state.num_agents());
  const Vector mean = ColumnMean(state.x);
  if (inner == nullptr || inner->x.empty()) {
    if (with_gradients) row.G = SumSquaredAverageGradient(p, state.x) / m;
    row.D = SumSquaredDeviation(state.x, mean);
    return;
  }
  // inner->x[0] is X_r itself, so x̄^r is its column mean.
  const Vector center = ColumnMean(inner->x.front());
  double g = 0.0, d = 0.0;
  for (const Matrix& xk : inner->x) {
    if (with_gradients) g += SumSquaredAverageGradient(p, xk);
    d += SumSquaredDeviation(xk, center);
  }
  if (with_gradients) row.G = g / (m * static_cast<double>(inner->x.size()));
  row.D = d;
}

RoundMetrics ComputeRoundMetrics(const Problem& p, const AlgorithmState& state,
                                 const RoundIterates* inner,
                                 const MetricsOptions& opts) {
  RoundMetrics row = RoundStartMetrics(p, state, opts);
  FillRoundIterateMetrics(p, state, inner, row, opts.full);
  return row;
}

const char* TerminationName(Termination t) {
  switch (t) {
    case Termination::kReachedEpsilon: return "reached_epsilon";
    case Termination::kMaxRounds: return "max_rounds";
    case Termination::kDiverged: return "diverged";
  }
  return "?";
}

void WriteTraceCsv(std::ostream& out, const RunTrace& trace) {
  out << "round,comm_rounds,grad_evals_per_agent,F_r,S_r,Gamma_r,G_r,D_r,"
         "avg_grad_norm,dist_min_norm\n";
  for (const auto& r : trace.rows) {
    out << r.round << ',' << r.comm_rounds << ',' << r.grad_evals_per_agent << ',';
    WriteCell(out, r.F);
    out << ',';
    WriteCell(out, r.S);
    out << ',';
    WriteCell(out, r.Gamma);
    out << ',';
    WriteCell(out, r.G);
    out << ',';
    WriteCell(out, r.D);
    out << ',';
    WriteCell(out, r.avg_grad_norm);
    out << ',';
    WriteCell(out, r.dist_min_norm);
    out << '\n';
  }
}

std::optional<std::size_t> RoundsToEpsilon(const RunTrace& trace, Measure m,
                                           double epsilon) {
  for (const auto& row : trace.rows) {
    const auto v = MeasureValue(row, m);
    if (v && *v <= epsilon) return row.round;
  }
  return std::nullopt;
}

LinearFit FitLinearRate(std::span<const double> values, std::size_t first_round) {
  std::size_t n = 0;
  while (n < values.size() && values[n] > 0.0 && std::isfinite(values[n])) ++n;
  if (n < 5) {
    throw InvalidArgument("FitLinearRate: need at least 5 positive values, have " +
                          std::to_string(n));
  }
  double mean_r = 0.0, mean_l = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_r += static_cast<double>(first_round + i);
    mean_l += std::log(values[i]);
  }
  mean_r /= static_cast<double>(n);
  mean_l /= static_cast<double>(n);
  double srr = 0.0, srl = 0.0, sll = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dr = static_cast<double>(first_round + i) - mean_r;
    const double dl = std::log(values[i]) - mean_l;
    srr += dr * dr;
    srl += dr * dl;
    sll += dl * dl;
  }
  LinearFit fit;
  fit.points = n;
  fit.slope = srl / srr;
  // A flat sequence is fit exactly by a zero slope.
  fit.r_squared = sll == 0.0 ? 1.0 : (srl * srl) / (srr * sll);
  return fit;
}

LinearFit FitLinearRate(const RunTrace& trace, Measure m, double last_fraction) {
  if (!(last_fraction > 0.0 && last_fraction <= 1.0))
    throw InvalidArgument("FitLinearRate: last_fraction must lie in (0, 1]");
  const std::size_t total = trace.rows.size();
  const auto skip = static_cast<std::size_t>(
      std::floor(static_cast<double>(total) * (1.0 - last_fraction)));
  std::vector<double> values;
  for (std::size_t i = skip; i < total; ++i) {
    const auto v = MeasureValue(trace.rows[i], m);
    if (!v) throw InvalidArgument("FitLinearRate: measure absent from trace");
    values.push_back(*v);
  }
  return FitLinearRate(values, skip < total ? trace.rows[skip].round : 0);
}

ReferenceOptimum ComputeReferenceOptimum(const Problem& p) {
  ReferenceOptimum opt;
  if (p.kind() == LossKind::kLeastSquares) {
    if (p.data().total_samples() < p.dim()) {
      opt.x_star = MinNormSolution(StackedFeatures(p.data()), StackedTargets(p.data()));
      opt.f_star = 0.0;
    } else {
      // No interpolant in general: the unique minimizer of the average loss.
      const Vector zero(p.dim(), 0.0);
      Vector x = CholeskySolve(p.AverageHessian(zero), p.AverageGradient(zero));
      for (double& v : x) v = -v;
      opt.f_star = p.AverageValue(x);
      opt.x_star = std::move(x);
    }
    return opt;
  }

  Vector x(p.dim(), 0.0);
  double f = p.AverageValue(x);
  Vector g = p.AverageGradient(x);
  const double floor = 1e-9 * (1.0 + Norm(g));
  for (int it = 0; it < 500; ++it) {
    const double gnorm = Norm(g);
    if (gnorm <= 1e-12) break;
    const Vector step = CholeskySolve(p.AverageHessian(x), g);
    const double slope = Dot(g, step);
    double t = 1.0;
    Vector trial(x.size());
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t k = 0; k < x.size(); ++k) trial[k] = x[k] - t * step[k];
      const double ft = p.AverageValue(trial);
      if (ft <= f - 1e-4 * t * slope) {
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) {
      // Full step still reduces the gradient near roundoff; accept it once.
      for (std::size_t k = 0; k < x.size(); ++k) trial[k] = x[k] - step[k];
      const Vector gt = p.AverageGradient(trial);
      if (Norm(gt) < gnorm) {
        x = trial;
        f = p.AverageValue(x);
        g = gt;
        continue;
      }
      break;
    }
    x = trial;
    f = p.AverageValue(x);
    g = p.AverageGradient(x);
  }
  if (!(Norm(g) <= std::max(1e-12, floor))) {
    throw std::runtime_error("ComputeReferenceOptimum: centralized solve did not converge (|grad f| = " +
                             std::to_string(Norm(g)) + ")");
  }
  opt.f_star = f;
  return opt;
}

}  // namespace localgt
