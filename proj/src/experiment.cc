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

#include "localgt/experiment.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "json.hpp"

#include "localgt/errors.h"
#include "localgt/libsvm.h"
#include "localgt/rng.h"
#include "localgt/runner.h"
#include "localgt/svg.h"
#include "localgt/topology.h"

namespace localgt {
namespace {

namespace fs = std::filesystem;

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string CsvQuote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

Problem BuildProblem(const ProblemSpec& ps, double spread, std::uint64_t seed) {
  switch (ps.kind) {
    case ProblemKind::kConnectivity:
      return Problem::RidgeLogistic(
          GenerateConnectivityScenario({ps.agents, ps.samples, ps.dim, seed}), ps.reg);
    case ProblemKind::kHeterogeneity:
      return Problem::RidgeLogistic(
          GenerateHeterogeneityScenario({ps.agents, ps.samples, ps.dim, spread, seed}), ps.reg);
    case ProblemKind::kOverparam:
      return GenerateOverparamLeastSquares({ps.agents, ps.samples, ps.dim, spread, seed});
    case ProblemKind::kQuadratic:
      return ScalarQuadratics(ps.curvatures, ps.centers);
    case ProblemKind::kLibsvm: {
      std::ifstream in(ps.path);
      if (!in) throw InvalidArgument("cannot open " + ps.path.string());
      const auto sparse = ParseLibsvm(in);
      const auto dense = Densify(sparse, ps.dim);
      return Problem::RidgeLogistic(
          PartitionDataset(dense, ps.agents, ps.partition, seed, ps.class_counts), ps.reg);
    }
  }
  throw InvalidArgument("unhandled problem kind");
}

Graph BuildGraph(const TopologySpec& ts, std::size_t m, double p, std::uint64_t seed) {
  switch (ts.kind) {
    case TopologyKind::kComplete: return m == 1 ? Graph(1, {}) : Complete(m);
    case TopologyKind::kRing: return Ring(m);
    case TopologyKind::kErdosRenyi: return ErdosRenyi(m, p, seed, ts.max_resamples);
  }
  throw InvalidArgument("unhandled topology kind");
}

struct Point {
  PointInfo info;
  const Problem* problem = nullptr;
  std::optional<MixingMatrix> mixing;
  ReferenceOptimum reference;
  std::string error;
};

}  // namespace

ExperimentSummary RunExperiment(const ExperimentConfig& cfg, std::ostream* log) {
  if (const auto errors = ValidateConfig(cfg); !errors.empty()) throw ConfigError(errors);

  ExperimentSummary summary;
  summary.dir = cfg.out_dir / cfg.name;
  fs::create_directories(summary.dir);

  const std::uint64_t topology_seed = cfg.seed + 1;
  const std::uint64_t data_seed = cfg.seed + 2;
  const std::uint64_t constants_seed = cfg.seed + 3;

  const ProblemSpec& ps = cfg.problem;
  const bool uses_spread =
      ps.kind == ProblemKind::kHeterogeneity || ps.kind == ProblemKind::kOverparam;
  const std::vector<double> spreads = uses_spread ? ps.spread : std::vector<double>{0.0};
  const std::vector<double> probs =
      cfg.topology.kind == TopologyKind::kErdosRenyi ? cfg.topology.p : std::vector<double>{1.0};

  // Problems are shared across topology points.
  std::vector<std::unique_ptr<Problem>> problems;
  std::vector<std::string> problem_errors;
  for (double s : spreads) {
    try {
      problems.push_back(std::make_unique<Problem>(BuildProblem(ps, s, data_seed)));
      problem_errors.emplace_back();
    } catch (const std::exception& e) {
      problems.emplace_back();
      problem_errors.push_back(std::string("problem: ") + e.what());
    }
  }

  std::vector<Point> points;
  for (std::size_t si = 0; si < spreads.size(); ++si) {
    for (double p : probs) {
      Point pt;
      pt.info.index = points.size();
      pt.info.spread = spreads[si];
      pt.info.p = p;
      pt.problem = problems[si].get();
      pt.error = problem_errors[si];
      if (pt.problem) {
        try {
          const std::size_t m = pt.problem->num_agents();
          const Graph g = BuildGraph(cfg.topology, m, p, topology_seed);
          pt.mixing = cfg.topology.weights == WeightScheme::kUniform ? UniformWeights(g)
                                                                    : MetropolisWeights(g);
          pt.info.rho = pt.mixing->rho();
          pt.info.constants = MeasureConstants(*pt.problem, constants_seed);
          pt.reference = ComputeReferenceOptimum(*pt.problem);
        } catch (const std::exception& e) {
          pt.error = std::string("setup: ") + e.what();
        }
      }
      if (log) {
        *log << "point " << pt.info.index << ": spread=" << pt.info.spread << " p=" << p
             << " rho=" << pt.info.rho << " L=" << pt.info.constants.L
             << (pt.error.empty() ? "" : " [" + pt.error + "]") << "\n";
      }
      points.push_back(std::move(pt));
    }
  }
  for (const auto& pt : points) summary.points.push_back(pt.info);

  const bool single_point = points.size() == 1;
  auto suffix = [&](std::size_t j) { return single_point ? std::string() : "_pt" + std::to_string(j); };
  const Measure measure = cfg.stop.measure;
  const StoppingRule stop{cfg.stop.max_rounds, cfg.stop.epsilon, measure};

  for (Algorithm algo : cfg.algorithms) {
    for (const Point& pt : points) {
      std::vector<PlotSeries> curves;
      for (std::size_t K : cfg.K) {
        auto fail = [&](const std::string& msg) {
          summary.failures.push_back({algo, K, pt.info.index, msg});
          if (log) *log << AlgorithmName(algo) << " K=" << K << " point " << pt.info.index
                        << ": FAILED " << msg << "\n";
        };
        if (!pt.error.empty()) {
          fail(pt.error);
          continue;
        }
        const Problem& p = *pt.problem;
        const MixingMatrix& w = *pt.mixing;
        RunOptions opts;
        opts.metrics.full = cfg.full_diagnostics;
        opts.metrics.f_star = pt.reference.f_star;
        opts.metrics.x_star = pt.reference.x_star;
        try {
          RunTrace trace;
          const ProblemConstants& c = pt.info.constants;
          if (cfg.step.policy == StepPolicy::kGrid) {
            const auto grid = LogSpaced(cfg.step.lo / c.L, cfg.step.hi / c.L, cfg.step.count);
            trace = TuneStepSize(p, w, algo, K, grid, stop, opts, InitPolicy::Zeros(), cfg.threads)
                        .trace;
          } else {
            double eta = cfg.step.eta;
            if (cfg.step.policy == StepPolicy::kTheory) {
              BoundInputs in;
              in.L = c.L;
              in.mu = c.mu;
              in.delta = c.delta;
              in.beta = c.beta;
              in.rho = w.rho();
              in.K = K;
              eta = StepSizeDgt(in);
            }
            AlgorithmState s = InitState(p, w, algo, K, eta, InitPolicy::Zeros(), cfg.threads);
            trace = Run(s, p, w, stop, opts);
          }

          const std::string file =
              std::string(AlgorithmName(algo)) + "_K" + std::to_string(K) + suffix(pt.info.index) + ".csv";
          {
            std::ofstream out(summary.dir / file);
            WriteTraceCsv(out, trace);
          }
          PlotSeries curve{"K=" + std::to_string(K), {}, {}};
          for (const auto& row : trace.rows) {
            curve.x.push_back(static_cast<double>(row.comm_rounds));
            const auto v = MeasureValue(row, measure);
            curve.y.push_back(v ? *v : NAN);
          }
          curves.push_back(std::move(curve));

          if (trace.termination == Termination::kDiverged) {
            fail("diverged at round " + std::to_string(trace.diverged_round.value_or(0)) + ": " +
                 trace.error);
            continue;
          }
          CellResult cell;
          cell.algorithm = algo;
          cell.K = K;
          cell.point = pt.info.index;
          cell.rho = w.rho();
          cell.eta = trace.eta;
          cell.rounds_to_eps = RoundsToEpsilon(trace, measure, cfg.stop.epsilon);
          const auto last = MeasureValue(trace.rows.back(), measure);
          cell.final_measure = last ? *last : NAN;
          try {
            cell.fit = FitLinearRate(trace, measure, 0.5);
          } catch (const InvalidArgument&) {
          }
          cell.trace_file = file;
          if (log) {
            *log << AlgorithmName(algo) << " K=" << K << " point " << pt.info.index
                 << ": eta=" << cell.eta << " rounds="
                 << (cell.rounds_to_eps ? std::to_string(*cell.rounds_to_eps) : "-")
                 << " final=" << cell.final_measure << "\n";
          }
          summary.cells.push_back(std::move(cell));
        } catch (const std::exception& e) {
          fail(e.what());
        }
      }
      if (curves.empty()) continue;
      const std::string panel = std::string(AlgorithmName(algo)) + suffix(pt.info.index) + ".svg";
      char title[160];
      std::snprintf(title, sizeof title, "%s, rho = %.4g%s", AlgorithmName(algo), pt.info.rho,
                    uses_spread ? (", spread = " + Fmt(pt.info.spread)).c_str() : "");
      std::ofstream out(summary.dir / panel);
      WriteSvgPlot(out, {title, "communication round", MeasureName(measure), true}, curves);
      summary.panels.push_back(panel);
    }
  }

  {
    std::ofstream out(summary.dir / "summary.csv");
    out << "algo,K,rho,eta,rounds_to_eps,final_measure,slope,r_squared,trace\n";
    for (const auto& c : summary.cells) {
      out << AlgorithmName(c.algorithm) << ',' << c.K << ',' << Fmt(c.rho) << ',' << Fmt(c.eta)
          << ',' << (c.rounds_to_eps ? std::to_string(*c.rounds_to_eps) : "") << ','
          << Fmt(c.final_measure) << ',' << (c.fit ? Fmt(c.fit->slope) : "") << ','
          << (c.fit ? Fmt(c.fit->r_squared) : "") << ',' << c.trace_file << '\n';
    }
  }
  {
    std::ofstream out(summary.dir / "errors.csv");
    out << "algo,K,point,message\n";
    for (const auto& f : summary.failures)
      out << AlgorithmName(f.algorithm) << ',' << f.K << ',' << f.point << ',' << CsvQuote(f.message)
          << '\n';
  }
  {
    std::ofstream out(summary.dir / "points.csv");
    out << "point,spread,p,rho,L,mu,delta,delta_exact\n";
    for (const auto& pi : summary.points)
      out << pi.index << ',' << Fmt(pi.spread) << ',' << Fmt(pi.p) << ',' << Fmt(pi.rho) << ','
          << Fmt(pi.constants.L) << ',' << Fmt(pi.constants.mu) << ',' << Fmt(pi.constants.delta)
          << ',' << (pi.constants.delta_exact ? "true" : "false") << '\n';
  }
  {
    nlohmann::ordered_json meta;
    meta["tool"] = "localgt";
    meta["version"] = kVersion;
    meta["rng"] = Rng::kAlgorithm;
    meta["config_hash"] = ConfigHash(cfg);
    meta["name"] = cfg.name;
    meta["seed"] = cfg.seed;
    meta["cells"] = summary.cells.size();
    meta["failures"] = summary.failures.size();
    std::ofstream out(summary.dir / "meta.json");
    out << meta.dump(2) << '\n';
  }
  return summary;
}

std::vector<BoundsRow> BoundsTable(const BoundInputs& in) {
  std::vector<BoundsRow> rows;
  auto add = [&](const std::string& name, auto&& eval) {
    try {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.10g", static_cast<double>(eval()));
      rows.push_back({name, buf});
    } catch (const DomainError& e) {
      std::string msg = e.what();
      if (msg.rfind("regime:", 0) == 0) msg = "regime: Theorem 3 inapplicable (requires delta < mu)";
      rows.push_back({name, msg});
    }
  };
  add("eta", [&] { return StepSizeDgt(in); });
  add("rounds_dgt_strongly_convex", [&] { return RoundsDgtStronglyConvex(in); });
  add("rounds_dgt_pl", [&] { return RoundsDgtPl(in); });
  add("zeta", [&] { return Zeta(in); });
  add("rounds_dgd_pl", [&] {
    Zeta(in);
    return RoundsDgdPl(in);
  });
  add("rounds_dgd_least_squares", [&] { return RoundsDgdLeastSquares(in); });
  add("rounds_dgt_least_squares", [&] { return RoundsDgtLeastSquares(in); });
  add("K_star", [&] { return OptimalLocalUpdates(in); });
  return rows;
}

void WriteBoundsTable(std::ostream& out, const BoundInputs& in) {
  for (const auto& row : BoundsTable(in)) {
    char name[40];
    std::snprintf(name, sizeof name, "%-28s", row.name.c_str());
    out << name << row.value << '\n';
  }
  out << "(order-level: hidden constants set to 1)\n";
}

}  // namespace localgt
