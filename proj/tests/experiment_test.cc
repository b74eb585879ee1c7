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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "localgt/errors.h"
#include "localgt/svg.h"

namespace localgt {
namespace {

namespace fs = std::filesystem;

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t Lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

fs::path FreshDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("localgt_" + name);
  fs::remove_all(dir);
  return dir;
}

ExperimentConfig Smoke(const fs::path& out) {
  ExperimentConfig cfg;
  cfg.name = "smoke";
  cfg.out_dir = out;
  cfg.problem.kind = ProblemKind::kQuadratic;
  cfg.problem.curvatures = {1, 2};
  cfg.problem.centers = {1, -1};
  cfg.problem.agents = 2;
  cfg.topology.kind = TopologyKind::kComplete;
  cfg.algorithms = {Algorithm::kDgt, Algorithm::kDgd};
  cfg.K = {0, 2};
  cfg.step.policy = StepPolicy::kFixed;
  cfg.step.eta = 0.2;
  cfg.stop.epsilon = 0.0;
  cfg.stop.max_rounds = 10;
  return cfg;
}

TEST(ExperimentTest, SmokeRunWritesEveryArtifact) {
  const fs::path out = FreshDir("smoke");
  const ExperimentSummary s = RunExperiment(Smoke(out));
  EXPECT_EQ(s.cells.size(), 4u);
  EXPECT_TRUE(s.failures.empty());
  const fs::path dir = out / "smoke";
  for (const char* f : {"dgt_K0.csv", "dgt_K2.csv", "dgd_K0.csv", "dgd_K2.csv", "summary.csv",
                        "errors.csv", "points.csv", "meta.json", "dgt.svg", "dgd.svg"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  EXPECT_EQ(Lines(Slurp(dir / "dgt_K0.csv")), 12u);  // header + rounds 0..10
  const std::string summary = Slurp(dir / "summary.csv");
  EXPECT_EQ(summary.substr(0, summary.find('\n')),
            "algo,K,rho,eta,rounds_to_eps,final_measure,slope,r_squared,trace");
  EXPECT_EQ(Lines(summary), 5u);
  EXPECT_EQ(Lines(Slurp(dir / "errors.csv")), 1u);
  const std::string meta = Slurp(dir / "meta.json");
  EXPECT_NE(meta.find("\"rng\": \"mt19937_64+box-muller\""), std::string::npos);
  EXPECT_NE(meta.find("\"config_hash\""), std::string::npos);
  EXPECT_NE(meta.find("\"version\""), std::string::npos);
}

TEST(ExperimentTest, RerunIsByteIdentical) {
  ExperimentConfig cfg;
  cfg.name = "det";
  cfg.seed = 5;
  cfg.problem.kind = ProblemKind::kOverparam;
  cfg.problem.agents = 4;
  cfg.problem.samples = 2;
  cfg.problem.dim = 20;
  cfg.problem.spread = {0.1, 1.0};
  cfg.topology.kind = TopologyKind::kErdosRenyi;
  cfg.topology.p = {0.6};
  cfg.algorithms = {Algorithm::kDgd, Algorithm::kDgt};
  cfg.K = {1, 3};
  cfg.step.count = 3;
  cfg.stop.measure = Measure::kDistMinNorm;
  cfg.stop.epsilon = 1e-4;
  cfg.stop.max_rounds = 300;
  const fs::path dir_a = FreshDir("det_a");
  cfg.out_dir = dir_a;
  const ExperimentSummary a = RunExperiment(cfg);
  cfg.out_dir = FreshDir("det_b");
  cfg.threads = 3;
  RunExperiment(cfg);
  ASSERT_EQ(a.points.size(), 2u);
  ASSERT_EQ(a.cells.size() + a.failures.size(), 8u);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(dir_a / "det")) {
    const fs::path other = cfg.out_dir / "det" / entry.path().filename();
    EXPECT_EQ(Slurp(entry.path()), Slurp(other)) << entry.path().filename();
    ++files;
  }
  EXPECT_EQ(files, 8u + 4u + 4u);  // traces, panels, summary/errors/points/meta
}

TEST(ExperimentTest, FailedCellsAreRecordedNotFatal) {
  ExperimentConfig cfg = Smoke(FreshDir("fail"));
  cfg.step.eta = 1e3;  // diverges
  cfg.stop.max_rounds = 500;
  const ExperimentSummary s = RunExperiment(cfg);
  EXPECT_TRUE(s.cells.empty());
  EXPECT_EQ(s.failures.size(), 4u);
  const std::string errors = Slurp(cfg.out_dir / "smoke" / "errors.csv");
  EXPECT_EQ(Lines(errors), 5u);
  EXPECT_NE(errors.find("diverged"), std::string::npos);
  EXPECT_EQ(Lines(Slurp(cfg.out_dir / "smoke" / "summary.csv")), 1u);
}

TEST(ExperimentTest, DisconnectedTopologyFailsOnlyItsPoint) {
  ExperimentConfig cfg;
  cfg.name = "er";
  cfg.out_dir = FreshDir("er");
  cfg.problem.kind = ProblemKind::kOverparam;
  cfg.problem.agents = 10;
  cfg.problem.samples = 1;
  cfg.problem.dim = 20;
  cfg.topology.kind = TopologyKind::kErdosRenyi;
  cfg.topology.p = {0.01, 1.0};
  cfg.topology.max_resamples = 3;
  cfg.algorithms = {Algorithm::kDgd};
  cfg.K = {1};
  cfg.step.policy = StepPolicy::kTheory;
  cfg.stop.measure = Measure::kDistMinNorm;
  cfg.stop.max_rounds = 20;
  const ExperimentSummary s = RunExperiment(cfg);
  ASSERT_EQ(s.failures.size(), 1u);
  EXPECT_EQ(s.failures[0].point, 0u);
  EXPECT_NE(s.failures[0].message.find("disconnected"), std::string::npos);
  ASSERT_EQ(s.cells.size(), 1u);
  EXPECT_EQ(s.cells[0].trace_file, "dgd_K1_pt1.csv");
  EXPECT_NEAR(s.cells[0].rho, 0.0, 1e-12);
}

TEST(ExperimentTest, InvalidConfigIsRejectedBeforeRunning) {
  ExperimentConfig cfg = Smoke(FreshDir("invalid"));
  cfg.K.clear();
  EXPECT_THROW(RunExperiment(cfg), ConfigError);
  EXPECT_FALSE(fs::exists(cfg.out_dir));
}

TEST(BoundsTableTest, IncludesOptimalKRow) {
  BoundInputs in;
  in.L = 10;
  in.mu = 1;
  in.delta = 1;
  in.rho = 0;
  in.K = 5;
  in.epsilon = 1e-6;
  std::ostringstream out;
  WriteBoundsTable(out, in);
  const std::string text = out.str();
  EXPECT_NE(text.find("K_star"), std::string::npos);
  bool found = false;
  for (const auto& row : BoundsTable(in))
    if (row.name == "K_star") found = row.value == "5";
  EXPECT_TRUE(found);
  EXPECT_NE(text.find("regime: Theorem 3 inapplicable"), std::string::npos);
}

TEST(BoundsTableTest, NearOneRhoStaysFinite) {
  BoundInputs in;
  in.L = 10;
  in.mu = 1;
  in.delta = 0.5;
  in.rho = 0.999999999;
  in.K = 50;
  for (const auto& row : BoundsTable(in)) {
    if (row.name == "K_star") continue;
    const double v = std::stod(row.value);
    EXPECT_TRUE(std::isfinite(v)) << row.name;
    EXPECT_GT(v, 0.0) << row.name;
  }
}

TEST(BoundsTableTest, DomainErrorsNameTheSymbol) {
  BoundInputs in;
  in.rho = 1.0;
  for (const auto& row : BoundsTable(in))
    if (row.name == "eta") EXPECT_NE(row.value.find("rho"), std::string::npos);
}

TEST(SvgTest, LogAxisDropsNonPositivePoints) {
  std::ostringstream out;
  const std::vector<PlotSeries> series{{"K=1", {0, 1, 2}, {1, 0.1, 0.0}},
                                       {"K=<5>", {0, 1}, {1, 1e-3}}};
  WriteSvgPlot(out, {"title & more", "round", "measure", true}, series);
  const std::string svg = out.str();
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("title &amp; more"), std::string::npos);
  EXPECT_NE(svg.find("K=&lt;5&gt;"), std::string::npos);
  EXPECT_EQ(std::count(svg.begin(), svg.end(), '\n') > 10, true);
  // Two polylines, the first with two usable points.
  const auto first = svg.find("points=\"");
  const auto end = svg.find('"', first + 8);
  const std::string pts = svg.substr(first + 8, end - first - 8);
  EXPECT_EQ(std::count(pts.begin(), pts.end(), ','), 2);
  EXPECT_NE(svg.find("1e-3"), std::string::npos);
}

TEST(SvgTest, EmptyInputStillWellFormed) {
  std::ostringstream out;
  WriteSvgPlot(out, {"empty", "x", "y", true}, {});
  EXPECT_NE(out.str().find("</svg>"), std::string::npos);
  EXPECT_EQ(out.str().find("nan"), std::string::npos);
}

}  // namespace
}  // namespace localgt
