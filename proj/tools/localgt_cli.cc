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

// localgt command line: run sweeps, print bound tables, validate configs.

#include <cstdint>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "localgt/config.h"
#include "localgt/errors.h"
#include "localgt/experiment.h"
#include "localgt/theory.h"

namespace {

int ReportConfigError(const localgt::ConfigError& e) {
  std::cerr << "error: invalid config\n";
  for (const auto& msg : e.errors()) std::cerr << "  " << msg << '\n';
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local DGD / local DGT experiment harness"};
  app.set_version_flag("--version", localgt::kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  app.add_option("--out", out_dir, "Output directory (overrides the config)");
  app.add_option("--seed", seed, "Master seed (overrides the config)");
  app.add_option("--threads", threads, "Worker threads for per-agent work; 0 = sequential");

  std::string run_file;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", run_file, "INI config file")->required();
  bool quiet = false;
  run->add_flag("-q,--quiet", quiet, "Suppress progress output");

  std::string validate_file;
  auto* validate = app.add_subcommand("validate", "Check a config file without running it");
  validate->add_option("config", validate_file, "INI config file")->required();

  localgt::BoundInputs in;
  auto* bounds = app.add_subcommand("bounds", "Print step size and round-complexity bounds");
  bounds->add_option("--L", in.L, "Smoothness constant")->required();
  bounds->add_option("--mu", in.mu, "Strong convexity / PL constant")->required();
  bounds->add_option("--delta", in.delta, "Second-order heterogeneity")->default_val(0.0);
  bounds->add_option("--beta", in.beta, "Weak convexity")->default_val(0.0);
  bounds->add_option("--rho", in.rho, "Network connectivity ||W - J||")->required();
  bounds->add_option("--K", in.K, "Local updates per round")->required();
  bounds->add_option("--eps", in.epsilon, "Target accuracy")->default_val(1e-6);

  CLI11_PARSE(app, argc, argv);

  auto load = [&](const std::string& file) {
    localgt::ExperimentConfig cfg = localgt::LoadConfig(file);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    return cfg;
  };

  try {
    if (*bounds) {
      localgt::WriteBoundsTable(std::cout, in);
      return 0;
    }
    if (*validate) {
      const auto cfg = load(validate_file);
      const auto errors = localgt::ValidateConfig(cfg);
      if (!errors.empty()) throw localgt::ConfigError(errors);
      std::cout << "ok: " << validate_file << " (hash " << localgt::ConfigHash(cfg) << ")\n";
      return 0;
    }
    const auto cfg = load(run_file);
    const auto summary = localgt::RunExperiment(cfg, quiet ? nullptr : &std::cerr);
    std::cout << "wrote " << summary.dir.string() << ": " << summary.cells.size() << " cells, "
              << summary.failures.size() << " failed, " << summary.panels.size() << " panels\n";
    return summary.failures.empty() ? 0 : 3;
  } catch (const localgt::ConfigError& e) {
    return ReportConfigError(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
