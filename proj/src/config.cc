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

#include "localgt/config.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "localgt/errors.h"

namespace localgt {
namespace {

namespace pt = boost::property_tree;

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(Trim(std::string_view(s).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.size() == 1 && out[0].empty()) out.clear();
  return out;
}

std::optional<double> ToDouble(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<long long> ToInteger(const std::string& s) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// Reads one section, remembering which keys were consumed so leftovers can
// be reported as unknown.
class Reader {
 public:
  Reader(const pt::ptree& root, std::vector<std::string>& errors)
      : root_(root), errors_(errors) {}

  std::optional<std::string> Raw(const std::string& section, const std::string& key) {
    used_.insert(section + "." + key);
    const auto sec = root_.get_child_optional(section);
    if (!sec) return std::nullopt;
    const auto v = sec->get_optional<std::string>(key);
    if (!v) return std::nullopt;
    return Trim(*v);
  }

  void Error(const std::string& section, const std::string& key, const std::string& msg) {
    errors_.push_back(section + "." + key + ": " + msg);
  }

  template <typename T>
  void Count(const std::string& section, const std::string& key, T& out, bool positive) {
    const auto raw = Raw(section, key);
    if (!raw) return;
    const auto v = ToInteger(*raw);
    if (!v || *v < 0 || (positive && *v == 0)) {
      Error(section, key, std::string("must be a ") + (positive ? "positive" : "nonnegative") +
                              " integer, got '" + *raw + "'");
      return;
    }
    out = static_cast<T>(*v);
  }

  void Real(const std::string& section, const std::string& key, double& out) {
    const auto raw = Raw(section, key);
    if (!raw) return;
    const auto v = ToDouble(*raw);
    if (!v) {
      Error(section, key, "not a finite number: '" + *raw + "'");
      return;
    }
    out = *v;
  }

  void RealList(const std::string& section, const std::string& key, std::vector<double>& out) {
    const auto raw = Raw(section, key);
    if (!raw) return;
    std::vector<double> values;
    for (const auto& item : SplitList(*raw)) {
      const auto v = ToDouble(item);
      if (!v) {
        Error(section, key, "not a finite number: '" + item + "'");
        return;
      }
      values.push_back(*v);
    }
    out = std::move(values);
  }

  void ReportUnknown() {
    for (const auto& [section, body] : root_) {
      if (body.empty() && !body.data().empty()) {
        errors_.push_back(section + ": key outside any section");
        continue;
      }
      for (const auto& [key, value] : body) {
        (void)value;
        if (!used_.count(section + "." + key))
          errors_.push_back(section + "." + key + ": unknown key");
      }
    }
  }

 private:
  const pt::ptree& root_;
  std::vector<std::string>& errors_;
  std::set<std::string> used_;
};

template <typename E>
std::optional<E> Lookup(const std::map<std::string, E>& table, const std::string& name) {
  const auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

const std::map<std::string, ProblemKind>& ProblemKinds() {
  static const std::map<std::string, ProblemKind> t{
      {"logistic_connectivity", ProblemKind::kConnectivity},
      {"logistic_heterogeneity", ProblemKind::kHeterogeneity},
      {"least_squares_overparam", ProblemKind::kOverparam},
      {"quadratic", ProblemKind::kQuadratic},
      {"libsvm", ProblemKind::kLibsvm}};
  return t;
}

const std::map<std::string, TopologyKind>& TopologyKinds() {
  static const std::map<std::string, TopologyKind> t{{"complete", TopologyKind::kComplete},
                                                     {"ring", TopologyKind::kRing},
                                                     {"erdos_renyi", TopologyKind::kErdosRenyi}};
  return t;
}

template <typename E>
const char* NameOf(const std::map<std::string, E>& table, E value) {
  for (const auto& [name, v] : table)
    if (v == value) return name.c_str();
  return "?";
}

std::string Join(const std::vector<double>& v) {
  std::string s;
  char buf[32];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", v[i]);
    if (i) s += ",";
    s += buf;
  }
  return s;
}

}  // namespace

const char* ProblemKindName(ProblemKind k) { return NameOf(ProblemKinds(), k); }
const char* TopologyKindName(TopologyKind k) { return NameOf(TopologyKinds(), k); }

const char* WeightSchemeName(WeightScheme w) {
  return w == WeightScheme::kMetropolis ? "metropolis" : "uniform";
}

const char* StepPolicyName(StepPolicy s) {
  switch (s) {
    case StepPolicy::kFixed: return "fixed";
    case StepPolicy::kTheory: return "theory";
    case StepPolicy::kGrid: return "grid";
  }
  return "?";
}

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error([&] {
        std::string msg = "invalid config";
        for (const auto& e : errors) msg += "\n  " + e;
        return msg;
      }()),
      errors_(std::move(errors)) {}

ExperimentConfig ParseConfig(std::istream& in, const std::filesystem::path& base_dir) {
  pt::ptree root;
  try {
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError({"line " + std::to_string(e.line()) + ": " + e.message()});
  }

  std::vector<std::string> errors;
  Reader r(root, errors);
  ExperimentConfig cfg;

  if (auto v = r.Raw("experiment", "name")) cfg.name = *v;
  r.Count("experiment", "seed", cfg.seed, false);
  if (auto v = r.Raw("experiment", "out")) cfg.out_dir = *v;
  r.Count("experiment", "threads", cfg.threads, false);
  if (auto v = r.Raw("experiment", "diagnostics")) {
    if (*v == "full" || *v == "basic") {
      cfg.full_diagnostics = *v == "full";
    } else {
      r.Error("experiment", "diagnostics", "expected basic or full, got '" + *v + "'");
    }
  }

  ProblemSpec& ps = cfg.problem;
  if (auto v = r.Raw("problem", "kind")) {
    if (auto k = Lookup(ProblemKinds(), *v)) {
      ps.kind = *k;
    } else {
      r.Error("problem", "kind", "unknown problem kind '" + *v + "'");
    }
  }
  switch (ps.kind) {
    case ProblemKind::kConnectivity: ps.samples = 1000; ps.dim = 5; break;
    case ProblemKind::kHeterogeneity: ps.samples = 100; ps.dim = 80; ps.spread = {0.99}; break;
    case ProblemKind::kOverparam: ps.agents = 5; ps.samples = 2; ps.dim = 60; break;
    default: break;
  }
  r.Count("problem", "agents", ps.agents, true);
  r.Count("problem", "samples", ps.samples, true);
  r.Count("problem", "dim", ps.dim, true);
  r.Real("problem", "reg", ps.reg);
  r.RealList("problem", "spread", ps.spread);
  r.RealList("problem", "curvatures", ps.curvatures);
  r.RealList("problem", "centers", ps.centers);
  if (auto v = r.Raw("problem", "path")) {
    std::filesystem::path p = *v;
    ps.path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  }
  if (auto v = r.Raw("problem", "partition")) {
    if (*v == "uniform") {
      ps.partition = PartitionScheme::kUniform;
    } else if (*v == "by_class") {
      ps.partition = PartitionScheme::kByClass;
    } else {
      r.Error("problem", "partition", "expected uniform or by_class, got '" + *v + "'");
    }
  }
  if (auto v = r.Raw("problem", "class_counts")) {
    for (const auto& item : SplitList(*v)) {
      const auto colon = item.find(':');
      const auto pos = colon == std::string::npos ? std::nullopt : ToInteger(Trim(item.substr(0, colon)));
      const auto neg = colon == std::string::npos ? std::nullopt : ToInteger(Trim(item.substr(colon + 1)));
      if (!pos || !neg || *pos < 0 || *neg < 0) {
        r.Error("problem", "class_counts", "expected positive:negative pairs, got '" + item + "'");
        break;
      }
      ps.class_counts.push_back({static_cast<std::size_t>(*pos), static_cast<std::size_t>(*neg)});
    }
  }
  if (ps.kind == ProblemKind::kQuadratic) ps.agents = ps.curvatures.size();

  TopologySpec& ts = cfg.topology;
  if (auto v = r.Raw("topology", "kind")) {
    if (auto k = Lookup(TopologyKinds(), *v)) {
      ts.kind = *k;
    } else {
      r.Error("topology", "kind", "unknown topology kind '" + *v + "'");
    }
  }
  r.RealList("topology", "p", ts.p);
  if (auto v = r.Raw("topology", "weights")) {
    if (*v == "metropolis") {
      ts.weights = WeightScheme::kMetropolis;
    } else if (*v == "uniform") {
      ts.weights = WeightScheme::kUniform;
    } else {
      r.Error("topology", "weights", "expected metropolis or uniform, got '" + *v + "'");
    }
  }
  r.Count("topology", "max_resamples", ts.max_resamples, false);

  if (auto v = r.Raw("algorithm", "names")) {
    for (const auto& item : SplitList(*v)) {
      try {
        cfg.algorithms.push_back(ParseAlgorithm(item));
      } catch (const InvalidArgument& e) {
        r.Error("algorithm", "names", e.what());
      }
    }
  }
  if (auto v = r.Raw("algorithm", "K")) {
    for (const auto& item : SplitList(*v)) {
      const auto k = ToInteger(item);
      if (!k || *k < 0) {
        r.Error("algorithm", "K", "must be a nonnegative integer, got '" + item + "'");
        continue;
      }
      cfg.K.push_back(static_cast<std::size_t>(*k));
    }
  }

  StepSizeSpec& ss = cfg.step;
  if (auto v = r.Raw("stepsize", "policy")) {
    if (*v == "fixed") {
      ss.policy = StepPolicy::kFixed;
    } else if (*v == "theory") {
      ss.policy = StepPolicy::kTheory;
    } else if (*v == "grid") {
      ss.policy = StepPolicy::kGrid;
    } else {
      r.Error("stepsize", "policy", "expected fixed, theory or grid, got '" + *v + "'");
    }
  }
  r.Real("stepsize", "eta", ss.eta);
  r.Real("stepsize", "lo", ss.lo);
  r.Real("stepsize", "hi", ss.hi);
  r.Count("stepsize", "count", ss.count, true);

  r.Real("stop", "epsilon", cfg.stop.epsilon);
  if (auto v = r.Raw("stop", "measure")) {
    try {
      cfg.stop.measure = ParseMeasure(*v);
    } catch (const InvalidArgument& e) {
      r.Error("stop", "measure", e.what());
    }
  }
  r.Count("stop", "max_rounds", cfg.stop.max_rounds, true);

  r.ReportUnknown();
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

ExperimentConfig LoadConfig(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError({file.string() + ": cannot open config file"});
  return ParseConfig(in, file.parent_path());
}

std::vector<std::string> ValidateConfig(const ExperimentConfig& cfg) {
  std::vector<std::string> e;
  const ProblemSpec& ps = cfg.problem;
  if (cfg.name.empty() || cfg.name.find('/') != std::string::npos)
    e.push_back("experiment.name: must be a nonempty plain file name");
  if (cfg.algorithms.empty()) e.push_back("algorithm.names: at least one algorithm required");
  if (cfg.K.empty()) e.push_back("algorithm.K: at least one value required");
  if (ps.agents == 0) e.push_back("problem.agents: must be positive");
  if (ps.spread.empty()) e.push_back("problem.spread: at least one value required");
  for (double s : ps.spread)
    if (s < 0) e.push_back("problem.spread: values must be >= 0");
  if (ps.spread.size() > 1 && ps.kind != ProblemKind::kHeterogeneity &&
      ps.kind != ProblemKind::kOverparam)
    e.push_back("problem.spread: only one value allowed for this problem kind");
  switch (ps.kind) {
    case ProblemKind::kConnectivity:
    case ProblemKind::kHeterogeneity:
    case ProblemKind::kLibsvm:
      if (!(ps.reg > 0)) e.push_back("problem.reg: must be positive");
      break;
    case ProblemKind::kOverparam:
      if (ps.agents * ps.samples >= ps.dim)
        e.push_back("problem.samples: agents*samples must be below dim for over-parameterization");
      break;
    case ProblemKind::kQuadratic:
      if (ps.curvatures.empty() || ps.curvatures.size() != ps.centers.size())
        e.push_back("problem.curvatures: need one curvature per center, at least one agent");
      for (double c : ps.curvatures)
        if (!(c > 0)) e.push_back("problem.curvatures: values must be positive");
      break;
  }
  if (ps.kind == ProblemKind::kLibsvm) {
    if (ps.path.empty()) {
      e.push_back("problem.path: required for libsvm problems");
    } else if (!std::filesystem::is_regular_file(ps.path)) {
      e.push_back("problem.path: file not found: " + ps.path.string());
    }
    if (ps.partition == PartitionScheme::kByClass && ps.class_counts.size() != ps.agents)
      e.push_back("problem.class_counts: need one positive:negative pair per agent");
  }

  const TopologySpec& ts = cfg.topology;
  const std::size_t m = ps.agents;
  if (ts.kind == TopologyKind::kRing && m < 3) e.push_back("topology.kind: ring needs at least 3 agents");
  if (ts.kind == TopologyKind::kErdosRenyi) {
    if (ts.p.empty()) e.push_back("topology.p: at least one value required");
    for (double p : ts.p)
      if (!(p > 0 && p <= 1)) e.push_back("topology.p: values must lie in (0, 1]");
  }
  if (ts.weights == WeightScheme::kUniform && ts.kind != TopologyKind::kComplete &&
      !(ts.kind == TopologyKind::kErdosRenyi && ts.p.size() == 1 && ts.p[0] == 1.0))
    e.push_back("topology.weights: uniform weights need a complete graph");

  const StepSizeSpec& ss = cfg.step;
  if (ss.policy == StepPolicy::kFixed && !(ss.eta > 0)) e.push_back("stepsize.eta: must be positive");
  if (ss.policy == StepPolicy::kGrid && !(ss.lo > 0 && ss.hi >= ss.lo))
    e.push_back("stepsize.lo: need 0 < lo <= hi");
  if (!(cfg.stop.epsilon >= 0)) e.push_back("stop.epsilon: must be >= 0");
  const bool least_squares = ps.kind == ProblemKind::kOverparam || ps.kind == ProblemKind::kQuadratic;
  if (cfg.stop.measure == Measure::kDistMinNorm && !least_squares)
    e.push_back("stop.measure: dist_min_norm needs a least squares problem");
  return e;
}

std::string CanonicalConfig(const ExperimentConfig& cfg) {
  const ProblemSpec& ps = cfg.problem;
  std::ostringstream s;
  char buf[64];
  auto real = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  s << "name=" << cfg.name << "\nseed=" << cfg.seed
    << "\ndiagnostics=" << (cfg.full_diagnostics ? "full" : "basic") << "\nproblem.kind=" << ProblemKindName(ps.kind)
    << "\nproblem.agents=" << ps.agents << "\nproblem.samples=" << ps.samples
    << "\nproblem.dim=" << ps.dim << "\nproblem.reg=" << real(ps.reg)
    << "\nproblem.spread=" << Join(ps.spread) << "\nproblem.curvatures=" << Join(ps.curvatures)
    << "\nproblem.centers=" << Join(ps.centers) << "\nproblem.path=" << ps.path.filename().string()
    << "\nproblem.partition=" << (ps.partition == PartitionScheme::kUniform ? "uniform" : "by_class")
    << "\nproblem.class_counts=";
  for (const auto& c : ps.class_counts) s << c.positive << ':' << c.negative << ',';
  s << "\ntopology.kind=" << TopologyKindName(cfg.topology.kind) << "\ntopology.p=" << Join(cfg.topology.p)
    << "\ntopology.weights=" << WeightSchemeName(cfg.topology.weights)
    << "\ntopology.max_resamples=" << cfg.topology.max_resamples << "\nalgorithm.names=";
  for (Algorithm a : cfg.algorithms) s << AlgorithmName(a) << ',';
  s << "\nalgorithm.K=";
  for (std::size_t k : cfg.K) s << k << ',';
  s << "\nstepsize.policy=" << StepPolicyName(cfg.step.policy) << "\nstepsize.eta=" << real(cfg.step.eta)
    << "\nstepsize.lo=" << real(cfg.step.lo) << "\nstepsize.hi=" << real(cfg.step.hi)
    << "\nstepsize.count=" << cfg.step.count << "\nstop.epsilon=" << real(cfg.stop.epsilon)
    << "\nstop.measure=" << MeasureName(cfg.stop.measure) << "\nstop.max_rounds=" << cfg.stop.max_rounds
    << "\n";
  return s.str();
}

std::string ConfigHash(const ExperimentConfig& cfg) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : CanonicalConfig(cfg)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace localgt
