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

#include "localgt/topology.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "localgt/errors.h"
#include "localgt/rng.h"

namespace localgt {
namespace {

constexpr double kStochasticTol = 1e-12;

}  // namespace

Graph::Graph(std::size_t m, std::vector<Edge> edges) : m_(m) {
  if (m == 0) throw InvalidArgument("Graph: need at least one agent");
  for (auto& [i, j] : edges) {
    if (i == j) throw InvalidArgument("Graph: self-loop on agent " + std::to_string(i));
    if (i >= m || j >= m) throw InvalidArgument("Graph: agent index out of range");
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);
}

std::vector<std::size_t> Graph::Degrees() const {
  std::vector<std::size_t> deg(m_, 0);
  for (const auto& [i, j] : edges_) {
    ++deg[i];
    ++deg[j];
  }
  return deg;
}

bool Graph::HasEdge(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(edges_.begin(), edges_.end(), Edge{i, j});
}

bool Graph::IsConnected() const {
  std::vector<std::vector<std::size_t>> adj(m_);
  for (const auto& [i, j] : edges_) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<bool> seen(m_, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t u : adj[v]) {
      if (!seen[u]) {
        seen[u] = true;
        ++reached;
        stack.push_back(u);
      }
    }
  }
  return reached == m_;
}

bool Graph::IsComplete() const { return edges_.size() == m_ * (m_ - 1) / 2; }

Graph Ring(std::size_t m) {
  if (m < 3) throw InvalidArgument("Ring: need m >= 3");
  std::vector<Graph::Edge> edges;
  for (std::size_t i = 0; i < m; ++i) edges.emplace_back(i, (i + 1) % m);
  return Graph(m, std::move(edges));
}

Graph Complete(std::size_t m) {
  if (m < 2) throw InvalidArgument("Complete: need m >= 2");
  std::vector<Graph::Edge> edges;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) edges.emplace_back(i, j);
  return Graph(m, std::move(edges));
}

Graph ErdosRenyi(std::size_t m, double p, std::uint64_t seed,
                 std::size_t max_resamples) {
  if (m < 2) throw InvalidArgument("ErdosRenyi: need m >= 2");
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("ErdosRenyi: p must lie in (0, 1]");
  for (std::size_t attempt = 0; attempt <= max_resamples; ++attempt) {
    Rng rng(seed + attempt);
    std::vector<Graph::Edge> edges;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        if (rng.Bernoulli(p)) edges.emplace_back(i, j);
    Graph g(m, std::move(edges));
    if (g.IsConnected()) return g;
  }
  throw ConnectivityError("ErdosRenyi: still disconnected after " +
                              std::to_string(max_resamples + 1) + " attempts",
                          max_resamples + 1);
}

void WriteEdgeList(std::ostream& out, const Graph& g) {
  out << "m " << g.num_agents() << '\n';
  for (const auto& [i, j] : g.edges()) out << i << ' ' << j << '\n';
}

Graph ReadEdgeList(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::size_t m = 0;
  bool have_header = false;
  std::vector<Graph::Edge> edges;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (!have_header) {
      std::string tag;
      if (!(ls >> tag >> m) || tag != "m") throw ParseError("expected 'm <count>'", lineno);
      have_header = true;
      continue;
    }
    std::size_t i, j;
    if (!(ls >> i >> j)) throw ParseError("expected '<i> <j>'", lineno);
    std::string rest;
    if (ls >> rest) throw ParseError("trailing token '" + rest + "'", lineno);
    edges.emplace_back(i, j);
  }
  if (!have_header) throw ParseError("empty edge list", lineno);
  return Graph(m, std::move(edges));
}

double Connectivity(const Matrix& w) {
  const std::size_t m = w.rows();
  Matrix centered = w;
  const double avg = 1.0 / static_cast<double>(m);
  for (double& v : centered.data()) v -= avg;
  return SpectralNorm(centered);
}

MixingMatrix::MixingMatrix(const Graph& g, Matrix w) : w_(std::move(w)) {
  const std::size_t m = g.num_agents();
  if (w_.rows() != m || w_.cols() != m)
    throw InvalidArgument("MixingMatrix: weights must be m x m");
  if (!w_.all_finite()) throw InvalidArgument("MixingMatrix: non-finite weight");
  for (std::size_t i = 0; i < m; ++i) {
    double row = 0.0, col = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      row += w_(i, j);
      col += w_(j, i);
      if (std::abs(w_(i, j) - w_(j, i)) > kStochasticTol)
        throw InvalidArgument("MixingMatrix: weights not symmetric");
      if (i != j && w_(i, j) != 0.0 && !g.HasEdge(i, j))
        throw InvalidArgument("MixingMatrix: weight on a non-edge");
    }
    if (std::abs(row - 1.0) > kStochasticTol || std::abs(col - 1.0) > kStochasticTol)
      throw InvalidArgument("MixingMatrix: weights not doubly stochastic");
  }
  rho_ = Connectivity(w_);
  if (!(rho_ < 1.0))
    throw ConnectivityError("MixingMatrix: rho >= 1, network not connected", 1);
}

MixingMatrix MetropolisWeights(const Graph& g) {
  if (!g.IsConnected())
    throw ConnectivityError("MetropolisWeights: graph is disconnected", 1);
  const std::size_t m = g.num_agents();
  const auto deg = g.Degrees();
  Matrix w(m, m);
  for (const auto& [i, j] : g.edges()) {
    const double wij = 1.0 / (1.0 + static_cast<double>(std::max(deg[i], deg[j])));
    w(i, j) = wij;
    w(j, i) = wij;
  }
  for (std::size_t i = 0; i < m; ++i) {
    double off = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      if (j != i) off += w(i, j);
    w(i, i) = 1.0 - off;
  }
  return MixingMatrix(g, std::move(w));
}

MixingMatrix UniformWeights(const Graph& g) {
  if (!g.IsComplete())
    throw InvalidArgument("UniformWeights: graph must be complete");
  const std::size_t m = g.num_agents();
  return MixingMatrix(g, Matrix::Constant(m, m, 1.0 / static_cast<double>(m)));
}

}  // namespace localgt
