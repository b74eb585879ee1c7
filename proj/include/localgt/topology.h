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

#ifndef LOCALGT_TOPOLOGY_H_
#define LOCALGT_TOPOLOGY_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "localgt/linalg.h"

namespace localgt {

// Undirected simple graph on agents 0..m-1. Edges are stored once as
// (i, j) with i < j, sorted ascending. Self-communication is implicit.
class Graph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  Graph(std::size_t m, std::vector<Edge> edges);

  std::size_t num_agents() const { return m_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::vector<std::size_t> Degrees() const;
  bool HasEdge(std::size_t i, std::size_t j) const;
  bool IsConnected() const;
  bool IsComplete() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t m_;
  std::vector<Edge> edges_;
};

Graph Ring(std::size_t m);
Graph Complete(std::size_t m);

// G(m, p) with edges visited in (i, j) lexicographic order. A disconnected
// draw is replaced by a draw with seed + 1, seed + 2, ..., for at most
// `max_resamples` extra attempts.
Graph ErdosRenyi(std::size_t m, double p, std::uint64_t seed,
                 std::size_t max_resamples = 100);

// Edge-list text: "m <count>" then one "<i> <j>" line per edge, ascending.
void WriteEdgeList(std::ostream& out, const Graph& g);
Graph ReadEdgeList(std::istream& in);

// Symmetric doubly stochastic gossip matrix together with its connectivity
// rho = ||W - (1/m) 1 1ᵀ||₂. Construction checks symmetry, stochasticity,
// the sparsity pattern of the graph, and rho < 1.
class MixingMatrix {
 public:
  MixingMatrix(const Graph& g, Matrix w);

  const Matrix& weights() const { return w_; }
  double rho() const { return rho_; }
  std::size_t num_agents() const { return w_.rows(); }

 private:
  Matrix w_;
  double rho_;
};

// w_ij = 1 / (1 + max(deg_i, deg_j)) on edges, remainder on the diagonal.
MixingMatrix MetropolisWeights(const Graph& g);
// W = (1/m) 1 1ᵀ. Only valid on the complete graph; rho is exactly 0.
MixingMatrix UniformWeights(const Graph& g);

// ||W - (1/m) 1 1ᵀ||₂ for any m×m matrix.
double Connectivity(const Matrix& w);

}  // namespace localgt

#endif  // LOCALGT_TOPOLOGY_H_
