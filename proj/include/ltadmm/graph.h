// Copyright 2026 The LT-ADMM-DP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LTADMM_GRAPH_H_
#define LTADMM_GRAPH_H_

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace ltadmm {

using AgentId = int;
using Edge = std::pair<AgentId, AgentId>;

// Undirected, connected, simple graph over agents 0..n-1. Immutable once
// built; neighbor lists are sorted so message ordering is deterministic.
class Topology {
 public:
  // Validates and builds. Throws Error with kInvalidTopology (bad ids or
  // n < 1), kSelfLoop, kDuplicateEdge or kDisconnected.
  static Topology FromEdges(int n_agents, std::span<const Edge> edges);

  int n_agents() const { return static_cast<int>(neighbors_.size()); }
  // Edges as (i, j) with i < j, sorted lexicographically.
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<AgentId>& neighbors(AgentId i) const {
    return neighbors_[i];
  }
  int degree(AgentId i) const {
    return static_cast<int>(neighbors_[i].size());
  }
  int max_degree() const;
  // Number of directed edges, i.e. sum of degrees.
  int directed_edge_count() const { return 2 * num_edges(); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  // Position of j inside neighbors(i), or -1 when j is not a neighbor.
  int NeighborIndex(AgentId i, AgentId j) const;

  // L = D - A.
  Eigen::MatrixXd Laplacian() const;

 private:
  Topology() = default;

  std::vector<Edge> edges_;
  std::vector<std::vector<AgentId>> neighbors_;
};

// Cycle 0-1-...-(n-1)-0. Requires n >= 3.
Topology BuildRing(int n);
Topology BuildComplete(int n);
Topology BuildFromEdgeList(int n, std::span<const Edge> edges);

// Applies the relabeling i -> permutation[i].
Topology Relabel(const Topology& topology, std::span<const int> permutation);

struct SpectralInfo {
  double lambda_min_nonzero = 0.0;  // algebraic connectivity
  double lambda_max = 0.0;
  std::vector<int> degrees;
  int max_degree = 0;
  // Full ascending Laplacian spectrum.
  std::vector<double> eigenvalues;
};

// Relative threshold below which a Laplacian eigenvalue counts as zero.
inline constexpr double kZeroEigenvalueRelTol = 1e-9;

// Dense symmetric eigendecomposition of the Laplacian. Throws kDisconnected
// if more than one eigenvalue falls under kZeroEigenvalueRelTol * lambda_max.
SpectralInfo ComputeSpectralInfo(const Topology& topology);

// Strict upper bound 2 / (tau * lambda_max * rho) on the correction step.
double BetaBound(const SpectralInfo& spectral, int tau, double rho);

}  // namespace ltadmm

#endif  // LTADMM_GRAPH_H_
