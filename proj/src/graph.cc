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

#include "ltadmm/graph.h"

#include <algorithm>
#include <queue>
#include <string>

#include "ltadmm/error.h"

namespace ltadmm {

namespace {

std::string EdgeString(AgentId i, AgentId j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

bool IsConnected(const std::vector<std::vector<AgentId>>& neighbors) {
  const int n = static_cast<int>(neighbors.size());
  std::vector<bool> seen(n, false);
  std::queue<AgentId> frontier;
  frontier.push(0);
  seen[0] = true;
  int visited = 1;
  while (!frontier.empty()) {
    const AgentId i = frontier.front();
    frontier.pop();
    for (AgentId j : neighbors[i]) {
      if (!seen[j]) {
        seen[j] = true;
        ++visited;
        frontier.push(j);
      }
    }
  }
  return visited == n;
}

}  // namespace

Topology Topology::FromEdges(int n_agents, std::span<const Edge> edges) {
  if (n_agents < 1) {
    throw Error(ErrorCode::kInvalidTopology,
                "topology needs at least one agent, got " +
                    std::to_string(n_agents));
  }
  Topology t;
  t.neighbors_.resize(n_agents);
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n_agents || b >= n_agents) {
      throw Error(ErrorCode::kInvalidTopology,
                  "edge " + EdgeString(a, b) + " out of range for " +
                      std::to_string(n_agents) + " agents");
    }
    if (a == b) {
      throw Error(ErrorCode::kSelfLoop, "self-loop at agent " +
                                            std::to_string(a));
    }
    t.edges_.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(t.edges_.begin(), t.edges_.end());
  auto dup = std::adjacent_find(t.edges_.begin(), t.edges_.end());
  if (dup != t.edges_.end()) {
    throw Error(ErrorCode::kDuplicateEdge,
                "duplicate edge " + EdgeString(dup->first, dup->second));
  }
  for (auto [a, b] : t.edges_) {
    t.neighbors_[a].push_back(b);
    t.neighbors_[b].push_back(a);
  }
  for (auto& list : t.neighbors_) std::sort(list.begin(), list.end());
  if (!IsConnected(t.neighbors_)) {
    throw Error(ErrorCode::kDisconnected,
                "graph with " + std::to_string(n_agents) +
                    " agents is not connected");
  }
  return t;
}

int Topology::max_degree() const {
  int d = 0;
  for (const auto& list : neighbors_) {
    d = std::max(d, static_cast<int>(list.size()));
  }
  return d;
}

int Topology::NeighborIndex(AgentId i, AgentId j) const {
  const auto& list = neighbors_[i];
  auto it = std::lower_bound(list.begin(), list.end(), j);
  if (it == list.end() || *it != j) return -1;
  return static_cast<int>(it - list.begin());
}

Eigen::MatrixXd Topology::Laplacian() const {
  const int n = n_agents();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (auto [a, b] : edges_) {
    lap(a, b) -= 1.0;
    lap(b, a) -= 1.0;
    lap(a, a) += 1.0;
    lap(b, b) += 1.0;
  }
  return lap;
}

Topology BuildRing(int n) {
  if (n < 3) {
    throw Error(ErrorCode::kInvalidTopology,
                "ring needs at least 3 agents, got " + std::to_string(n));
  }
  std::vector<Edge> edges;
  edges.reserve(n);
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Topology::FromEdges(n, edges);
}

Topology BuildComplete(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return Topology::FromEdges(n, edges);
}

Topology BuildFromEdgeList(int n, std::span<const Edge> edges) {
  return Topology::FromEdges(n, edges);
}

Topology Relabel(const Topology& topology, std::span<const int> permutation) {
  if (static_cast<int>(permutation.size()) != topology.n_agents()) {
    throw Error(ErrorCode::kInvalidTopology,
                "permutation size does not match agent count");
  }
  std::vector<Edge> edges;
  for (auto [a, b] : topology.edges()) {
    edges.emplace_back(permutation[a], permutation[b]);
  }
  return Topology::FromEdges(topology.n_agents(), edges);
}

SpectralInfo ComputeSpectralInfo(const Topology& topology) {
  SpectralInfo info;
  const int n = topology.n_agents();
  info.degrees.resize(n);
  for (int i = 0; i < n; ++i) info.degrees[i] = topology.degree(i);
  info.max_degree = topology.max_degree();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      topology.Laplacian(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kInternal, "Laplacian eigensolver failed");
  }
  const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending
  info.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  info.lambda_max = ev(n - 1);

  const double threshold = kZeroEigenvalueRelTol * info.lambda_max;
  int zeros = 0;
  for (double v : info.eigenvalues) {
    if (std::abs(v) < threshold) ++zeros;
  }
  // A single agent has no nonzero eigenvalue at all.
  if (n == 1) return info;
  if (zeros != 1) {
    throw Error(ErrorCode::kDisconnected,
                "Laplacian has " + std::to_string(zeros) +
                    " zero eigenvalues; graph is not connected");
  }
  for (double v : info.eigenvalues) {
    if (v >= threshold) {
      info.lambda_min_nonzero = v;
      break;
    }
  }
  return info;
}

double BetaBound(const SpectralInfo& spectral, int tau, double rho) {
  if (tau < 1 || !(rho > 0.0)) {
    throw Error(ErrorCode::kDomain, "beta bound needs tau >= 1 and rho > 0");
  }
  return 2.0 / (static_cast<double>(tau) * spectral.lambda_max * rho);
}

}  // namespace ltadmm
