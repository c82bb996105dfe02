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

#include "dylp/grid.hpp"

#include <limits>
#include <queue>

#include "dylp/errors.hpp"

namespace dylp {

const StandardFormPolytope& GridShortestPathInstance::polytope() const {
  if (!polytope_ptr) {
    throw ValidationError(
        "grid polytope not factorized; call ensure_factorized first");
  }
  return *polytope_ptr;
}

GridShortestPathInstance build_grid(int k) {
  if (k < 2) {
    throw InvalidSize("build_grid: k must be >= 2, got " + std::to_string(k));
  }
  GridShortestPathInstance inst;
  inst.k = k;
  const int nodes = k * k;
  inst.right_edge_of.assign(static_cast<std::size_t>(nodes), -1);
  inst.down_edge_of.assign(static_cast<std::size_t>(nodes), -1);
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) {
      const int u = r * k + c;
      if (c + 1 < k) {
        inst.right_edge_of[static_cast<std::size_t>(u)] =
            static_cast<int>(inst.edges.size());
        inst.edges.emplace_back(u, u + 1);
      }
      if (r + 1 < k) {
        inst.down_edge_of[static_cast<std::size_t>(u)] =
            static_cast<int>(inst.edges.size());
        inst.edges.emplace_back(u, u + k);
      }
    }
  }
  inst.num_edges = static_cast<Eigen::Index>(inst.edges.size());
  return inst;
}

Eigen::MatrixXd grid_incidence_full(const GridShortestPathInstance& inst) {
  Eigen::MatrixXd A =
      Eigen::MatrixXd::Zero(inst.num_nodes(), inst.num_edges);
  for (std::size_t e = 0; e < inst.edges.size(); ++e) {
    A(inst.edges[e].first, static_cast<Eigen::Index>(e)) = 1.0;
    A(inst.edges[e].second, static_cast<Eigen::Index>(e)) = -1.0;
  }
  return A;
}

void ensure_factorized(GridShortestPathInstance& inst) {
  if (inst.polytope_ptr) return;
  // Unit flow from node 0 to the last node; dropping the sink row leaves a
  // full-row-rank system with b = e_source.
  const Eigen::MatrixXd full = grid_incidence_full(inst);
  const Eigen::Index m = inst.num_nodes() - 1;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  b(0) = 1.0;
  inst.polytope_ptr = std::make_shared<const StandardFormPolytope>(
      build_polytope(full.topRows(m), b));
}

Eigen::VectorXd shortest_path_oracle(const GridShortestPathInstance& inst,
                                     const Eigen::VectorXd& w) {
  if (w.size() != inst.num_edges) {
    throw DimensionMismatch("shortest_path_oracle: w has " +
                            std::to_string(w.size()) + " entries, expected " +
                            std::to_string(inst.num_edges));
  }
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) < 0.0) {
      throw NegativeWeight("shortest_path_oracle: negative cost at edge " +
                           std::to_string(i));
    }
  }

  const int nodes = static_cast<int>(inst.num_nodes());
  const int source = 0;
  const int sink = nodes - 1;
  std::vector<double> dist(static_cast<std::size_t>(nodes),
                           std::numeric_limits<double>::infinity());
  std::vector<int> prev_edge(static_cast<std::size_t>(nodes), -1);
  dist[source] = 0.0;

  using Item = std::pair<double, int>;  // (distance, node)
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    if (u == sink) break;
    const int out[2] = {inst.right_edge_of[static_cast<std::size_t>(u)],
                        inst.down_edge_of[static_cast<std::size_t>(u)]};
    for (int e : out) {
      if (e < 0) continue;
      const int v = inst.edges[static_cast<std::size_t>(e)].second;
      const double nd = d + w(e);
      if (nd < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = nd;
        prev_edge[static_cast<std::size_t>(v)] = e;
        heap.emplace(nd, v);
      }
    }
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(inst.num_edges);
  int u = sink;
  while (u != source) {
    const int e = prev_edge[static_cast<std::size_t>(u)];
    x(e) = 1.0;
    u = inst.edges[static_cast<std::size_t>(e)].first;
  }
  return x;
}

Eigen::VectorXd decode_path_greedy(const GridShortestPathInstance& inst,
                                   const Eigen::VectorXd& x_relaxed) {
  if (x_relaxed.size() != inst.num_edges) {
    throw DimensionMismatch("decode_path_greedy: x has " +
                            std::to_string(x_relaxed.size()) +
                            " entries, expected " +
                            std::to_string(inst.num_edges));
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(inst.num_edges);
  const int sink = static_cast<int>(inst.num_nodes()) - 1;
  int u = 0;
  while (u != sink) {
    const int er = inst.right_edge_of[static_cast<std::size_t>(u)];
    const int ed = inst.down_edge_of[static_cast<std::size_t>(u)];
    int e = -1;
    if (er >= 0 && ed >= 0) {
      // Tie goes right.
      e = x_relaxed(ed) > x_relaxed(er) ? ed : er;
    } else {
      e = er >= 0 ? er : ed;
    }
    x(e) = 1.0;
    u = inst.edges[static_cast<std::size_t>(e)].second;
  }
  return x;
}

}  // namespace dylp
