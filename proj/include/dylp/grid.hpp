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

// k x k grid shortest path from the top-left to the bottom-right corner,
// moving only right or down. Nodes are indexed row-major (node = r*k + c);
// edges are ordered per node, right edge before down edge. The flow polytope
// uses the node-edge incidence matrix with the sink row dropped, which makes
// it full row rank (m = k^2 - 1 rows, n = 2k(k-1) columns).
//
// Factoring the incidence matrix is much more expensive than building the
// graph, so the polytope is assembled and factored on first demand via
// ensure_factorized; structural queries stay cheap at any k.

#ifndef DYLP_GRID_HPP_
#define DYLP_GRID_HPP_

#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dylp/polytope.hpp"

namespace dylp {

struct GridShortestPathInstance {
  int k = 0;
  Eigen::Index num_edges = 0;
  std::vector<std::pair<int, int>> edges;  // (tail node, head node)
  std::vector<int> right_edge_of;          // per node, edge index or -1
  std::vector<int> down_edge_of;           // per node, edge index or -1
  std::shared_ptr<const StandardFormPolytope> polytope_ptr;

  Eigen::Index num_nodes() const { return Eigen::Index(k) * k; }
  bool factorized() const { return polytope_ptr != nullptr; }
  const StandardFormPolytope& polytope() const;
};

// Builds the graph structure; k >= 2. Does not factor the polytope.
GridShortestPathInstance build_grid(int k);

// Assembles the reduced incidence system and factors it. No-op when done.
void ensure_factorized(GridShortestPathInstance& inst);

// Full node-edge incidence matrix (k^2 rows): +1 at the tail, -1 at the head.
Eigen::MatrixXd grid_incidence_full(const GridShortestPathInstance& inst);

// Exact shortest path under nonnegative edge costs w, as a 0/1 edge
// indicator. Throws NegativeWeight if any cost is negative.
Eigen::VectorXd shortest_path_oracle(const GridShortestPathInstance& inst,
                                     const Eigen::VectorXd& w);

// Decodes a relaxed flow into a path: walk from the source, at each node
// follow the out-edge with the larger flow value, ties toward right.
Eigen::VectorXd decode_path_greedy(const GridShortestPathInstance& inst,
                                   const Eigen::VectorXd& x_relaxed);

}  // namespace dylp

#endif  // DYLP_GRID_HPP_
