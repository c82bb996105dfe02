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

#include "dylp/problem.hpp"

#include <cmath>

namespace dylp {

Eigen::Index ProblemInstance::native_dim() const {
  if (is_knapsack()) return std::get<KnapsackInstance>(impl).num_items();
  return std::get<GridShortestPathInstance>(impl).num_edges;
}

Eigen::Index ProblemInstance::lifted_dim() const {
  if (is_knapsack()) return std::get<KnapsackInstance>(impl).lifted_dim();
  return std::get<GridShortestPathInstance>(impl).num_edges;
}

const StandardFormPolytope& ProblemInstance::polytope() const {
  if (is_knapsack()) return std::get<KnapsackInstance>(impl).polytope();
  return std::get<GridShortestPathInstance>(impl).polytope();
}

void ProblemInstance::ensure_factorized() {
  if (!is_knapsack()) {
    dylp::ensure_factorized(std::get<GridShortestPathInstance>(impl));
  }
}

Eigen::VectorXd ProblemInstance::oracle(const Eigen::VectorXd& w) const {
  if (is_knapsack()) {
    return knapsack_oracle(std::get<KnapsackInstance>(impl), w);
  }
  return shortest_path_oracle(std::get<GridShortestPathInstance>(impl), w);
}

Eigen::VectorXd ProblemInstance::embed_cost(const Eigen::VectorXd& w) const {
  if (is_knapsack()) {
    return knapsack_embed_cost(std::get<KnapsackInstance>(impl), w);
  }
  return w;
}

Eigen::VectorXd ProblemInstance::chain_cost_grad(
    const Eigen::VectorXd& grad_lifted) const {
  if (is_knapsack()) {
    // embed_cost maps w to [-w; 0; 0], so the adjoint negates the head.
    return -grad_lifted.head(native_dim());
  }
  return grad_lifted;
}

Eigen::VectorXd ProblemInstance::decode(const Eigen::VectorXd& x_relaxed) const {
  if (is_knapsack()) {
    return decode_knapsack(std::get<KnapsackInstance>(impl), x_relaxed);
  }
  return decode_path_greedy(std::get<GridShortestPathInstance>(impl),
                            x_relaxed);
}

double ProblemInstance::regret(const Eigen::VectorXd& w,
                               const Eigen::VectorXd& x_pred,
                               const Eigen::VectorXd& x_star) const {
  // Paths minimize cost, knapsacks maximize value; both ways the optimum
  // makes the difference nonnegative.
  const double diff = w.dot(x_pred - x_star);
  return is_knapsack() ? -diff : diff;
}

double ProblemInstance::optimal_value(const Eigen::VectorXd& w,
                                      const Eigen::VectorXd& x_star) const {
  return std::abs(w.dot(x_star));
}

ProblemInstance make_grid_problem(int k) {
  return ProblemInstance{build_grid(k)};
}

ProblemInstance make_knapsack_problem(const Eigen::MatrixXd& sizes,
                                      const Eigen::VectorXd& capacities) {
  return ProblemInstance{build_knapsack(sizes, capacities)};
}

}  // namespace dylp
