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

// Uniform view over the two combinatorial tasks: a polytope for the relaxed
// layer, an exact oracle for labels, an embedding between native costs /
// solutions and the polytope's coordinates, and a decoder back to feasible
// combinatorial solutions.

#ifndef DYLP_PROBLEM_HPP_
#define DYLP_PROBLEM_HPP_

#include <variant>

#include <Eigen/Dense>

#include "dylp/grid.hpp"
#include "dylp/knapsack.hpp"

namespace dylp {

struct ProblemInstance {
  std::variant<GridShortestPathInstance, KnapsackInstance> impl;

  bool is_knapsack() const {
    return std::holds_alternative<KnapsackInstance>(impl);
  }
  // Length of native cost and solution vectors (edges, or items).
  Eigen::Index native_dim() const;
  // Length of the polytope coordinate vector (equals native_dim for grids).
  Eigen::Index lifted_dim() const;

  const StandardFormPolytope& polytope() const;
  void ensure_factorized();

  // Exact combinatorial optimum for native costs w (0/1, native length).
  Eigen::VectorXd oracle(const Eigen::VectorXd& w) const;

  // Native costs -> min-sense cost vector in polytope coordinates.
  Eigen::VectorXd embed_cost(const Eigen::VectorXd& w) const;

  // Adjoint of embed_cost: gradient in polytope coordinates -> native.
  Eigen::VectorXd chain_cost_grad(const Eigen::VectorXd& grad_lifted) const;

  // Relaxed polytope point -> feasible combinatorial solution (native 0/1).
  Eigen::VectorXd decode(const Eigen::VectorXd& x_relaxed) const;

  // Nonnegative suboptimality of x_pred against the optimum x_star under
  // true costs w (cost difference for paths, value shortfall for knapsacks).
  double regret(const Eigen::VectorXd& w, const Eigen::VectorXd& x_pred,
                const Eigen::VectorXd& x_star) const;

  // Objective value |w' x_star| used to normalize regret sums.
  double optimal_value(const Eigen::VectorXd& w,
                       const Eigen::VectorXd& x_star) const;
};

ProblemInstance make_grid_problem(int k);
ProblemInstance make_knapsack_problem(const Eigen::MatrixXd& sizes,
                                      const Eigen::VectorXd& capacities);

}  // namespace dylp

#endif  // DYLP_PROBLEM_HPP_
