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

// Multi-constraint 0/1 knapsack: maximize w'x subject to Sx <= c, x in
// {0,1}^l. The relaxation lives in standard form over lifted variables
// [x; y1; y2] with y1 the capacity slacks and y2 the slacks of x <= 1:
//
//   A = [ -S  -I_k   0  ]    b = [ -c ]     cost = [ -w; 0; 0 ],
//       [ I_l   0   I_l ]        [  1 ]
//
// so maximizing w'x equals minimizing the lifted cost. A is (k+l) x (2l+k)
// and always has full row rank.

#ifndef DYLP_KNAPSACK_HPP_
#define DYLP_KNAPSACK_HPP_

#include <memory>

#include <Eigen/Dense>

#include "dylp/polytope.hpp"

namespace dylp {

struct KnapsackInstance {
  Eigen::MatrixXd sizes;       // k x l, nonnegative
  Eigen::VectorXd capacities;  // k, positive
  std::shared_ptr<const StandardFormPolytope> polytope_ptr;

  Eigen::Index num_items() const { return sizes.cols(); }
  Eigen::Index num_constraints() const { return sizes.rows(); }
  Eigen::Index lifted_dim() const { return 2 * num_items() + num_constraints(); }
  const StandardFormPolytope& polytope() const;
};

// Builds the lifted polytope eagerly (it is small for any practical l, k).
KnapsackInstance build_knapsack(const Eigen::MatrixXd& sizes,
                                const Eigen::VectorXd& capacities);

// Exact maximizer by depth-first branch and bound (value-sorted, suffix-sum
// bound). Requires nonnegative values; l is capped at 40.
Eigen::VectorXd knapsack_oracle(const KnapsackInstance& inst,
                                const Eigen::VectorXd& w);

// Thresholds the item block of a relaxed point at 0.5, then restores
// feasibility by dropping the lowest-valued selected item until all
// capacities hold. Accepts a length-l or lifted-length vector.
Eigen::VectorXd decode_knapsack(const KnapsackInstance& inst,
                                const Eigen::VectorXd& x_relaxed);

// Lifted min-sense cost [-w; 0; 0] for native item values w.
Eigen::VectorXd knapsack_embed_cost(const KnapsackInstance& inst,
                                    const Eigen::VectorXd& w);

// Lifted feasible point [x; c - Sx; 1 - x] for a binary selection x.
Eigen::VectorXd knapsack_embed_solution(const KnapsackInstance& inst,
                                        const Eigen::VectorXd& x);

}  // namespace dylp

#endif  // DYLP_KNAPSACK_HPP_
