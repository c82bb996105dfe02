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

// Jacobian-free backward pass through the fixed-point layer. Instead of
// solving the implicit-function linear system, the backward pass treats the
// last iteration as the whole computation:
//
//   grad_w =  d/dw [ T(z) ]' grad_x  =  -alpha * PH1( D(z) .* grad_x ),
//
// a pseudo-gradient that is provably aligned with the true gradient near a
// contractive, constraint-qualified fixed point. It always lies in null(A).

#ifndef DYLP_JFB_HPP_
#define DYLP_JFB_HPP_

#include <Eigen/Dense>

#include "dylp/dys.hpp"
#include "dylp/polytope.hpp"

namespace dylp {

// Pseudo-gradient of a loss with respect to the cost vector w, given the
// fixed point z and the loss gradient with respect to x = project_nonneg(z).
Eigen::VectorXd grad_wrt_cost(const StandardFormPolytope& P,
                              const DysConfig& cfg,
                              const Eigen::VectorXd& z_fixed,
                              const Eigen::VectorXd& loss_grad_x);

// Gradient of ||x_pred - x_star||^2 with respect to x_pred.
Eigen::VectorXd loss_grad_x_l2(const Eigen::VectorXd& x_pred,
                               const Eigen::VectorXd& x_star);

// Central-difference reference gradient of w -> ||x(w) - x_star||^2 where
// x(w) is a tight fixed-point solve under solve_cfg. 2n solves; diagnostic
// use only.
Eigen::VectorXd finite_diff_grad_wrt_cost(const StandardFormPolytope& P,
                                          const Eigen::VectorXd& w,
                                          const Eigen::VectorXd& x_star,
                                          const DysConfig& solve_cfg,
                                          double h = 1e-5);

}  // namespace dylp

#endif  // DYLP_JFB_HPP_
