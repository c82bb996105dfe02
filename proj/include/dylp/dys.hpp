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

// Three-operator splitting layer for the regularized linear program
//
//   min_x  w'x + (gamma/2) ||x||^2   s.t.  Ax = b, x >= 0.
//
// One step of the operator is
//
//   T(z) = z - P+(z) + Paff((2 - alpha*gamma) P+(z) - z - alpha*w),
//
// where P+ is the nonnegative projection and Paff the affine projection.
// For alpha in (0, 2/gamma) the iteration z <- T(z) converges and the shadow
// sequence x = P+(z) converges to the unique minimizer; successive-iterate
// residuals decay like O(1/k) and linearly near a fixed point satisfying the
// constraint qualification.

#ifndef DYLP_DYS_HPP_
#define DYLP_DYS_HPP_

#include <vector>

#include <Eigen/Dense>

#include "dylp/polytope.hpp"

namespace dylp {

struct DysConfig {
  double alpha = 0.05;   // step size, must lie in (0, 2/gamma)
  double gamma = 5e-4;   // quadratic regularization weight
  int max_iter = 1000;   // iteration cap K
  double tol = 0.01;     // absolute tolerance on ||z_{k+1} - z_k||_2
};

struct DysState {
  Eigen::VectorXd z;  // final iterate
  Eigen::VectorXd x;  // project_nonneg(z), the layer output
  int iterations_run = 0;
  double final_residual = 0.0;            // last ||z_{k+1} - z_k||_2
  std::vector<double> residual_history;   // filled when requested
};

// One application of T. Composed from the polytope projections; the same
// composition backs the solve loop.
Eigen::VectorXd apply_T(const StandardFormPolytope& P, const Eigen::VectorXd& w,
                        const DysConfig& cfg, const Eigen::VectorXd& z);

// Iterates z <- T(z) from z0 (default: the origin) until the residual drops
// to cfg.tol or cfg.max_iter steps have run. Throws NonFinite with the
// iteration index if the iterate diverges into NaN/inf.
DysState solve_fixed_point(const StandardFormPolytope& P,
                           const Eigen::VectorXd& w, const DysConfig& cfg,
                           const Eigen::VectorXd& z0 = Eigen::VectorXd(),
                           bool record_history = false);

// Generalized Jacobian of T at z:  I - D + PH1 ((2 - alpha*gamma) D - I),
// with D = diag(relu_jacobian_diag(z)) and PH1 the null-space projector.
// Depends on w only through z, so w is not a parameter.
Eigen::MatrixXd jacobian_T_z(const StandardFormPolytope& P,
                             const DysConfig& cfg, const Eigen::VectorXd& z);

// Spectral norm of jacobian_T_z estimated by power iteration on J'J with a
// deterministic start vector and a fixed iteration cap.
double contraction_norm_at(const StandardFormPolytope& P, const DysConfig& cfg,
                           const Eigen::VectorXd& z);

}  // namespace dylp

#endif  // DYLP_DYS_HPP_
