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

#include "dylp/jfb.hpp"

#include "dylp/errors.hpp"

namespace dylp {

Eigen::VectorXd grad_wrt_cost(const StandardFormPolytope& P,
                              const DysConfig& cfg,
                              const Eigen::VectorXd& z_fixed,
                              const Eigen::VectorXd& loss_grad_x) {
  if (z_fixed.size() != P.cols() || loss_grad_x.size() != P.cols()) {
    throw DimensionMismatch("grad_wrt_cost: z or loss gradient has wrong size");
  }
  if (!z_fixed.allFinite() || !loss_grad_x.allFinite()) {
    throw NonFinite("grad_wrt_cost: non-finite input");
  }
  // Coordinates with z <= 0 are inactive in x = relu(z): masked out of the
  // chain. The null-space projection makes the result orthogonal to rows(A).
  const Eigen::VectorXd masked =
      relu_jacobian_diag(z_fixed).cwiseProduct(loss_grad_x);
  return -cfg.alpha * project_null_space(P, masked);
}

Eigen::VectorXd loss_grad_x_l2(const Eigen::VectorXd& x_pred,
                               const Eigen::VectorXd& x_star) {
  if (x_pred.size() != x_star.size()) {
    throw DimensionMismatch("loss_grad_x_l2: sizes disagree");
  }
  return 2.0 * (x_pred - x_star);
}

Eigen::VectorXd finite_diff_grad_wrt_cost(const StandardFormPolytope& P,
                                          const Eigen::VectorXd& w,
                                          const Eigen::VectorXd& x_star,
                                          const DysConfig& solve_cfg,
                                          double h) {
  if (w.size() != P.cols() || x_star.size() != P.cols()) {
    throw DimensionMismatch("finite_diff_grad_wrt_cost: sizes disagree");
  }
  if (!(h > 0.0)) {
    throw ValidationError("finite_diff_grad_wrt_cost: h must be positive");
  }
  const Eigen::Index n = P.cols();
  Eigen::VectorXd g(n);
  Eigen::VectorXd wp = w;
  for (Eigen::Index i = 0; i < n; ++i) {
    wp(i) = w(i) + h;
    const double lp =
        (solve_fixed_point(P, wp, solve_cfg).x - x_star).squaredNorm();
    wp(i) = w(i) - h;
    const double lm =
        (solve_fixed_point(P, wp, solve_cfg).x - x_star).squaredNorm();
    wp(i) = w(i);
    g(i) = (lp - lm) / (2.0 * h);
  }
  return g;
}

}  // namespace dylp
