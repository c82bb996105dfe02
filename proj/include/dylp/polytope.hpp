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

// Standard-form polytope {x : Ax = b, x >= 0} with a precomputed compact SVD
// of A. The SVD factors give exact projections onto the affine set and onto
// the null space of A without ever materializing a pseudoinverse. A polytope
// is immutable after build_polytope and safe to share read-only across
// threads.

#ifndef DYLP_POLYTOPE_HPP_
#define DYLP_POLYTOPE_HPP_

#include <vector>

#include <Eigen/Dense>

namespace dylp {

struct StandardFormPolytope {
  Eigen::MatrixXd A;          // m x n, full row rank, m < n
  Eigen::VectorXd b;          // m
  Eigen::MatrixXd svd_u;      // m x m, orthonormal columns
  Eigen::VectorXd svd_sigma;  // m singular values, descending, all positive
  Eigen::MatrixXd svd_v;      // n x m, orthonormal columns
  double rank_tolerance = 1e-10;

  Eigen::Index rows() const { return A.rows(); }
  Eigen::Index cols() const { return A.cols(); }
};

// Index set of coordinates at (or below) a nonnegativity tolerance.
struct ActiveSet {
  std::vector<Eigen::Index> indices;  // sorted ascending
  double tolerance = 1e-6;
};

// Factors A once. Throws DimensionMismatch unless b matches A and m < n,
// NonFinite if the inputs contain NaN/inf, and RankDeficient if the smallest
// singular value is <= rank_tolerance times the largest.
StandardFormPolytope build_polytope(const Eigen::MatrixXd& A,
                                    const Eigen::VectorXd& b,
                                    double rank_tolerance = 1e-10);

// Euclidean projection onto {x : Ax = b}: z - V diag(1/sigma) U^T (Az - b).
Eigen::VectorXd project_affine(const StandardFormPolytope& P,
                               const Eigen::VectorXd& z);

// Euclidean projection onto the nonnegative orthant (coordinate-wise max).
Eigen::VectorXd project_nonneg(const Eigen::VectorXd& z);

// Orthogonal projection onto null(A): v - V V^T v. This is the derivative of
// project_affine and the subspace in which cost gradients must live.
Eigen::VectorXd project_null_space(const StandardFormPolytope& P,
                                   const Eigen::VectorXd& v);

// Diagonal of the generalized derivative of project_nonneg: 1 where z_i > 0,
// 0 where z_i <= 0. Ties at zero resolve to 0.
Eigen::VectorXd relu_jacobian_diag(const Eigen::VectorXd& z);

// Coordinates with x_i <= tol.
ActiveSet active_set(const Eigen::VectorXd& x, double tol = 1e-6);

// Linear independence constraint qualification at x: the rows of A together
// with the unit rows of the active coordinates must be linearly independent,
// judged by smallest/largest singular value of the stacked matrix.
bool licq_holds(const StandardFormPolytope& P, const Eigen::VectorXd& x,
                double active_tol = 1e-6, double rank_tol = 1e-8);

}  // namespace dylp

#endif  // DYLP_POLYTOPE_HPP_
