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

#include "dylp/polytope.hpp"

#include <Eigen/SVD>

#include "dylp/errors.hpp"

namespace dylp {

StandardFormPolytope build_polytope(const Eigen::MatrixXd& A,
                                    const Eigen::VectorXd& b,
                                    double rank_tolerance) {
  if (b.size() != A.rows()) {
    throw DimensionMismatch("build_polytope: b has " +
                            std::to_string(b.size()) + " entries but A has " +
                            std::to_string(A.rows()) + " rows");
  }
  if (A.rows() < 1 || A.rows() >= A.cols()) {
    throw DimensionMismatch("build_polytope: need 1 <= m < n, got m=" +
                            std::to_string(A.rows()) + " n=" +
                            std::to_string(A.cols()));
  }
  if (!A.allFinite() || !b.allFinite()) {
    throw NonFinite("build_polytope: A or b contains NaN/inf");
  }

  StandardFormPolytope P;
  P.A = A;
  P.b = b;
  P.rank_tolerance = rank_tolerance;

  // Divide-and-conquer SVD; with m < n the thin factors are U (m x m) and
  // V (n x m), exactly the compact factorization the projections need.
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  P.svd_u = svd.matrixU();
  P.svd_sigma = svd.singularValues();
  P.svd_v = svd.matrixV();

  const double sigma_max = P.svd_sigma(0);
  const double sigma_min = P.svd_sigma(P.svd_sigma.size() - 1);
  if (!(sigma_min > rank_tolerance * sigma_max) || sigma_max <= 0.0) {
    throw RankDeficient("build_polytope: smallest singular value " +
                        std::to_string(sigma_min) + " is below tolerance " +
                        std::to_string(rank_tolerance) + " * " +
                        std::to_string(sigma_max));
  }
  return P;
}

Eigen::VectorXd project_affine(const StandardFormPolytope& P,
                               const Eigen::VectorXd& z) {
  if (z.size() != P.cols()) {
    throw DimensionMismatch("project_affine: z has " +
                            std::to_string(z.size()) + " entries, expected " +
                            std::to_string(P.cols()));
  }
  Eigen::VectorXd t = P.svd_u.transpose() * (P.A * z - P.b);
  t.array() /= P.svd_sigma.array();
  return z - P.svd_v * t;
}

Eigen::VectorXd project_nonneg(const Eigen::VectorXd& z) {
  return z.cwiseMax(0.0);
}

Eigen::VectorXd project_null_space(const StandardFormPolytope& P,
                                   const Eigen::VectorXd& v) {
  if (v.size() != P.cols()) {
    throw DimensionMismatch("project_null_space: v has " +
                            std::to_string(v.size()) + " entries, expected " +
                            std::to_string(P.cols()));
  }
  return v - P.svd_v * (P.svd_v.transpose() * v);
}

Eigen::VectorXd relu_jacobian_diag(const Eigen::VectorXd& z) {
  return (z.array() > 0.0).cast<double>();
}

ActiveSet active_set(const Eigen::VectorXd& x, double tol) {
  ActiveSet s;
  s.tolerance = tol;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) <= tol) s.indices.push_back(i);
  }
  return s;
}

bool licq_holds(const StandardFormPolytope& P, const Eigen::VectorXd& x,
                double active_tol, double rank_tol) {
  const ActiveSet act = active_set(x, active_tol);
  const Eigen::Index m = P.rows();
  const Eigen::Index n = P.cols();
  const Eigen::Index rows = m + static_cast<Eigen::Index>(act.indices.size());
  if (rows > n) return false;  // more rows than columns can never be full rank

  Eigen::MatrixXd stacked = Eigen::MatrixXd::Zero(rows, n);
  stacked.topRows(m) = P.A;
  for (Eigen::Index j = 0; j < rows - m; ++j) {
    stacked(m + j, act.indices[static_cast<std::size_t>(j)]) = 1.0;
  }
  // Diagnostic-scale rank test; only singular values are needed.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
  const Eigen::VectorXd& sv = svd.singularValues();
  return sv(sv.size() - 1) > rank_tol * sv(0);
}

}  // namespace dylp
