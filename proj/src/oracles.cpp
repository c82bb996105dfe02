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

#include "dylp/oracles.hpp"

#include <limits>

#include "dylp/errors.hpp"

namespace dylp {

namespace {

// Next subset iteration: subsets of {0..n-1} encoded as bitmasks.
// n is capped so the 2^n loop cannot overflow or run away.
void check_enumeration_size(Eigen::Index n) {
  if (n < 1 || n > 24) {
    throw InvalidSize("enumeration oracle supports 1 <= n <= 24, got " +
                      std::to_string(n));
  }
}

}  // namespace

Eigen::VectorXd qp_enumeration_oracle(const Eigen::MatrixXd& A,
                                      const Eigen::VectorXd& b,
                                      const Eigen::VectorXd& w, double gamma,
                                      double feas_tol) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  check_enumeration_size(n);
  if (b.size() != m || w.size() != n) {
    throw DimensionMismatch("qp_enumeration_oracle: input sizes disagree");
  }
  if (!(gamma > 0.0)) {
    throw InvalidSize("qp_enumeration_oracle: gamma must be positive");
  }

  double best_obj = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x;

  // Mask bit i set: coordinate i pinned to zero. Free coordinates solve the
  // equality-constrained QP via its KKT system:
  //   x_F = -(w_F + A_F' lam) / gamma,  (A_F A_F') lam = -(gamma b + A_F w_F).
  const std::uint32_t total = 1u << n;
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    std::vector<Eigen::Index> free_idx;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!(mask & (1u << i))) free_idx.push_back(i);
    }
    const Eigen::Index nf = static_cast<Eigen::Index>(free_idx.size());
    if (nf == 0) continue;

    Eigen::MatrixXd AF(m, nf);
    Eigen::VectorXd wF(nf);
    for (Eigen::Index j = 0; j < nf; ++j) {
      AF.col(j) = A.col(free_idx[static_cast<std::size_t>(j)]);
      wF(j) = w(free_idx[static_cast<std::size_t>(j)]);
    }

    const Eigen::MatrixXd G = AF * AF.transpose();
    const Eigen::VectorXd rhs = -(gamma * b + AF * wF);
    // Least-squares solve; a rank-deficient basis is caught by the residual
    // check below and the subset is skipped.
    Eigen::VectorXd lam = G.completeOrthogonalDecomposition().solve(rhs);
    Eigen::VectorXd xF = -(wF + AF.transpose() * lam) / gamma;

    if ((AF * xF - b).lpNorm<Eigen::Infinity>() >
        feas_tol * (1.0 + b.lpNorm<Eigen::Infinity>())) {
      continue;  // this pinned set cannot satisfy Ax = b
    }
    if ((xF.array() < -feas_tol).any()) continue;

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (Eigen::Index j = 0; j < nf; ++j) {
      x(free_idx[static_cast<std::size_t>(j)]) = std::max(0.0, xF(j));
    }
    const double obj = w.dot(x) + 0.5 * gamma * x.squaredNorm();
    if (obj < best_obj) {
      best_obj = obj;
      best_x = x;
    }
  }

  if (best_x.size() == 0) {
    throw NumericError("qp_enumeration_oracle: no feasible candidate found");
  }
  return best_x;
}

std::vector<Eigen::VectorXd> enumerate_vertices(const Eigen::MatrixXd& A,
                                                const Eigen::VectorXd& b,
                                                double feas_tol) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  check_enumeration_size(n);
  if (b.size() != m) {
    throw DimensionMismatch("enumerate_vertices: b does not match A");
  }

  std::vector<Eigen::VectorXd> vertices;
  const std::uint32_t total = 1u << n;
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    if (static_cast<Eigen::Index>(__builtin_popcount(mask)) != m) continue;
    std::vector<Eigen::Index> basis;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (mask & (1u << i)) basis.push_back(i);
    }
    Eigen::MatrixXd B(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      B.col(j) = A.col(basis[static_cast<std::size_t>(j)]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd xB = lu.solve(b);
    if ((xB.array() < -feas_tol).any()) continue;

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (Eigen::Index j = 0; j < m; ++j) {
      x(basis[static_cast<std::size_t>(j)]) = std::max(0.0, xB(j));
    }
    // Degenerate bases can reproduce a vertex already found.
    bool duplicate = false;
    for (const Eigen::VectorXd& v : vertices) {
      if ((v - x).lpNorm<Eigen::Infinity>() <= 1e-9) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) vertices.push_back(std::move(x));
  }
  return vertices;
}

}  // namespace dylp
