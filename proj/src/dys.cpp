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

#include "dylp/dys.hpp"

#include <cmath>

#include "dylp/errors.hpp"
#include "dylp/rng.hpp"

namespace dylp {

namespace {

void validate(const StandardFormPolytope& P, const Eigen::VectorXd& w,
              const DysConfig& cfg) {
  if (w.size() != P.cols()) {
    throw DimensionMismatch("dys: w has " + std::to_string(w.size()) +
                            " entries, expected " + std::to_string(P.cols()));
  }
  if (!(cfg.gamma > 0.0)) {
    throw ValidationError("dys: gamma must be positive");
  }
  if (!(cfg.alpha > 0.0) || !(cfg.alpha * cfg.gamma < 2.0)) {
    throw ValidationError("dys: alpha must lie in (0, 2/gamma)");
  }
  if (cfg.max_iter < 1) {
    throw ValidationError("dys: max_iter must be >= 1");
  }
  if (!(cfg.tol >= 0.0)) {
    throw ValidationError("dys: tol must be >= 0");
  }
}

struct Workspace {
  Eigen::VectorXd x;   // n
  Eigen::VectorXd y;   // n
  Eigen::VectorXd rm;  // m
  Eigen::VectorXd tm;  // m
};

// out = T(z). Single authoritative implementation of the operator; both the
// public apply_T and the solve loop go through here. The affine projection is
// expanded into its three matrix-vector products so no n x n matrix and no
// temporaries are formed.
void apply_T_into(const StandardFormPolytope& P, const Eigen::VectorXd& w,
                  const DysConfig& cfg, const Eigen::VectorXd& z,
                  Eigen::VectorXd& out, Workspace& ws) {
  ws.x = z.cwiseMax(0.0);
  ws.y = (2.0 - cfg.alpha * cfg.gamma) * ws.x - z - cfg.alpha * w;
  ws.rm.noalias() = P.A * ws.y;
  ws.rm -= P.b;
  ws.tm.noalias() = P.svd_u.transpose() * ws.rm;
  ws.tm.array() /= P.svd_sigma.array();
  // T(z) = z - x + Paff(y) with Paff(y) = y - V tm.
  out = z - ws.x + ws.y;
  out.noalias() -= P.svd_v * ws.tm;
}

}  // namespace

Eigen::VectorXd apply_T(const StandardFormPolytope& P, const Eigen::VectorXd& w,
                        const DysConfig& cfg, const Eigen::VectorXd& z) {
  validate(P, w, cfg);
  if (z.size() != P.cols()) {
    throw DimensionMismatch("apply_T: z has " + std::to_string(z.size()) +
                            " entries, expected " + std::to_string(P.cols()));
  }
  Workspace ws;
  Eigen::VectorXd out(P.cols());
  apply_T_into(P, w, cfg, z, out, ws);
  return out;
}

DysState solve_fixed_point(const StandardFormPolytope& P,
                           const Eigen::VectorXd& w, const DysConfig& cfg,
                           const Eigen::VectorXd& z0, bool record_history) {
  validate(P, w, cfg);
  const Eigen::Index n = P.cols();

  DysState state;
  if (z0.size() == 0) {
    state.z = Eigen::VectorXd::Zero(n);
  } else {
    if (z0.size() != n) {
      throw DimensionMismatch("solve_fixed_point: z0 has " +
                              std::to_string(z0.size()) +
                              " entries, expected " + std::to_string(n));
    }
    state.z = z0;
  }
  if (record_history) {
    state.residual_history.reserve(static_cast<std::size_t>(cfg.max_iter));
  }

  Workspace ws;
  Eigen::VectorXd znext(n);
  for (int k = 1; k <= cfg.max_iter; ++k) {
    apply_T_into(P, w, cfg, state.z, znext, ws);
    const double res = (znext - state.z).norm();
    state.z.swap(znext);
    state.iterations_run = k;
    state.final_residual = res;
    if (record_history) state.residual_history.push_back(res);
    if (!std::isfinite(res) || !state.z.allFinite()) {
      throw NonFinite("solve_fixed_point: iterate became non-finite at "
                      "iteration " +
                      std::to_string(k) + " (residual " + std::to_string(res) +
                      ")");
    }
    if (res <= cfg.tol) break;
  }
  state.x = state.z.cwiseMax(0.0);
  return state;
}

Eigen::MatrixXd jacobian_T_z(const StandardFormPolytope& P,
                             const DysConfig& cfg, const Eigen::VectorXd& z) {
  if (z.size() != P.cols()) {
    throw DimensionMismatch("jacobian_T_z: z has " + std::to_string(z.size()) +
                            " entries, expected " + std::to_string(P.cols()));
  }
  if (!(cfg.gamma > 0.0) || !(cfg.alpha > 0.0) ||
      !(cfg.alpha * cfg.gamma < 2.0)) {
    throw ValidationError("jacobian_T_z: alpha must lie in (0, 2/gamma)");
  }
  const Eigen::Index n = P.cols();
  const Eigen::VectorXd diag = relu_jacobian_diag(z);
  // M = (2 - alpha*gamma) D - I, applied column-wise, then projected onto
  // null(A): J = I - D + (M - V V' M).
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  const double s = 2.0 - cfg.alpha * cfg.gamma;
  for (Eigen::Index i = 0; i < n; ++i) M(i, i) = s * diag(i) - 1.0;
  Eigen::MatrixXd J = M - P.svd_v * (P.svd_v.transpose() * M);
  for (Eigen::Index i = 0; i < n; ++i) J(i, i) += 1.0 - diag(i);
  return J;
}

double contraction_norm_at(const StandardFormPolytope& P, const DysConfig& cfg,
                           const Eigen::VectorXd& z) {
  const Eigen::MatrixXd J = jacobian_T_z(P, cfg, z);
  const Eigen::MatrixXd B = J.transpose() * J;
  const Eigen::Index n = B.rows();

  // Power iteration on J'J. The start vector is random but fixed-seed, so
  // results are reproducible and generically not orthogonal to the top
  // eigenvector.
  Rng rng(0x9e2ULL);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.uniform(-1.0, 1.0);
  v.normalize();

  double lambda = 0.0;
  for (int it = 0; it < 500; ++it) {
    Eigen::VectorXd bv = B * v;
    const double norm = bv.norm();
    if (norm <= 0.0) return 0.0;  // J'J v = 0: operator norm 0 along v
    bv /= norm;
    const double next = bv.dot(B * bv);
    const bool settled = std::abs(next - lambda) <= 1e-12 * std::max(1.0, next);
    v.swap(bv);
    lambda = next;
    if (settled) break;
  }
  return std::sqrt(std::max(0.0, lambda));
}

}  // namespace dylp
