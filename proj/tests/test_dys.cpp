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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "dylp/dys.hpp"
#include "dylp/errors.hpp"
#include "dylp/oracles.hpp"
#include "dylp/polytope.hpp"
#include "dylp/rng.hpp"

using dylp::DysConfig;
using dylp::StandardFormPolytope;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

StandardFormPolytope simplex2() {
  MatrixXd A(1, 2);
  A << 1, 1;
  return dylp::build_polytope(A, VectorXd::Ones(1));
}

DysConfig tight(double alpha, double gamma) {
  DysConfig cfg;
  cfg.alpha = alpha;
  cfg.gamma = gamma;
  cfg.max_iter = 100000;
  cfg.tol = 1e-12;
  return cfg;
}

// Random feasible standard-form instance: Gaussian A, b = A x0 with x0 > 0
// so the polytope is nonempty.
StandardFormPolytope random_feasible(dylp::Rng& rng, int m, int n,
                                     VectorXd* w_out) {
  MatrixXd A(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = rng.gaussian();
  VectorXd x0(n);
  for (int j = 0; j < n; ++j) x0(j) = rng.uniform(0.2, 1.2);
  if (w_out) {
    w_out->resize(n);
    for (int j = 0; j < n; ++j) (*w_out)(j) = rng.gaussian();
  }
  return dylp::build_polytope(A, A * x0);
}

}  // namespace

TEST_CASE("zero cost minimizes the norm over the simplex") {
  auto P = simplex2();
  auto st = dylp::solve_fixed_point(P, VectorXd::Zero(2), tight(1.0, 1.0));
  CHECK(st.x(0) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(st.x(1) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(st.final_residual <= 1e-12);
}

TEST_CASE("linear cost pins the expensive coordinate") {
  auto P = simplex2();
  VectorXd w(2);
  w << 1, 0;
  auto st = dylp::solve_fixed_point(P, w, tight(10.0, 0.1));
  CHECK(st.x(0) == doctest::Approx(0.0).epsilon(1e-7));
  CHECK(st.x(1) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("solver agrees with the active-set enumeration oracle") {
  dylp::Rng rng(11);
  for (int trial = 0; trial < 6; ++trial) {
    int m = 1 + trial % 3;
    int n = m + 3;
    VectorXd w;
    auto P = random_feasible(rng, m, n, &w);
    double gamma = trial % 2 == 0 ? 1.0 : 0.1;
    auto st = dylp::solve_fixed_point(P, w, tight(1.0 / gamma, gamma));
    VectorXd ref = dylp::qp_enumeration_oracle(P.A, P.b, w, gamma);
    CHECK((st.x - ref).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("shadow iterate is nearly feasible at tight tolerance") {
  dylp::Rng rng(12);
  VectorXd w;
  auto P = random_feasible(rng, 3, 7, &w);
  auto st = dylp::solve_fixed_point(P, w, tight(1.0, 1.0));
  CHECK((P.A * st.x - P.b).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("residual history is recorded and nonincreasing") {
  dylp::Rng rng(13);
  VectorXd w;
  auto P = random_feasible(rng, 2, 6, &w);
  DysConfig cfg = tight(1.0, 1.0);
  cfg.max_iter = 50;
  cfg.tol = 0.0;
  auto st = dylp::solve_fixed_point(P, w, cfg, VectorXd(), true);
  // tol = 0 still stops on an exact (bitwise) fixed point, so the history may
  // legitimately be shorter than max_iter.
  REQUIRE(st.residual_history.size() ==
          static_cast<std::size_t>(st.iterations_run));
  REQUIRE(st.residual_history.size() >= 10);
  // The iteration is averaged, so successive residuals cannot grow.
  for (std::size_t k = 1; k < st.residual_history.size(); ++k) {
    CHECK(st.residual_history[k] <=
          st.residual_history[k - 1] * (1 + 1e-12) + 1e-15);
  }
  CHECK(st.final_residual == doctest::Approx(st.residual_history.back()));
}

TEST_CASE("config validation") {
  auto P = simplex2();
  VectorXd w = VectorXd::Zero(2);
  DysConfig cfg;
  cfg.alpha = 0.0;
  CHECK_THROWS_AS(dylp::solve_fixed_point(P, w, cfg), dylp::ValidationError);
  cfg = DysConfig{};
  cfg.alpha = 2.0 / cfg.gamma;  // boundary of the averaged range is excluded
  CHECK_THROWS_AS(dylp::solve_fixed_point(P, w, cfg), dylp::ValidationError);
  cfg = DysConfig{};
  CHECK_THROWS_AS(dylp::solve_fixed_point(P, VectorXd::Zero(3), cfg),
                  dylp::DimensionMismatch);
  cfg.max_iter = 0;
  CHECK_THROWS_AS(dylp::solve_fixed_point(P, w, cfg), dylp::ValidationError);
}

TEST_CASE("non-finite cost surfaces as a numeric error") {
  auto P = simplex2();
  VectorXd w(2);
  w << std::numeric_limits<double>::quiet_NaN(), 0.0;
  CHECK_THROWS_AS(dylp::solve_fixed_point(P, w, tight(1.0, 1.0)),
                  dylp::NonFinite);
}

TEST_CASE("jacobian closed form at unit step-curvature product") {
  auto P = simplex2();
  DysConfig cfg = tight(1.0, 1.0);  // alpha * gamma = 1

  // All coordinates strictly positive: T is locally constant + identity
  // cancellation, the jacobian vanishes.
  VectorXd z_pos(2);
  z_pos << 0.5, 0.7;
  MatrixXd J = dylp::jacobian_T_z(P, cfg, z_pos);
  CHECK(J.cwiseAbs().maxCoeff() < 1e-14);
  CHECK(dylp::contraction_norm_at(P, cfg, z_pos) < 1e-7);

  // All coordinates negative: jacobian is the row-space projector V V'.
  VectorXd z_neg(2);
  z_neg << -0.5, -0.7;
  MatrixXd Jn = dylp::jacobian_T_z(P, cfg, z_neg);
  MatrixXd VVt = P.svd_v * P.svd_v.transpose();
  CHECK((Jn - VVt).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("contraction norm obeys the angle bound") {
  // One active coordinate on the 2-simplex: the null space span{(1,-1)}
  // meets the active axis span{e2} at cos tau = 1/sqrt(2), so the norm is
  // bounded by max{ sqrt(cos tau), |1 - alpha*gamma| }.
  auto P = simplex2();
  VectorXd z(2);
  z << 0.5, -0.3;
  const double bound_angle = std::sqrt(1.0 / std::sqrt(2.0));

  DysConfig cfg = tight(1.0, 1.0);
  double norm1 = dylp::contraction_norm_at(P, cfg, z);
  CHECK(norm1 == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
  CHECK(norm1 <= bound_angle + 1e-9);

  cfg = tight(0.5, 1.0);  // alpha*gamma = 0.5
  double norm2 = dylp::contraction_norm_at(P, cfg, z);
  CHECK(norm2 <= std::max(bound_angle, 0.5) + 1e-9);
}

TEST_CASE("jacobian matches finite differences at a smooth point") {
  dylp::Rng rng(14);
  VectorXd w;
  auto P = random_feasible(rng, 2, 6, &w);
  DysConfig cfg = tight(0.7, 0.9);
  VectorXd z(6);
  for (int j = 0; j < 6; ++j) {
    double mag = rng.uniform(0.05, 1.0);
    z(j) = rng.uniform01() < 0.5 ? -mag : mag;
  }
  MatrixXd J = dylp::jacobian_T_z(P, cfg, z);
  const double h = 1e-6;
  for (int j = 0; j < 6; ++j) {
    VectorXd zp = z, zm = z;
    zp(j) += h;
    zm(j) -= h;
    VectorXd col =
        (dylp::apply_T(P, w, cfg, zp) - dylp::apply_T(P, w, cfg, zm)) / (2 * h);
    CHECK((col - J.col(j)).cwiseAbs().maxCoeff() < 1e-6);
  }
}
