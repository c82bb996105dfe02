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

#include <Eigen/Dense>

#include "dylp/dys.hpp"
#include "dylp/jfb.hpp"
#include "dylp/polytope.hpp"
#include "dylp/rng.hpp"

using dylp::DysConfig;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

dylp::StandardFormPolytope simplex2() {
  MatrixXd A(1, 2);
  A << 1, 1;
  return dylp::build_polytope(A, VectorXd::Ones(1));
}

DysConfig cfg_ag(double alpha, double gamma) {
  DysConfig c;
  c.alpha = alpha;
  c.gamma = gamma;
  c.max_iter = 200000;
  c.tol = 1e-12;
  return c;
}

VectorXd vec2(double a, double b) {
  VectorXd v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("zero loss gradient gives a zero pseudo-gradient") {
  auto P = simplex2();
  CHECK(dylp::grad_wrt_cost(P, cfg_ag(1, 1), vec2(0.5, 0.5), VectorXd::Zero(2))
            .norm() == 0.0);
}

TEST_CASE("pseudo-gradient centers the loss gradient in the null space") {
  auto P = simplex2();
  // Both coordinates positive: mask passes everything, so the result is
  // -alpha times the null-space component of the loss gradient.
  VectorXd p = dylp::grad_wrt_cost(P, cfg_ag(1, 1), vec2(0.5, 0.5),
                                   vec2(1.0, 0.0));
  CHECK(p(0) == doctest::Approx(-0.5));
  CHECK(p(1) == doctest::Approx(0.5));

  // Negative coordinate masked out before the projection.
  VectorXd q = dylp::grad_wrt_cost(P, cfg_ag(1, 1), vec2(0.5, -0.5),
                                   vec2(1.0, 1.0));
  CHECK(q(0) == doctest::Approx(-0.5));
  CHECK(q(1) == doctest::Approx(0.5));
}

TEST_CASE("pseudo-gradient is linear in the loss gradient and the step") {
  auto P = simplex2();
  VectorXd z = vec2(0.8, -0.1);
  VectorXd g = vec2(0.3, -0.7);
  VectorXd p1 = dylp::grad_wrt_cost(P, cfg_ag(0.5, 1), z, g);
  VectorXd p2 = dylp::grad_wrt_cost(P, cfg_ag(0.5, 1), z, 2 * g);
  CHECK((p2 - 2 * p1).cwiseAbs().maxCoeff() < 1e-14);
  VectorXd p3 = dylp::grad_wrt_cost(P, cfg_ag(1.0, 1), z, g);
  CHECK((p3 - 2 * p1).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("pseudo-gradient lies in the constraint null space") {
  dylp::Rng rng(21);
  MatrixXd A(3, 8);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 8; ++j) A(i, j) = rng.gaussian();
  VectorXd x0(8);
  for (int j = 0; j < 8; ++j) x0(j) = rng.uniform(0.2, 1.2);
  auto P = dylp::build_polytope(A, A * x0);
  for (int trial = 0; trial < 5; ++trial) {
    VectorXd z(8), g(8);
    for (int j = 0; j < 8; ++j) {
      z(j) = rng.gaussian();
      g(j) = rng.gaussian();
    }
    VectorXd p = dylp::grad_wrt_cost(P, cfg_ag(0.05, 5e-4), z, g);
    CHECK((A * p).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("l2 loss gradient") {
  VectorXd g = dylp::loss_grad_x_l2(vec2(1, 2), vec2(0, 0));
  CHECK(g(0) == 2.0);
  CHECK(g(1) == 4.0);
}

TEST_CASE("interior solution: pseudo-gradient equals the exact gradient") {
  // With every coordinate strictly positive the solution map is
  // x(w) = Paff(-w / gamma), whose derivative is -PH1 / gamma. For the l2
  // loss the exact gradient is -(1/gamma) PH1(2 (x - x*)); the JFB direction
  // is -alpha PH1(2 (x - x*)). At alpha = 1/gamma they coincide, and central
  // finite differences of the solve agree with both.
  auto P = simplex2();
  const double gamma = 1.0;
  DysConfig cfg = cfg_ag(1.0 / gamma, gamma);
  VectorXd w = vec2(0.1, 0.0);
  VectorXd x_star = vec2(0.0, 1.0);

  auto st = dylp::solve_fixed_point(P, w, cfg);
  REQUIRE(st.x.minCoeff() > 0.1);  // interior, the closed form applies
  CHECK(st.x(0) == doctest::Approx(0.45).epsilon(1e-8));
  CHECK(st.x(1) == doctest::Approx(0.55).epsilon(1e-8));

  VectorXd exact = vec2(-0.9, 0.9);
  VectorXd p = dylp::grad_wrt_cost(P, cfg, st.z,
                                   dylp::loss_grad_x_l2(st.x, x_star));
  CHECK((p - exact).cwiseAbs().maxCoeff() < 1e-7);

  VectorXd fd = dylp::finite_diff_grad_wrt_cost(P, w, x_star, cfg);
  CHECK((fd - exact).cwiseAbs().maxCoeff() < 1e-5);
}
