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

#include <limits>

#include <Eigen/Dense>

#include "dylp/errors.hpp"
#include "dylp/knapsack.hpp"
#include "dylp/rng.hpp"

using dylp::build_knapsack;
using dylp::KnapsackInstance;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

KnapsackInstance small3() {
  MatrixXd S(1, 3);
  S << 3, 4, 5;
  VectorXd c(1);
  c << 7;
  return build_knapsack(S, c);
}

// Feasible maximum value by checking every subset.
double brute_max(const KnapsackInstance& inst, const VectorXd& w) {
  const int l = static_cast<int>(inst.num_items());
  double best = 0.0;
  for (unsigned mask = 0; mask < (1u << l); ++mask) {
    VectorXd x = VectorXd::Zero(l);
    for (int i = 0; i < l; ++i) x(i) = (mask >> i) & 1u ? 1.0 : 0.0;
    if (((inst.sizes * x - inst.capacities).array() > 1e-12).any()) continue;
    best = std::max(best, w.dot(x));
  }
  return best;
}

}  // namespace

TEST_CASE("lifted system has the documented block structure") {
  MatrixXd S(2, 3);
  S << 1, 2, 3, 4, 5, 6;
  VectorXd c(2);
  c << 3, 10;
  auto inst = build_knapsack(S, c);
  CHECK(inst.num_items() == 3);
  CHECK(inst.num_constraints() == 2);
  CHECK(inst.lifted_dim() == 8);

  const auto& P = inst.polytope();
  REQUIRE(P.rows() == 5);  // k + l
  REQUIRE(P.cols() == 8);  // 2l + k
  CHECK(P.A.block(0, 0, 2, 3) == -S);
  CHECK(P.A.block(0, 3, 2, 2) == -MatrixXd::Identity(2, 2));
  CHECK(P.A.block(2, 0, 3, 3) == MatrixXd::Identity(3, 3));
  CHECK(P.A.block(2, 5, 3, 3) == MatrixXd::Identity(3, 3));
  CHECK(P.A.block(2, 3, 3, 2).cwiseAbs().sum() == 0.0);
  CHECK(P.b.head(2) == -c);
  CHECK(P.b.tail(3) == VectorXd::Ones(3));
}

TEST_CASE("build validation") {
  CHECK_THROWS_AS(build_knapsack(MatrixXd(0, 0), VectorXd(0)),
                  dylp::InvalidSize);
  MatrixXd S(1, 2);
  S << 1, 2;
  VectorXd c1(1);
  c1 << 0.0;  // capacity must be positive
  CHECK_THROWS_AS(build_knapsack(S, c1), dylp::ValidationError);
  c1 << 5.0;
  CHECK_THROWS_AS(build_knapsack(S, VectorXd::Ones(2)),
                  dylp::DimensionMismatch);
  S(0, 1) = -1.0;
  CHECK_THROWS_AS(build_knapsack(S, c1), dylp::NegativeWeight);
}

TEST_CASE("oracle solves a pinned instance") {
  auto inst = small3();
  VectorXd w(3);
  w << 10, 6, 4;
  VectorXd x = dylp::knapsack_oracle(inst, w);
  CHECK(x(0) == 1.0);
  CHECK(x(1) == 1.0);
  CHECK(x(2) == 0.0);
}

TEST_CASE("oracle value matches exhaustive search") {
  dylp::Rng rng(51);
  for (int trial = 0; trial < 25; ++trial) {
    const int l = 8 + trial % 5;
    const int k = 1 + trial % 2;
    MatrixXd S(k, l);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < l; ++j)
        S(i, j) = static_cast<double>(rng.uniform_int(1, 9));
    VectorXd caps = 0.45 * S.rowwise().sum();
    auto inst = build_knapsack(S, caps);
    VectorXd w(l);
    for (int j = 0; j < l; ++j) w(j) = rng.uniform(0.0, 5.0);
    VectorXd x = dylp::knapsack_oracle(inst, w);
    // Binary and feasible.
    CHECK(((x.array() == 0.0) || (x.array() == 1.0)).all());
    CHECK(((inst.sizes * x - caps).array() <= 1e-12).all());
    CHECK(w.dot(x) == doctest::Approx(brute_max(inst, w)).epsilon(1e-12));
  }
}

TEST_CASE("oracle validation") {
  auto inst = small3();
  VectorXd w(3);
  w << 1, -1, 1;
  CHECK_THROWS_AS(dylp::knapsack_oracle(inst, w), dylp::NegativeWeight);
  CHECK_THROWS_AS(dylp::knapsack_oracle(inst, VectorXd::Ones(2)),
                  dylp::DimensionMismatch);
  MatrixXd big = MatrixXd::Ones(1, 41);
  auto wide = build_knapsack(big, VectorXd::Ones(1) * 5);
  CHECK_THROWS_AS(dylp::knapsack_oracle(wide, VectorXd::Ones(41)),
                  dylp::InvalidSize);
}

TEST_CASE("embeddings are exact") {
  auto inst = small3();
  VectorXd w(3);
  w << 2, 3, 4;
  VectorXd lifted = dylp::knapsack_embed_cost(inst, w);
  REQUIRE(lifted.size() == 7);
  CHECK(lifted.head(3) == -w);
  CHECK(lifted.tail(4).cwiseAbs().sum() == 0.0);

  VectorXd x(3);
  x << 1, 1, 0;  // occupies the capacity exactly
  VectorXd sol = dylp::knapsack_embed_solution(inst, x);
  REQUIRE(sol.size() == 7);
  const auto& P = inst.polytope();
  CHECK((P.A * sol - P.b).cwiseAbs().maxCoeff() == 0.0);
  CHECK(sol(3) == 0.0);           // capacity slack 7 - 7
  CHECK(sol.tail(3) == (VectorXd::Ones(3) - x));
}

TEST_CASE("decode thresholds and repairs to feasibility") {
  auto inst = small3();
  VectorXd relaxed(3);
  relaxed << 0.9, 0.55, 0.2;
  VectorXd x = dylp::decode_knapsack(inst, relaxed);
  CHECK(x(0) == 1.0);
  CHECK(x(1) == 1.0);
  CHECK(x(2) == 0.0);

  relaxed << 0.9, 0.8, 0.7;  // all selected, load 12 > 7: drop lowest scores
  x = dylp::decode_knapsack(inst, relaxed);
  CHECK(x(0) == 1.0);
  CHECK(x(1) == 1.0);
  CHECK(x(2) == 0.0);

  // Lifted-length input decodes from its head block; {0, 1} fits exactly.
  VectorXd lifted = VectorXd::Zero(7);
  lifted.head(3) << 0.9, 0.6, 0.1;
  x = dylp::decode_knapsack(inst, lifted);
  CHECK(x(0) == 1.0);
  CHECK(x(1) == 1.0);
  CHECK(x(2) == 0.0);
}

TEST_CASE("decode repair drops until every capacity holds") {
  auto inst = small3();
  VectorXd lifted = VectorXd::Zero(7);
  lifted.head(3) << 0.9, 0.1, 0.8;
  // Selection {0, 2} occupies 3 + 5 = 8 > 7; item 2 is the lower relaxed
  // score among the selected, so it is dropped first.
  VectorXd x = dylp::decode_knapsack(inst, lifted);
  CHECK(x(0) == 1.0);
  CHECK(x(1) == 0.0);
  CHECK(x(2) == 0.0);
  CHECK(((inst.sizes * x - inst.capacities).array() <= 0.0).all());
}
