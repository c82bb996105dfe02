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

#include "dylp/knapsack.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>

#include "dylp/errors.hpp"

namespace dylp {

const StandardFormPolytope& KnapsackInstance::polytope() const {
  if (!polytope_ptr) {
    throw ValidationError("knapsack polytope missing; use build_knapsack");
  }
  return *polytope_ptr;
}

KnapsackInstance build_knapsack(const Eigen::MatrixXd& sizes,
                                const Eigen::VectorXd& capacities) {
  const Eigen::Index k = sizes.rows();
  const Eigen::Index l = sizes.cols();
  if (k < 1 || l < 1) {
    throw InvalidSize("build_knapsack: need at least one item and constraint");
  }
  if (capacities.size() != k) {
    throw DimensionMismatch("build_knapsack: capacities do not match sizes");
  }
  if ((sizes.array() < 0.0).any()) {
    throw NegativeWeight("build_knapsack: item sizes must be nonnegative");
  }
  if ((capacities.array() <= 0.0).any()) {
    throw ValidationError("build_knapsack: capacities must be positive");
  }

  KnapsackInstance inst;
  inst.sizes = sizes;
  inst.capacities = capacities;

  const Eigen::Index n = 2 * l + k;
  const Eigen::Index m = k + l;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, n);
  A.block(0, 0, k, l) = -sizes;
  A.block(0, l, k, k) = -Eigen::MatrixXd::Identity(k, k);
  A.block(k, 0, l, l) = Eigen::MatrixXd::Identity(l, l);
  A.block(k, l + k, l, l) = Eigen::MatrixXd::Identity(l, l);
  Eigen::VectorXd b(m);
  b.head(k) = -capacities;
  b.tail(l) = Eigen::VectorXd::Ones(l);
  inst.polytope_ptr =
      std::make_shared<const StandardFormPolytope>(build_polytope(A, b));
  return inst;
}

Eigen::VectorXd knapsack_oracle(const KnapsackInstance& inst,
                                const Eigen::VectorXd& w) {
  const Eigen::Index l = inst.num_items();
  const Eigen::Index k = inst.num_constraints();
  if (w.size() != l) {
    throw DimensionMismatch("knapsack_oracle: w has " +
                            std::to_string(w.size()) + " entries, expected " +
                            std::to_string(l));
  }
  if (l > 40) {
    throw InvalidSize("knapsack_oracle: exact search capped at 40 items");
  }
  for (Eigen::Index i = 0; i < l; ++i) {
    if (w(i) < 0.0) {
      throw NegativeWeight("knapsack_oracle: negative value at item " +
                           std::to_string(i));
    }
  }

  // Items visited in descending value so good incumbents appear early and
  // the suffix-sum bound prunes hard.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(l));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return w(a) > w(b); });
  std::vector<double> suffix(static_cast<std::size_t>(l) + 1, 0.0);
  for (Eigen::Index i = l; i-- > 0;) {
    suffix[static_cast<std::size_t>(i)] =
        suffix[static_cast<std::size_t>(i) + 1] + w(order[static_cast<std::size_t>(i)]);
  }

  double best_value = -1.0;
  std::uint64_t best_mask = 0;
  std::uint64_t cur_mask = 0;
  Eigen::VectorXd remaining = inst.capacities;

  // Iterative DFS would obscure the include/exclude symmetry; recursion depth
  // is at most 40.
  auto dfs = [&](auto&& self, Eigen::Index depth, double value) -> void {
    if (value + suffix[static_cast<std::size_t>(depth)] <= best_value) return;
    if (depth == l) {
      if (value > best_value) {
        best_value = value;
        best_mask = cur_mask;
      }
      return;
    }
    const Eigen::Index item = order[static_cast<std::size_t>(depth)];
    bool fits = true;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (inst.sizes(j, item) > remaining(j) + 1e-12) {
        fits = false;
        break;
      }
    }
    if (fits) {
      remaining -= inst.sizes.col(item);
      cur_mask |= (1ULL << item);
      self(self, depth + 1, value + w(item));
      cur_mask &= ~(1ULL << item);
      remaining += inst.sizes.col(item);
    }
    self(self, depth + 1, value);
  };
  dfs(dfs, 0, 0.0);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(l);
  for (Eigen::Index i = 0; i < l; ++i) {
    if (best_mask & (1ULL << i)) x(i) = 1.0;
  }
  return x;
}

Eigen::VectorXd decode_knapsack(const KnapsackInstance& inst,
                                const Eigen::VectorXd& x_relaxed) {
  const Eigen::Index l = inst.num_items();
  if (x_relaxed.size() != l && x_relaxed.size() != inst.lifted_dim()) {
    throw DimensionMismatch("decode_knapsack: expected length " +
                            std::to_string(l) + " or " +
                            std::to_string(inst.lifted_dim()));
  }
  const Eigen::VectorXd head = x_relaxed.head(l);
  Eigen::VectorXd x = (head.array() > 0.5).cast<double>();

  Eigen::VectorXd load = inst.sizes * x;
  while ((load.array() > inst.capacities.array() + 1e-12).any()) {
    // Drop the selected item with the smallest relaxed score.
    Eigen::Index victim = -1;
    double low = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < l; ++i) {
      if (x(i) > 0.5 && head(i) < low) {
        low = head(i);
        victim = i;
      }
    }
    x(victim) = 0.0;
    load -= inst.sizes.col(victim);
  }
  return x;
}

Eigen::VectorXd knapsack_embed_cost(const KnapsackInstance& inst,
                                    const Eigen::VectorXd& w) {
  const Eigen::Index l = inst.num_items();
  if (w.size() != l) {
    throw DimensionMismatch("knapsack_embed_cost: w has wrong size");
  }
  Eigen::VectorXd lifted = Eigen::VectorXd::Zero(inst.lifted_dim());
  lifted.head(l) = -w;
  return lifted;
}

Eigen::VectorXd knapsack_embed_solution(const KnapsackInstance& inst,
                                        const Eigen::VectorXd& x) {
  const Eigen::Index l = inst.num_items();
  const Eigen::Index k = inst.num_constraints();
  if (x.size() != l) {
    throw DimensionMismatch("knapsack_embed_solution: x has wrong size");
  }
  Eigen::VectorXd lifted(inst.lifted_dim());
  lifted.head(l) = x;
  lifted.segment(l, k) = inst.capacities - inst.sizes * x;
  lifted.tail(l) = Eigen::VectorXd::Ones(l) - x;
  return lifted;
}

}  // namespace dylp
