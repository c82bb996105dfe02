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

// Synthetic contextual datasets: 5-dimensional contexts mapped to edge costs
// or item values, labeled with the exact combinatorial optimum. Generation is
// deterministic per seed, with per-sample derived streams (seed xor index),
// and files round-trip byte-exactly.

#ifndef DYLP_DATAGEN_HPP_
#define DYLP_DATAGEN_HPP_

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "dylp/problem.hpp"
#include "dylp/rng.hpp"

namespace dylp {

inline constexpr int kContextDim = 5;

enum class DatasetKind { kGridPolynomial, kGridLinear, kKnapsackPolynomial };

std::string kind_to_string(DatasetKind kind);
DatasetKind kind_from_string(const std::string& s);

struct DatagenConfig {
  DatasetKind kind = DatasetKind::kGridPolynomial;
  int k = 5;                   // grid side (grid kinds)
  int num_items = 20;          // knapsack
  int num_constraints = 2;     // knapsack
  int n_samples = 1000;
  std::uint64_t seed = 42;
  int deg = 4;                 // polynomial degree of the cost map
  double noise_width = 0.5;    // multiplicative noise half-width, in [0, 1]
  // Knapsack instance sampling: integer sizes in [size_lo, size_hi] scaled to
  // unit mean; capacity = capacity_ratio x row total.
  int size_lo = 3;
  int size_hi = 8;
  double capacity_ratio = 0.4;
};

struct Dataset {
  DatagenConfig config;
  Eigen::MatrixXd contexts;   // N x 5
  Eigen::MatrixXd costs;      // N x native_dim
  Eigen::MatrixXd solutions;  // N x native_dim, 0/1
  // Knapsack instance data, stored so files are self-contained.
  Eigen::MatrixXd knap_sizes;
  Eigen::VectorXd knap_caps;

  Eigen::Index size() const { return contexts.rows(); }
};

// Polynomial cost map: w_i = [(1/3.5)^deg ((Bd)_i / sqrt(5) + 3)^deg + 1] e_i
// with e_i drawn uniformly from [1 - noise_width, 1 + noise_width] and the
// result clamped at zero. B has +-1 entries.
Eigen::VectorXd gen_costs_polynomial(const Eigen::VectorXd& d,
                                     const Eigen::MatrixXd& B, int deg,
                                     double noise_width, Rng& rng);

// Nonnegative linear cost map w = W d for W with entries in [0, 1].
Eigen::VectorXd gen_costs_linear(const Eigen::VectorXd& d,
                                 const Eigen::MatrixXd& W);

Dataset gen_dataset(const DatagenConfig& config);

// Rebuilds the problem a dataset was generated for (knapsack instances come
// from the stored sizes and capacities; grids from k).
ProblemInstance make_problem(const Dataset& data);

// Delimited text round trip; writing the same dataset twice produces
// identical bytes. Format documented in the README.
void write_dataset(const Dataset& data, const std::string& path);
Dataset read_dataset(const std::string& path);

// Plain matrix files: "rows cols" header line then one row per line. Used to
// export a dataset as a (contexts, costs-and-solutions) pair.
void write_matrix(const Eigen::MatrixXd& mat, const std::string& path);
Eigen::MatrixXd read_matrix(const std::string& path);

}  // namespace dylp

#endif  // DYLP_DATAGEN_HPP_
