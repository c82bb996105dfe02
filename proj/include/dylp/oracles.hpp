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

// Exhaustive reference solvers. These take a completely different route than
// the splitting iteration (KKT systems over enumerated active sets), so they
// serve as independent ground truth for the property suites and unit tests.
// All of them are exponential in n and meant for small diagnostic instances.

#ifndef DYLP_ORACLES_HPP_
#define DYLP_ORACLES_HPP_

#include <vector>

#include <Eigen/Dense>

namespace dylp {

// Exact minimizer of w'x + (gamma/2)||x||^2 over {Ax = b, x >= 0}, found by
// enumerating every subset of coordinates pinned to zero and solving the
// equality-constrained KKT system on the free ones. The strictly convex
// objective makes the feasible candidate with the smallest objective the
// global optimum. Intended for n <= ~16.
Eigen::VectorXd qp_enumeration_oracle(const Eigen::MatrixXd& A,
                                      const Eigen::VectorXd& b,
                                      const Eigen::VectorXd& w, double gamma,
                                      double feas_tol = 1e-9);

// All vertices (basic feasible solutions) of {Ax = b, x >= 0}: every m-column
// subset with an invertible basis whose basic solution is nonnegative.
std::vector<Eigen::VectorXd> enumerate_vertices(const Eigen::MatrixXd& A,
                                                const Eigen::VectorXd& b,
                                                double feas_tol = 1e-9);

}  // namespace dylp

#endif  // DYLP_ORACLES_HPP_
