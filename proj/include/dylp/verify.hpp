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

// Property suites cross-checking the layer against independent references:
// the enumeration oracle, finite differences, and the contraction/descent
// guarantees. The CLI runs them at two scales; the acceptance tests run them
// at full scale. All tolerances are pinned inside the implementations.

#ifndef DYLP_VERIFY_HPP_
#define DYLP_VERIFY_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace dylp {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Tight solves match the active-set enumeration oracle within 1e-4 in the
// max norm on every instance (n <= 12, m <= 5, gamma in {0.1, 1}).
CheckResult check_qp_equivalence(int n_instances = 50,
                                 std::uint64_t seed = 101);

// k * ||z_{k+1} - z_k||^2 at k in {100, 1000} is at most 10x its value at
// k = 10 on every instance: the squared residuals decay like O(1/k).
CheckResult check_residual_decay(int n_instances = 20,
                                 std::uint64_t seed = 202);

// jacobian_T_z agrees with central finite differences of apply_T to 1e-6 at
// points with every coordinate at least 1e-3 away from zero.
CheckResult check_jacobian_fd(int n_points = 100, std::uint64_t seed = 303);

// At fixed points passing the constraint qualification, the Jacobian's
// spectral norm stays below 1 - 1e-6 (alpha*gamma sampled in [0.05, 1.95]).
CheckResult check_contraction(int n_instances = 50, std::uint64_t seed = 404);

// The backward pseudo-gradient has positive inner product with the central
// finite-difference gradient in at least 95% of qualifying random pipelines.
CheckResult check_descent_alignment(int n_trials = 200,
                                    std::uint64_t seed = 505);

// On a fixed 5x5 grid, the relaxed solution's max-norm distance to the exact
// shortest path is nonincreasing over gamma in {1e-1..1e-4} and < 0.05 at
// the smallest gamma.
CheckResult check_relaxation_path(int n_costs = 10, std::uint64_t seed = 606);

enum class VerifyLevel { kFast, kFull };

// kFast: reduced instance counts, aimed at under a minute.
// kFull: the counts above plus the relaxation path.
std::vector<CheckResult> run_property_suite(VerifyLevel level);

}  // namespace dylp

#endif  // DYLP_VERIFY_HPP_
