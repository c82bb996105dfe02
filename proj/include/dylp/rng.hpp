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

// Deterministic random number generation. mt19937_64 is bit-stable across
// platforms, but the standard <random> distributions are not, so the
// uniform / gaussian / bounded-int transforms are implemented here directly.
// Every generated dataset must be byte-identical for a given seed.

#ifndef DYLP_RNG_HPP_
#define DYLP_RNG_HPP_

#include <cstdint>
#include <random>

namespace dylp {

// splitmix64 finalizer; whitens correlated seeds (e.g. seed ^ index).
std::uint64_t mix64(std::uint64_t x);

// Derived stream seed for sample `index` of a run seeded with `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ index);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(mix64(seed)) {}

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform01();

  // Uniform on [lo, hi).
  double uniform(double lo, double hi);

  // Standard normal via Box-Muller (two uniforms per call, no cached spare).
  double gaussian();

  // Uniform integer in {lo, ..., hi} inclusive, by rejection.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // Raw 64-bit draw.
  std::uint64_t next() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace dylp

#endif  // DYLP_RNG_HPP_
