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

// Exception hierarchy shared across the library. Two families matter for the
// CLI exit code: ValidationError (bad input or config, exit 1) and
// NumericError (a computation broke down at runtime, exit 2).

#ifndef DYLP_ERRORS_HPP_
#define DYLP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dylp {

struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Input shapes disagree (vector length vs. matrix dimension, etc.).
struct DimensionMismatch : ValidationError {
  explicit DimensionMismatch(const std::string& msg) : ValidationError(msg) {}
};

// A size or count parameter is out of its documented range.
struct InvalidSize : ValidationError {
  explicit InvalidSize(const std::string& msg) : ValidationError(msg) {}
};

// A weight that must be nonnegative is negative.
struct NegativeWeight : ValidationError {
  explicit NegativeWeight(const std::string& msg) : ValidationError(msg) {}
};

// A config or data file failed to parse; message names the offending field.
struct ParseError : ValidationError {
  explicit ParseError(const std::string& msg) : ValidationError(msg) {}
};

// Constraint matrix does not have full row rank at the working tolerance.
struct RankDeficient : NumericError {
  explicit RankDeficient(const std::string& msg) : NumericError(msg) {}
};

// An iterate or gradient picked up a NaN or infinity.
struct NonFinite : NumericError {
  explicit NonFinite(const std::string& msg) : NumericError(msg) {}
};

// A normalization denominator is zero (e.g. total optimal cost).
struct ZeroDenominator : NumericError {
  explicit ZeroDenominator(const std::string& msg) : NumericError(msg) {}
};

}  // namespace dylp

#endif  // DYLP_ERRORS_HPP_
