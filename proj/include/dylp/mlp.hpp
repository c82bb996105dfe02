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

// Small fully connected predictor mapping a context vector to a cost vector.
// Leaky-ReLU hidden activations, linear output, optional inverted dropout on
// the output during training. Initialization, forward, and backward are all
// deterministic given the seeds.

#ifndef DYLP_MLP_HPP_
#define DYLP_MLP_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dylp/rng.hpp"

namespace dylp {

struct MlpConfig {
  std::vector<int> layer_dims;  // {input, hidden..., output}, each >= 1
  double leaky_slope = 0.01;    // hidden activation slope for negative inputs
  double dropout_rate = 0.0;    // output dropout probability in [0, 1)
  std::uint64_t seed = 0;       // initialization stream
};

struct MlpParams {
  MlpConfig config;
  std::vector<Eigen::MatrixXd> weights;  // layer i: dims[i+1] x dims[i]
  std::vector<Eigen::VectorXd> biases;   // layer i: dims[i+1]

  std::size_t param_count() const;
};

// Per-parameter gradients (same shapes as MlpParams).
struct MlpGrad {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
};

// Intermediate values needed by backward. `inputs[i]` is the input to layer
// i; `preacts[i]` is the pre-activation of hidden layer i.
struct MlpCache {
  std::vector<Eigen::VectorXd> inputs;
  std::vector<Eigen::VectorXd> preacts;
  Eigen::VectorXd dropout_scale;  // per-output multiplier, empty if unused
};

// Glorot-uniform weights (limit sqrt(6/(fan_in+fan_out))), zero biases,
// filled row-major from an Rng seeded with config.seed.
MlpParams init_params(const MlpConfig& config);

// Forward pass. In training mode with dropout_rate > 0 a dropout pattern is
// drawn from `dropout_rng` (required in that case) and recorded in the cache
// with inverted scaling 1/(1-p). `cache` may be null when no backward pass
// will follow.
Eigen::VectorXd forward(const MlpParams& params, const Eigen::VectorXd& input,
                        bool train_mode = false, Rng* dropout_rng = nullptr,
                        MlpCache* cache = nullptr);

// Backward pass from the gradient of a scalar loss with respect to the
// output. Uses the cache of the matching forward call.
MlpGrad backward(const MlpParams& params, const MlpCache& cache,
                 const Eigen::VectorXd& grad_output);

MlpGrad zero_grad_like(const MlpParams& params);

// Plain-text checkpoint round trip; values are written with full precision.
void save_checkpoint(const MlpParams& params, const std::string& path);
MlpParams load_checkpoint(const std::string& path);

}  // namespace dylp

#endif  // DYLP_MLP_HPP_
