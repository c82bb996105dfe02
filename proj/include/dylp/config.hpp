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

// Experiment configuration: one JSON file describing the problem, dataset,
// model, layer solver, and training run. Unknown keys and out-of-range
// values raise ParseError naming the offending field.

#ifndef DYLP_CONFIG_HPP_
#define DYLP_CONFIG_HPP_

#include <string>
#include <vector>

#include "dylp/datagen.hpp"
#include "dylp/mlp.hpp"
#include "dylp/train.hpp"

namespace dylp {

struct ExperimentConfig {
  DatagenConfig datagen;             // problem + dataset sections
  std::string dataset_path = "dataset.txt";
  std::vector<int> hidden_dims{10};  // model section
  double leaky_slope = 0.01;
  double dropout_rate = 0.0;
  std::uint64_t model_seed = 1;
  DysConfig dys;
  TrainConfig train;                 // train.dys is filled from `dys`
  std::string output_dir = ".";
};

ExperimentConfig load_experiment_config(const std::string& path);

// Model layout for a problem with `native_dim` outputs: context input,
// configured hidden layers, cost output.
MlpConfig make_model_config(const ExperimentConfig& config,
                            Eigen::Index native_dim);

}  // namespace dylp

#endif  // DYLP_CONFIG_HPP_
