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

// End-to-end training of the context-to-cost predictor through the relaxed
// layer, and regret-based evaluation with the exact decoders.
//
// Per sample: predict costs from the context, solve the regularized LP,
// measure the squared distance between the relaxed solution and the label,
// and push the loss gradient back through the layer's pseudo-gradient into
// the network. Adam with decoupled weight decay, plateau learning-rate
// schedule, model selection by validation normalized regret.

#ifndef DYLP_TRAIN_HPP_
#define DYLP_TRAIN_HPP_

#include <cstdint>
#include <vector>

#include "dylp/datagen.hpp"
#include "dylp/dys.hpp"
#include "dylp/mlp.hpp"
#include "dylp/problem.hpp"

namespace dylp {

struct TrainConfig {
  int epochs = 100;
  int batch_size = 32;
  double learning_rate = 1e-3;
  double weight_decay = 5e-4;      // decoupled, applied to every tensor
  double plateau_factor = 0.1;     // lr multiplier on validation plateau
  int plateau_patience = 10;       // epochs without improvement before decay
  double validation_fraction = 0.1;
  std::uint64_t seed = 7;          // batch shuffling and dropout streams
  int threads = 1;
  double time_budget_seconds = 0.0;  // 0: no budget
  DysConfig dys;                     // layer solve used in both passes
};

struct EpochStats {
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_normalized_regret = 0.0;
  double learning_rate = 0.0;
  double seconds = 0.0;
};

struct TrainReport {
  std::vector<EpochStats> history;
  int best_epoch = -1;  // epoch index attaining min validation regret
  double best_val_normalized_regret = 0.0;
  MlpParams best_params;
  MlpParams final_params;
  bool stopped_on_time_budget = false;
};

struct EvalReport {
  double normalized_regret = 0.0;
  double mean_l2 = 0.0;
  double decode_match_fraction = 0.0;  // decoded solution equals the label
  Eigen::Index n_samples = 0;
};

// Squared Euclidean distance; the training loss between the relaxed solve
// and the combinatorial label.
double l2_loss(const Eigen::VectorXd& x_pred, const Eigen::VectorXd& x_star);

// Sum of per-sample regrets divided by the summed optimal objective values.
// Throws ZeroDenominator when the latter vanishes.
double normalized_regret(const ProblemInstance& problem, const Dataset& data,
                         const std::vector<Eigen::VectorXd>& decoded);

TrainReport train(ProblemInstance& problem, const Dataset& data,
                  const MlpParams& init, const TrainConfig& config);

EvalReport evaluate(ProblemInstance& problem, const Dataset& data,
                    const MlpParams& params, const DysConfig& dys,
                    int threads = 1);

}  // namespace dylp

#endif  // DYLP_TRAIN_HPP_
