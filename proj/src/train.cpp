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

#include "dylp/train.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "dylp/errors.hpp"
#include "dylp/jfb.hpp"
#include "dylp/parallel.hpp"

namespace dylp {

namespace {

constexpr std::uint64_t kShuffleTag = 1;
constexpr std::uint64_t kDropoutTag = 2;

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t tag,
                          std::uint64_t a, std::uint64_t b) {
  return derive_seed(derive_seed(derive_seed(seed, tag), a), b);
}

struct AdamState {
  std::vector<Eigen::MatrixXd> m_w, v_w;
  std::vector<Eigen::VectorXd> m_b, v_b;
  long step = 0;

  explicit AdamState(const MlpParams& p) {
    for (std::size_t i = 0; i < p.weights.size(); ++i) {
      m_w.push_back(Eigen::MatrixXd::Zero(p.weights[i].rows(),
                                          p.weights[i].cols()));
      v_w.push_back(Eigen::MatrixXd::Zero(p.weights[i].rows(),
                                          p.weights[i].cols()));
      m_b.push_back(Eigen::VectorXd::Zero(p.biases[i].size()));
      v_b.push_back(Eigen::VectorXd::Zero(p.biases[i].size()));
    }
  }
};

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

// One optimizer step: Adam moments on the averaged gradient plus decoupled
// weight decay evaluated at the pre-update parameters.
void adam_step(MlpParams& p, const MlpGrad& g, AdamState& s, double lr,
               double weight_decay) {
  s.step += 1;
  const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(s.step));
  const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(s.step));
  for (std::size_t i = 0; i < p.weights.size(); ++i) {
    s.m_w[i] = kBeta1 * s.m_w[i] + (1.0 - kBeta1) * g.weights[i];
    s.v_w[i] = kBeta2 * s.v_w[i].array().matrix() +
               (1.0 - kBeta2) * g.weights[i].array().square().matrix();
    p.weights[i] *= (1.0 - lr * weight_decay);
    p.weights[i].array() -= lr * (s.m_w[i].array() / bc1) /
                            ((s.v_w[i].array() / bc2).sqrt() + kAdamEps);

    s.m_b[i] = kBeta1 * s.m_b[i] + (1.0 - kBeta1) * g.biases[i];
    s.v_b[i] = kBeta2 * s.v_b[i].array().matrix() +
               (1.0 - kBeta2) * g.biases[i].array().square().matrix();
    p.biases[i] *= (1.0 - lr * weight_decay);
    p.biases[i].array() -= lr * (s.m_b[i].array() / bc1) /
                           ((s.v_b[i].array() / bc2).sqrt() + kAdamEps);
  }
}

void accumulate(MlpGrad& into, const MlpGrad& from, double scale) {
  for (std::size_t i = 0; i < into.weights.size(); ++i) {
    into.weights[i] += scale * from.weights[i];
    into.biases[i] += scale * from.biases[i];
  }
}

}  // namespace

double l2_loss(const Eigen::VectorXd& x_pred, const Eigen::VectorXd& x_star) {
  if (x_pred.size() != x_star.size()) {
    throw DimensionMismatch("l2_loss: sizes disagree");
  }
  return (x_pred - x_star).squaredNorm();
}

double normalized_regret(const ProblemInstance& problem, const Dataset& data,
                         const std::vector<Eigen::VectorXd>& decoded) {
  if (static_cast<Eigen::Index>(decoded.size()) != data.size()) {
    throw DimensionMismatch("normalized_regret: one decoded vector per row");
  }
  double regret_sum = 0.0;
  double value_sum = 0.0;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const Eigen::VectorXd w = data.costs.row(i).transpose();
    const Eigen::VectorXd x_star = data.solutions.row(i).transpose();
    regret_sum += problem.regret(w, decoded[static_cast<std::size_t>(i)],
                                 x_star);
    value_sum += problem.optimal_value(w, x_star);
  }
  if (value_sum == 0.0) {
    throw ZeroDenominator("normalized_regret: optimal objectives sum to zero");
  }
  return regret_sum / value_sum;
}

TrainReport train(ProblemInstance& problem, const Dataset& data,
                  const MlpParams& init, const TrainConfig& config) {
  if (config.epochs < 1) throw ValidationError("train: epochs must be >= 1");
  if (config.batch_size < 1) {
    throw ValidationError("train: batch_size must be >= 1");
  }
  if (!(config.learning_rate > 0.0)) {
    throw ValidationError("train: learning_rate must be positive");
  }
  if (!(config.weight_decay >= 0.0)) {
    throw ValidationError("train: weight_decay must be >= 0");
  }
  if (!(config.validation_fraction >= 0.0) ||
      config.validation_fraction >= 1.0) {
    throw ValidationError("train: validation_fraction must lie in [0, 1)");
  }
  if (init.config.layer_dims.front() != kContextDim ||
      init.config.layer_dims.back() != problem.native_dim()) {
    throw DimensionMismatch("train: model dims do not match the problem");
  }
  if (data.costs.cols() != problem.native_dim()) {
    throw DimensionMismatch("train: dataset does not match the problem");
  }

  problem.ensure_factorized();
  const StandardFormPolytope& P = problem.polytope();
  const Eigen::Index N = data.size();
  const Eigen::Index nat = problem.native_dim();
  const Eigen::Index lift = problem.lifted_dim();

  // Deterministic tail split. With a zero fraction (tiny diagnostic runs)
  // the training set doubles as the validation set.
  Eigen::Index n_val =
      static_cast<Eigen::Index>(std::llround(config.validation_fraction *
                                             static_cast<double>(N)));
  if (config.validation_fraction > 0.0 && n_val == 0) n_val = 1;
  if (n_val >= N) n_val = N - 1;
  const Eigen::Index n_train = N - n_val;
  const Eigen::Index val_begin = n_train;
  const Eigen::Index n_val_eff = n_val > 0 ? n_val : N;
  const Eigen::Index val_begin_eff = n_val > 0 ? val_begin : 0;

  TrainReport report;
  MlpParams params = init;
  AdamState adam(params);
  double lr = config.learning_rate;

  double best_plateau_loss = std::numeric_limits<double>::infinity();
  int plateau_wait = 0;
  report.best_val_normalized_regret = std::numeric_limits<double>::infinity();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n_train));
  std::iota(order.begin(), order.end(), Eigen::Index(0));

  const auto t_start = std::chrono::steady_clock::now();
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto t_epoch = std::chrono::steady_clock::now();

    // Fisher-Yates on a per-epoch stream.
    Rng shuffle_rng(stream_seed(config.seed, kShuffleTag,
                                static_cast<std::uint64_t>(epoch), 0));
    for (Eigen::Index i = n_train - 1; i > 0; --i) {
      const Eigen::Index j =
          static_cast<Eigen::Index>(shuffle_rng.uniform_int(0, i));
      std::swap(order[static_cast<std::size_t>(i)],
                order[static_cast<std::size_t>(j)]);
    }

    double loss_sum = 0.0;
    for (Eigen::Index start = 0; start < n_train;
         start += config.batch_size) {
      const Eigen::Index count =
          std::min<Eigen::Index>(config.batch_size, n_train - start);
      std::vector<double> losses(static_cast<std::size_t>(count));
      std::vector<MlpGrad> grads(static_cast<std::size_t>(count));

      parallel_for(count, config.threads, [&](std::int64_t slot) {
        const Eigen::Index idx =
            order[static_cast<std::size_t>(start + slot)];
        Rng dropout_rng(stream_seed(config.seed, kDropoutTag,
                                    static_cast<std::uint64_t>(epoch),
                                    static_cast<std::uint64_t>(idx)));
        MlpCache cache;
        const Eigen::VectorXd w_pred =
            forward(params, data.contexts.row(idx).transpose(), true,
                    &dropout_rng, &cache);
        const DysState state =
            solve_fixed_point(P, problem.embed_cost(w_pred), config.dys);
        const Eigen::VectorXd x_head = state.x.head(nat);
        const Eigen::VectorXd x_star = data.solutions.row(idx).transpose();
        losses[static_cast<std::size_t>(slot)] = l2_loss(x_head, x_star);

        Eigen::VectorXd lg_lift = Eigen::VectorXd::Zero(lift);
        lg_lift.head(nat) = loss_grad_x_l2(x_head, x_star);
        const Eigen::VectorXd g_cost = problem.chain_cost_grad(
            grad_wrt_cost(P, config.dys, state.z, lg_lift));
        grads[static_cast<std::size_t>(slot)] =
            backward(params, cache, g_cost);
      });

      MlpGrad batch_grad = zero_grad_like(params);
      double batch_loss = 0.0;
      for (Eigen::Index s = 0; s < count; ++s) {
        batch_loss += losses[static_cast<std::size_t>(s)];
        accumulate(batch_grad, grads[static_cast<std::size_t>(s)],
                   1.0 / static_cast<double>(count));
      }
      if (!std::isfinite(batch_loss)) {
        throw NonFinite("train: loss became non-finite at epoch " +
                        std::to_string(epoch) + ", batch offset " +
                        std::to_string(start));
      }
      loss_sum += batch_loss;
      adam_step(params, batch_grad, adam, lr, config.weight_decay);
    }

    // Validation pass: relaxed loss plus decoded regret under true costs.
    std::vector<double> val_losses(static_cast<std::size_t>(n_val_eff));
    std::vector<double> val_regrets(static_cast<std::size_t>(n_val_eff));
    std::vector<double> val_values(static_cast<std::size_t>(n_val_eff));
    parallel_for(n_val_eff, config.threads, [&](std::int64_t slot) {
      const Eigen::Index idx = val_begin_eff + slot;
      const Eigen::VectorXd w_pred =
          forward(params, data.contexts.row(idx).transpose());
      const DysState state =
          solve_fixed_point(P, problem.embed_cost(w_pred), config.dys);
      const Eigen::VectorXd x_star = data.solutions.row(idx).transpose();
      val_losses[static_cast<std::size_t>(slot)] =
          l2_loss(state.x.head(nat), x_star);
      const Eigen::VectorXd decoded = problem.decode(state.x);
      const Eigen::VectorXd w_true = data.costs.row(idx).transpose();
      val_regrets[static_cast<std::size_t>(slot)] =
          problem.regret(w_true, decoded, x_star);
      val_values[static_cast<std::size_t>(slot)] =
          problem.optimal_value(w_true, x_star);
    });
    double val_loss = 0.0, regret_sum = 0.0, value_sum = 0.0;
    for (Eigen::Index s = 0; s < n_val_eff; ++s) {
      val_loss += val_losses[static_cast<std::size_t>(s)];
      regret_sum += val_regrets[static_cast<std::size_t>(s)];
      value_sum += val_values[static_cast<std::size_t>(s)];
    }
    val_loss /= static_cast<double>(n_val_eff);
    if (value_sum == 0.0) {
      throw ZeroDenominator("train: validation optimal objectives sum to 0");
    }
    const double val_nr = regret_sum / value_sum;

    EpochStats stats;
    stats.train_loss = loss_sum / static_cast<double>(n_train);
    stats.val_loss = val_loss;
    stats.val_normalized_regret = val_nr;
    stats.learning_rate = lr;
    stats.seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t_epoch)
                        .count();
    report.history.push_back(stats);

    if (val_nr < report.best_val_normalized_regret) {
      report.best_val_normalized_regret = val_nr;
      report.best_epoch = epoch;
      report.best_params = params;
    }

    // Plateau schedule with relative improvement threshold.
    if (val_loss < best_plateau_loss * (1.0 - 1e-4)) {
      best_plateau_loss = val_loss;
      plateau_wait = 0;
    } else if (++plateau_wait > config.plateau_patience) {
      lr *= config.plateau_factor;
      plateau_wait = 0;
    }

    if (config.time_budget_seconds > 0.0) {
      const double elapsed = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - t_start)
                                 .count();
      if (elapsed > config.time_budget_seconds &&
          epoch + 1 < config.epochs) {
        report.stopped_on_time_budget = true;
        break;
      }
    }
  }

  report.final_params = params;
  if (report.best_epoch < 0) {
    report.best_params = params;  // unreachable with epochs >= 1
  }
  return report;
}

EvalReport evaluate(ProblemInstance& problem, const Dataset& data,
                    const MlpParams& params, const DysConfig& dys,
                    int threads) {
  if (params.config.layer_dims.front() != kContextDim ||
      params.config.layer_dims.back() != problem.native_dim()) {
    throw DimensionMismatch("evaluate: model dims do not match the problem");
  }
  if (data.costs.cols() != problem.native_dim()) {
    throw DimensionMismatch("evaluate: dataset does not match the problem");
  }
  problem.ensure_factorized();
  const StandardFormPolytope& P = problem.polytope();
  const Eigen::Index nat = problem.native_dim();
  const Eigen::Index N = data.size();

  std::vector<double> losses(static_cast<std::size_t>(N));
  std::vector<double> regrets(static_cast<std::size_t>(N));
  std::vector<double> values(static_cast<std::size_t>(N));
  std::vector<char> matches(static_cast<std::size_t>(N));
  parallel_for(N, threads, [&](std::int64_t i) {
    const Eigen::VectorXd w_pred =
        forward(params, data.contexts.row(i).transpose());
    const DysState state =
        solve_fixed_point(P, problem.embed_cost(w_pred), dys);
    const Eigen::VectorXd x_star = data.solutions.row(i).transpose();
    losses[static_cast<std::size_t>(i)] = l2_loss(state.x.head(nat), x_star);
    const Eigen::VectorXd decoded = problem.decode(state.x);
    const Eigen::VectorXd w_true = data.costs.row(i).transpose();
    regrets[static_cast<std::size_t>(i)] =
        problem.regret(w_true, decoded, x_star);
    values[static_cast<std::size_t>(i)] =
        problem.optimal_value(w_true, x_star);
    matches[static_cast<std::size_t>(i)] =
        ((decoded - x_star).lpNorm<Eigen::Infinity>() < 0.5) ? 1 : 0;
  });

  EvalReport rep;
  rep.n_samples = N;
  double regret_sum = 0.0, value_sum = 0.0, loss_sum = 0.0, match_sum = 0.0;
  for (Eigen::Index i = 0; i < N; ++i) {
    loss_sum += losses[static_cast<std::size_t>(i)];
    regret_sum += regrets[static_cast<std::size_t>(i)];
    value_sum += values[static_cast<std::size_t>(i)];
    match_sum += matches[static_cast<std::size_t>(i)];
  }
  if (value_sum == 0.0) {
    throw ZeroDenominator("evaluate: optimal objectives sum to zero");
  }
  rep.normalized_regret = regret_sum / value_sum;
  rep.mean_l2 = loss_sum / static_cast<double>(N);
  rep.decode_match_fraction = match_sum / static_cast<double>(N);
  return rep;
}

}  // namespace dylp
