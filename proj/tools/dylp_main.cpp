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

// Command line driver. Subcommands:
//   generate   write a synthetic dataset described by a JSON config
//   train      fit the cost predictor through the relaxed solver layer
//   evaluate   score a saved checkpoint on a dataset by normalized regret
//   verify     run the numerical property suite on the solver stack
//
// Exit codes: 0 success, 1 usage or validation error, 2 numeric failure
// (divergence, rank deficiency, failed property check).

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dylp/config.hpp"
#include "dylp/datagen.hpp"
#include "dylp/errors.hpp"
#include "dylp/mlp.hpp"
#include "dylp/problem.hpp"
#include "dylp/train.hpp"
#include "dylp/verify.hpp"

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Relative paths in configs and flags land under the output directory so a
// run stays self-contained.
std::string resolve_under(const std::string& dir, const std::string& path) {
  fs::path p(path);
  if (p.is_absolute()) return p.string();
  return (fs::path(dir) / p).string();
}

dylp::Dataset ensure_dataset(const dylp::ExperimentConfig& cfg,
                             const std::string& resolved_path) {
  if (fs::exists(resolved_path)) {
    std::cout << "dataset: reading " << resolved_path << "\n";
    return dylp::read_dataset(resolved_path);
  }
  std::cout << "dataset: generating " << resolved_path << " (seed "
            << cfg.datagen.seed << ", " << cfg.datagen.n_samples
            << " samples)\n";
  dylp::Dataset data = dylp::gen_dataset(cfg.datagen);
  dylp::write_dataset(data, resolved_path);
  return data;
}

void write_metrics_csv(const std::string& path,
                       const std::vector<dylp::EpochStats>& history) {
  std::ofstream out(path);
  if (!out) throw dylp::ParseError("cannot open " + path + " for writing");
  out << "epoch,train_loss,val_loss,val_normalized_regret,learning_rate,"
         "seconds\n";
  for (std::size_t e = 0; e < history.size(); ++e) {
    const dylp::EpochStats& s = history[e];
    out << e << ',' << fmt(s.train_loss) << ',' << fmt(s.val_loss) << ','
        << fmt(s.val_normalized_regret) << ',' << fmt(s.learning_rate) << ','
        << fmt(s.seconds) << '\n';
  }
}

int cmd_generate(const std::string& config_path, const std::string& output_dir,
                 std::int64_t seed_override) {
  dylp::ExperimentConfig cfg = dylp::load_experiment_config(config_path);
  if (!output_dir.empty()) cfg.output_dir = output_dir;
  if (seed_override >= 0) {
    cfg.datagen.seed = static_cast<std::uint64_t>(seed_override);
  }
  fs::create_directories(cfg.output_dir);
  const std::string path = resolve_under(cfg.output_dir, cfg.dataset_path);
  dylp::Dataset data = dylp::gen_dataset(cfg.datagen);
  dylp::write_dataset(data, path);
  std::cout << "wrote " << data.size() << " samples ("
            << dylp::kind_to_string(cfg.datagen.kind) << ") to " << path
            << "\n";
  return 0;
}

int cmd_train(const std::string& config_path, const std::string& output_dir,
              int threads, double time_budget) {
  dylp::ExperimentConfig cfg = dylp::load_experiment_config(config_path);
  if (!output_dir.empty()) cfg.output_dir = output_dir;
  if (threads > 0) cfg.train.threads = threads;
  if (time_budget > 0) cfg.train.time_budget_seconds = time_budget;
  fs::create_directories(cfg.output_dir);

  const std::string data_path = resolve_under(cfg.output_dir, cfg.dataset_path);
  dylp::Dataset data = ensure_dataset(cfg, data_path);
  dylp::ProblemInstance problem = dylp::make_problem(data);

  dylp::MlpConfig model_cfg = dylp::make_model_config(cfg, problem.native_dim());
  dylp::MlpParams params = dylp::init_params(model_cfg);
  std::cout << "model: " << params.param_count() << " parameters, layers";
  for (int d : model_cfg.layer_dims) std::cout << ' ' << d;
  std::cout << "\n";

  dylp::TrainReport report = dylp::train(problem, data, params, cfg.train);

  write_metrics_csv(resolve_under(cfg.output_dir, "metrics.csv"),
                    report.history);
  dylp::save_checkpoint(report.best_params,
                        resolve_under(cfg.output_dir, "best.ckpt"));
  dylp::save_checkpoint(report.final_params,
                        resolve_under(cfg.output_dir, "final.ckpt"));

  std::cout << "best epoch " << report.best_epoch
            << ", validation normalized regret "
            << fmt(report.best_val_normalized_regret) << "\n";
  if (report.stopped_on_time_budget) {
    std::cout << "stopped early on time budget\n";
  }
  std::cout << "artifacts: metrics.csv best.ckpt final.ckpt (in "
            << cfg.output_dir << ")\n";
  return 0;
}

int cmd_evaluate(const std::string& checkpoint_path,
                 const std::string& dataset_path,
                 const std::string& config_path, int threads) {
  dylp::DysConfig dys;  // defaults match the training layer
  if (!config_path.empty()) {
    dys = dylp::load_experiment_config(config_path).dys;
  }
  dylp::Dataset data = dylp::read_dataset(dataset_path);
  dylp::ProblemInstance problem = dylp::make_problem(data);
  dylp::MlpParams params = dylp::load_checkpoint(checkpoint_path);

  dylp::EvalReport report =
      dylp::evaluate(problem, data, params, dys, threads > 0 ? threads : 1);
  std::cout << "samples " << report.n_samples << "\n"
            << "normalized_regret " << fmt(report.normalized_regret) << "\n"
            << "mean_l2 " << fmt(report.mean_l2) << "\n"
            << "decode_match_fraction " << fmt(report.decode_match_fraction)
            << "\n";
  return 0;
}

int cmd_verify(const std::string& level) {
  dylp::VerifyLevel lvl =
      level == "full" ? dylp::VerifyLevel::kFull : dylp::VerifyLevel::kFast;
  std::vector<dylp::CheckResult> results = dylp::run_property_suite(lvl);
  bool all_pass = true;
  for (const dylp::CheckResult& r : results) {
    all_pass = all_pass && r.pass;
    std::printf("[%s] %-22s %7.2fs  %s\n", r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.seconds, r.detail.c_str());
  }
  return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn linear-program costs from context by differentiating "
               "through a regularized relaxation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  std::string checkpoint_path;
  std::string dataset_path;
  std::string level = "fast";
  int threads = 0;
  double time_budget = 0.0;
  std::int64_t seed_override = -1;

  CLI::App* gen = app.add_subcommand("generate", "Write a synthetic dataset");
  gen->add_option("--config", config_path, "JSON experiment config")
      ->required();
  gen->add_option("--output", output_dir, "Output directory override");
  gen->add_option("--seed", seed_override, "Dataset seed override");

  CLI::App* tr = app.add_subcommand("train", "Train the cost predictor");
  tr->add_option("--config", config_path, "JSON experiment config")
      ->required();
  tr->add_option("--output", output_dir, "Output directory override");
  tr->add_option("--threads", threads, "Worker threads for batch solves");
  tr->add_option("--time-budget", time_budget,
                 "Stop after this many seconds (0: none)");

  CLI::App* ev = app.add_subcommand("evaluate", "Score a checkpoint");
  ev->add_option("--checkpoint", checkpoint_path, "Saved model parameters")
      ->required();
  ev->add_option("--dataset", dataset_path, "Dataset file")->required();
  ev->add_option("--config", config_path,
                 "Optional config supplying solver settings");
  ev->add_option("--threads", threads, "Worker threads");

  CLI::App* vf = app.add_subcommand("verify", "Run the property suite");
  vf->add_option("--level", level, "fast or full")
      ->check(CLI::IsMember({"fast", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (gen->parsed()) {
      return cmd_generate(config_path, output_dir, seed_override);
    }
    if (tr->parsed()) {
      return cmd_train(config_path, output_dir, threads, time_budget);
    }
    if (ev->parsed()) {
      return cmd_evaluate(checkpoint_path, dataset_path, config_path, threads);
    }
    if (vf->parsed()) {
      return cmd_verify(level);
    }
  } catch (const dylp::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  } catch (const dylp::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
