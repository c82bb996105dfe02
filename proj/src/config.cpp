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

#include "dylp/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "dylp/errors.hpp"

namespace dylp {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& section,
                         const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ParseError("config: unknown key '" + it.key() + "' in section '" +
                       section + "'");
    }
  }
}

double get_double(const json& obj, const std::string& key,
                  const std::string& section, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) {
    throw ParseError("config: " + section + "." + key + " must be a number");
  }
  return v.get<double>();
}

int get_int(const json& obj, const std::string& key,
            const std::string& section, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw ParseError("config: " + section + "." + key +
                     " must be an integer");
  }
  return v.get<int>();
}

std::uint64_t get_u64(const json& obj, const std::string& key,
                      const std::string& section, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_unsigned() && !v.is_number_integer()) {
    throw ParseError("config: " + section + "." + key +
                     " must be a nonnegative integer");
  }
  if (v.is_number_integer() && v.get<std::int64_t>() < 0) {
    throw ParseError("config: " + section + "." + key + " must be >= 0");
  }
  return v.get<std::uint64_t>();
}

std::string get_string(const json& obj, const std::string& key,
                       const std::string& section,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) {
    throw ParseError("config: " + section + "." + key + " must be a string");
  }
  return v.get<std::string>();
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("config: cannot open " + path);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("config: invalid JSON in " + path + ": " + e.what());
  }
  if (!root.is_object()) throw ParseError("config: top level must be object");
  reject_unknown_keys(root, "(top level)",
                      {"problem", "dataset", "model", "dys", "train",
                       "output_dir"});

  ExperimentConfig cfg;
  cfg.output_dir = get_string(root, "output_dir", "(top level)", ".");

  if (root.contains("problem")) {
    const json& p = root.at("problem");
    if (!p.is_object()) throw ParseError("config: problem must be an object");
    reject_unknown_keys(p, "problem",
                        {"kind", "k", "num_items", "num_constraints",
                         "size_lo", "size_hi", "capacity_ratio"});
    const std::string kind =
        get_string(p, "kind", "problem", kind_to_string(cfg.datagen.kind));
    try {
      cfg.datagen.kind = kind_from_string(kind);
    } catch (const ParseError&) {
      throw ParseError("config: problem.kind must be one of grid_poly, "
                       "grid_linear, knapsack_poly");
    }
    cfg.datagen.k = get_int(p, "k", "problem", cfg.datagen.k);
    cfg.datagen.num_items =
        get_int(p, "num_items", "problem", cfg.datagen.num_items);
    cfg.datagen.num_constraints =
        get_int(p, "num_constraints", "problem", cfg.datagen.num_constraints);
    cfg.datagen.size_lo = get_int(p, "size_lo", "problem", cfg.datagen.size_lo);
    cfg.datagen.size_hi = get_int(p, "size_hi", "problem", cfg.datagen.size_hi);
    cfg.datagen.capacity_ratio =
        get_double(p, "capacity_ratio", "problem", cfg.datagen.capacity_ratio);
  }

  if (root.contains("dataset")) {
    const json& d = root.at("dataset");
    if (!d.is_object()) throw ParseError("config: dataset must be an object");
    reject_unknown_keys(d, "dataset",
                        {"path", "n_samples", "seed", "deg", "noise_width"});
    cfg.dataset_path = get_string(d, "path", "dataset", cfg.dataset_path);
    cfg.datagen.n_samples =
        get_int(d, "n_samples", "dataset", cfg.datagen.n_samples);
    cfg.datagen.seed = get_u64(d, "seed", "dataset", cfg.datagen.seed);
    cfg.datagen.deg = get_int(d, "deg", "dataset", cfg.datagen.deg);
    cfg.datagen.noise_width =
        get_double(d, "noise_width", "dataset", cfg.datagen.noise_width);
  }

  if (root.contains("model")) {
    const json& m = root.at("model");
    if (!m.is_object()) throw ParseError("config: model must be an object");
    reject_unknown_keys(
        m, "model", {"hidden_dims", "leaky_slope", "dropout_rate", "seed"});
    if (m.contains("hidden_dims")) {
      const json& h = m.at("hidden_dims");
      if (!h.is_array()) {
        throw ParseError("config: model.hidden_dims must be an array");
      }
      cfg.hidden_dims.clear();
      for (const json& v : h) {
        if (!v.is_number_integer() || v.get<int>() < 1) {
          throw ParseError(
              "config: model.hidden_dims entries must be integers >= 1");
        }
        cfg.hidden_dims.push_back(v.get<int>());
      }
    }
    cfg.leaky_slope = get_double(m, "leaky_slope", "model", cfg.leaky_slope);
    cfg.dropout_rate =
        get_double(m, "dropout_rate", "model", cfg.dropout_rate);
    if (!(cfg.dropout_rate >= 0.0 && cfg.dropout_rate < 1.0)) {
      throw ParseError("config: model.dropout_rate must lie in [0, 1)");
    }
    cfg.model_seed = get_u64(m, "seed", "model", cfg.model_seed);
  }

  if (root.contains("dys")) {
    const json& d = root.at("dys");
    if (!d.is_object()) throw ParseError("config: dys must be an object");
    reject_unknown_keys(d, "dys", {"alpha", "gamma", "max_iter", "tol"});
    cfg.dys.alpha = get_double(d, "alpha", "dys", cfg.dys.alpha);
    cfg.dys.gamma = get_double(d, "gamma", "dys", cfg.dys.gamma);
    cfg.dys.max_iter = get_int(d, "max_iter", "dys", cfg.dys.max_iter);
    cfg.dys.tol = get_double(d, "tol", "dys", cfg.dys.tol);
    if (!(cfg.dys.gamma > 0.0)) {
      throw ParseError("config: dys.gamma must be positive");
    }
    if (!(cfg.dys.alpha > 0.0 && cfg.dys.alpha * cfg.dys.gamma < 2.0)) {
      throw ParseError("config: dys.alpha must lie in (0, 2/gamma)");
    }
    if (cfg.dys.max_iter < 1) {
      throw ParseError("config: dys.max_iter must be >= 1");
    }
    if (!(cfg.dys.tol >= 0.0)) {
      throw ParseError("config: dys.tol must be >= 0");
    }
  }

  if (root.contains("train")) {
    const json& t = root.at("train");
    if (!t.is_object()) throw ParseError("config: train must be an object");
    reject_unknown_keys(t, "train",
                        {"epochs", "batch_size", "learning_rate",
                         "weight_decay", "plateau_factor", "plateau_patience",
                         "validation_fraction", "seed"});
    cfg.train.epochs = get_int(t, "epochs", "train", cfg.train.epochs);
    cfg.train.batch_size =
        get_int(t, "batch_size", "train", cfg.train.batch_size);
    cfg.train.learning_rate =
        get_double(t, "learning_rate", "train", cfg.train.learning_rate);
    cfg.train.weight_decay =
        get_double(t, "weight_decay", "train", cfg.train.weight_decay);
    cfg.train.plateau_factor =
        get_double(t, "plateau_factor", "train", cfg.train.plateau_factor);
    cfg.train.plateau_patience =
        get_int(t, "plateau_patience", "train", cfg.train.plateau_patience);
    cfg.train.validation_fraction = get_double(
        t, "validation_fraction", "train", cfg.train.validation_fraction);
    cfg.train.seed = get_u64(t, "seed", "train", cfg.train.seed);
    if (cfg.train.epochs < 1) {
      throw ParseError("config: train.epochs must be >= 1");
    }
    if (cfg.train.batch_size < 1) {
      throw ParseError("config: train.batch_size must be >= 1");
    }
    if (!(cfg.train.learning_rate > 0.0)) {
      throw ParseError("config: train.learning_rate must be positive");
    }
    if (!(cfg.train.weight_decay >= 0.0)) {
      throw ParseError("config: train.weight_decay must be >= 0");
    }
    if (!(cfg.train.validation_fraction >= 0.0 &&
          cfg.train.validation_fraction < 1.0)) {
      throw ParseError(
          "config: train.validation_fraction must lie in [0, 1)");
    }
  }

  cfg.train.dys = cfg.dys;
  return cfg;
}

MlpConfig make_model_config(const ExperimentConfig& config,
                            Eigen::Index native_dim) {
  MlpConfig m;
  m.layer_dims.push_back(kContextDim);
  for (int h : config.hidden_dims) m.layer_dims.push_back(h);
  m.layer_dims.push_back(static_cast<int>(native_dim));
  m.leaky_slope = config.leaky_slope;
  m.dropout_rate = config.dropout_rate;
  m.seed = config.model_seed;
  return m;
}

}  // namespace dylp
