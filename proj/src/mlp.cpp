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

#include "dylp/mlp.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dylp/errors.hpp"

namespace dylp {

namespace {

void validate_config(const MlpConfig& c) {
  if (c.layer_dims.size() < 2) {
    throw InvalidSize("mlp: layer_dims needs at least input and output");
  }
  for (int d : c.layer_dims) {
    if (d < 1) throw InvalidSize("mlp: every layer dimension must be >= 1");
  }
  if (!(c.dropout_rate >= 0.0) || c.dropout_rate >= 1.0) {
    throw ValidationError("mlp: dropout_rate must lie in [0, 1)");
  }
}

double leaky(double s, double slope) { return s > 0.0 ? s : slope * s; }
double leaky_deriv(double s, double slope) { return s > 0.0 ? 1.0 : slope; }

}  // namespace

std::size_t MlpParams::param_count() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    count += static_cast<std::size_t>(weights[i].size()) +
             static_cast<std::size_t>(biases[i].size());
  }
  return count;
}

MlpParams init_params(const MlpConfig& config) {
  validate_config(config);
  MlpParams p;
  p.config = config;
  Rng rng(config.seed);
  const std::size_t layers = config.layer_dims.size() - 1;
  p.weights.resize(layers);
  p.biases.resize(layers);
  for (std::size_t i = 0; i < layers; ++i) {
    const int fan_in = config.layer_dims[i];
    const int fan_out = config.layer_dims[i + 1];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    p.weights[i].resize(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) {
        p.weights[i](r, c) = rng.uniform(-limit, limit);
      }
    }
    p.biases[i] = Eigen::VectorXd::Zero(fan_out);
  }
  return p;
}

Eigen::VectorXd forward(const MlpParams& params, const Eigen::VectorXd& input,
                        bool train_mode, Rng* dropout_rng, MlpCache* cache) {
  const std::size_t layers = params.weights.size();
  if (input.size() != params.config.layer_dims.front()) {
    throw DimensionMismatch("mlp forward: input has " +
                            std::to_string(input.size()) +
                            " entries, expected " +
                            std::to_string(params.config.layer_dims.front()));
  }
  if (cache) {
    cache->inputs.assign(layers, Eigen::VectorXd());
    cache->preacts.assign(layers, Eigen::VectorXd());
    cache->dropout_scale.resize(0);
  }

  Eigen::VectorXd a = input;
  for (std::size_t i = 0; i < layers; ++i) {
    if (cache) cache->inputs[i] = a;
    Eigen::VectorXd s = params.weights[i] * a + params.biases[i];
    if (i + 1 < layers) {
      if (cache) cache->preacts[i] = s;
      for (Eigen::Index j = 0; j < s.size(); ++j) {
        s(j) = leaky(s(j), params.config.leaky_slope);
      }
    }
    a = std::move(s);
  }

  const double p = params.config.dropout_rate;
  if (train_mode && p > 0.0) {
    if (dropout_rng == nullptr) {
      throw ValidationError("mlp forward: dropout needs an rng in train mode");
    }
    // Inverted dropout: kept units are scaled by 1/(1-p) so the expected
    // output matches evaluation mode.
    Eigen::VectorXd scale(a.size());
    for (Eigen::Index j = 0; j < a.size(); ++j) {
      scale(j) = dropout_rng->uniform01() < p ? 0.0 : 1.0 / (1.0 - p);
    }
    a.array() *= scale.array();
    if (cache) cache->dropout_scale = scale;
  }
  return a;
}

MlpGrad backward(const MlpParams& params, const MlpCache& cache,
                 const Eigen::VectorXd& grad_output) {
  const std::size_t layers = params.weights.size();
  if (cache.inputs.size() != layers) {
    throw ValidationError("mlp backward: cache does not match params");
  }
  if (grad_output.size() != params.config.layer_dims.back()) {
    throw DimensionMismatch("mlp backward: grad_output has wrong size");
  }

  MlpGrad g = zero_grad_like(params);
  Eigen::VectorXd delta = grad_output;
  if (cache.dropout_scale.size() > 0) {
    delta.array() *= cache.dropout_scale.array();
  }
  for (std::size_t i = layers; i-- > 0;) {
    g.weights[i].noalias() = delta * cache.inputs[i].transpose();
    g.biases[i] = delta;
    if (i > 0) {
      Eigen::VectorXd next = params.weights[i].transpose() * delta;
      const Eigen::VectorXd& s = cache.preacts[i - 1];
      for (Eigen::Index j = 0; j < next.size(); ++j) {
        next(j) *= leaky_deriv(s(j), params.config.leaky_slope);
      }
      delta = std::move(next);
    }
  }
  return g;
}

MlpGrad zero_grad_like(const MlpParams& params) {
  MlpGrad g;
  g.weights.reserve(params.weights.size());
  g.biases.reserve(params.biases.size());
  for (std::size_t i = 0; i < params.weights.size(); ++i) {
    g.weights.push_back(Eigen::MatrixXd::Zero(params.weights[i].rows(),
                                              params.weights[i].cols()));
    g.biases.push_back(Eigen::VectorXd::Zero(params.biases[i].size()));
  }
  return g;
}

void save_checkpoint(const MlpParams& params, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("save_checkpoint: cannot open " + path);
  char buf[64];
  out << "mlp-checkpoint 1\n";
  out << "dims";
  for (int d : params.config.layer_dims) out << ' ' << d;
  out << '\n';
  std::snprintf(buf, sizeof(buf), "%.17g %.17g %" PRIu64,
                params.config.leaky_slope, params.config.dropout_rate,
                static_cast<std::uint64_t>(params.config.seed));
  out << "meta " << buf << '\n';
  for (std::size_t i = 0; i < params.weights.size(); ++i) {
    const Eigen::MatrixXd& W = params.weights[i];
    for (Eigen::Index r = 0; r < W.rows(); ++r) {
      for (Eigen::Index c = 0; c < W.cols(); ++c) {
        std::snprintf(buf, sizeof(buf), "%.17g", W(r, c));
        out << buf << (c + 1 < W.cols() ? ' ' : '\n');
      }
    }
    const Eigen::VectorXd& bvec = params.biases[i];
    for (Eigen::Index r = 0; r < bvec.size(); ++r) {
      std::snprintf(buf, sizeof(buf), "%.17g", bvec(r));
      out << buf << (r + 1 < bvec.size() ? ' ' : '\n');
    }
  }
  if (!out) throw ValidationError("save_checkpoint: write failed for " + path);
}

MlpParams load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("load_checkpoint: cannot open " + path);
  std::string tag;
  int version = 0;
  in >> tag >> version;
  if (!in || tag != "mlp-checkpoint" || version != 1) {
    throw ParseError("load_checkpoint: bad header in " + path);
  }

  MlpConfig config;
  in >> tag;
  if (tag != "dims") throw ParseError("load_checkpoint: missing dims line");
  std::string rest;
  std::getline(in, rest);
  std::istringstream dims(rest);
  int d = 0;
  while (dims >> d) config.layer_dims.push_back(d);

  in >> tag;
  if (tag != "meta") throw ParseError("load_checkpoint: missing meta line");
  std::uint64_t seed = 0;
  in >> config.leaky_slope >> config.dropout_rate >> seed;
  config.seed = seed;
  if (!in) throw ParseError("load_checkpoint: bad meta line");
  validate_config(config);

  MlpParams p;
  p.config = config;
  const std::size_t layers = config.layer_dims.size() - 1;
  p.weights.resize(layers);
  p.biases.resize(layers);
  for (std::size_t i = 0; i < layers; ++i) {
    const int rows = config.layer_dims[i + 1];
    const int cols = config.layer_dims[i];
    p.weights[i].resize(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        if (!(in >> p.weights[i](r, c))) {
          throw ParseError("load_checkpoint: truncated weights in " + path);
        }
      }
    }
    p.biases[i].resize(rows);
    for (int r = 0; r < rows; ++r) {
      if (!(in >> p.biases[i](r))) {
        throw ParseError("load_checkpoint: truncated biases in " + path);
      }
    }
  }
  return p;
}

}  // namespace dylp
