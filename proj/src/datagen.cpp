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

#include "dylp/datagen.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dylp/errors.hpp"

namespace dylp {

namespace {

// Exact integer power; std::pow would be correct here but this keeps the
// result bit-deterministic across libm versions.
double ipow(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

void validate(const DatagenConfig& c) {
  if (c.n_samples < 1) throw InvalidSize("datagen: n_samples must be >= 1");
  if (c.deg < 1) throw InvalidSize("datagen: deg must be >= 1");
  if (!(c.noise_width >= 0.0) || c.noise_width > 1.0) {
    throw ValidationError("datagen: noise_width must lie in [0, 1]");
  }
  if (c.kind == DatasetKind::kKnapsackPolynomial) {
    if (c.num_items < 1 || c.num_items > 40) {
      throw InvalidSize("datagen: num_items must lie in [1, 40]");
    }
    if (c.num_constraints < 1) {
      throw InvalidSize("datagen: num_constraints must be >= 1");
    }
    if (c.size_lo < 1 || c.size_hi < c.size_lo) {
      throw ValidationError("datagen: need 1 <= size_lo <= size_hi");
    }
    if (!(c.capacity_ratio > 0.0)) {
      throw ValidationError("datagen: capacity_ratio must be positive");
    }
  } else if (c.k < 2) {
    throw InvalidSize("datagen: grid side k must be >= 2");
  }
}

void format_value(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

std::string kind_to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kGridPolynomial: return "grid_poly";
    case DatasetKind::kGridLinear: return "grid_linear";
    case DatasetKind::kKnapsackPolynomial: return "knapsack_poly";
  }
  throw ValidationError("unknown dataset kind");
}

DatasetKind kind_from_string(const std::string& s) {
  if (s == "grid_poly") return DatasetKind::kGridPolynomial;
  if (s == "grid_linear") return DatasetKind::kGridLinear;
  if (s == "knapsack_poly") return DatasetKind::kKnapsackPolynomial;
  throw ParseError("unknown dataset kind '" + s + "'");
}

Eigen::VectorXd gen_costs_polynomial(const Eigen::VectorXd& d,
                                     const Eigen::MatrixXd& B, int deg,
                                     double noise_width, Rng& rng) {
  if (d.size() != B.cols()) {
    throw DimensionMismatch("gen_costs_polynomial: context does not match B");
  }
  const Eigen::VectorXd bd = B * d;
  const double scale = 1.0 / ipow(3.5, deg);
  Eigen::VectorXd w(B.rows());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double base =
        scale * ipow(bd(i) / std::sqrt(5.0) + 3.0, deg) + 1.0;
    const double eps = rng.uniform(1.0 - noise_width, 1.0 + noise_width);
    w(i) = std::max(0.0, base * eps);
  }
  return w;
}

Eigen::VectorXd gen_costs_linear(const Eigen::VectorXd& d,
                                 const Eigen::MatrixXd& W) {
  if (d.size() != W.cols()) {
    throw DimensionMismatch("gen_costs_linear: context does not match W");
  }
  return W * d;
}

Dataset gen_dataset(const DatagenConfig& config) {
  validate(config);
  Dataset data;
  data.config = config;

  // Base stream: everything shared across samples (the cost-map matrix and,
  // for knapsacks, the instance) comes out of it in a fixed order.
  Rng base(config.seed);

  ProblemInstance problem = [&]() -> ProblemInstance {
    if (config.kind == DatasetKind::kKnapsackPolynomial) {
      const Eigen::Index k = config.num_constraints;
      const Eigen::Index l = config.num_items;
      Eigen::MatrixXd sizes(k, l);
      for (Eigen::Index r = 0; r < k; ++r) {
        for (Eigen::Index c = 0; c < l; ++c) {
          sizes(r, c) = static_cast<double>(
              base.uniform_int(config.size_lo, config.size_hi));
        }
      }
      sizes /= sizes.mean();
      const Eigen::VectorXd caps =
          config.capacity_ratio * sizes.rowwise().sum();
      data.knap_sizes = sizes;
      data.knap_caps = caps;
      return make_knapsack_problem(sizes, caps);
    }
    return make_grid_problem(config.k);
  }();

  const Eigen::Index n = problem.native_dim();
  Eigen::MatrixXd map_matrix(n, kContextDim);
  if (config.kind == DatasetKind::kGridLinear) {
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < kContextDim; ++c) {
        map_matrix(r, c) = base.uniform01();
      }
    }
  } else {
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < kContextDim; ++c) {
        map_matrix(r, c) = base.uniform01() < 0.5 ? 1.0 : -1.0;
      }
    }
  }

  const Eigen::Index N = config.n_samples;
  data.contexts.resize(N, kContextDim);
  data.costs.resize(N, n);
  data.solutions.resize(N, n);

  for (Eigen::Index i = 0; i < N; ++i) {
    // Independent stream per sample; regeneration of any one sample does not
    // depend on the others.
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(i)));
    Eigen::VectorXd d(kContextDim);
    if (config.kind == DatasetKind::kGridLinear) {
      for (Eigen::Index j = 0; j < kContextDim; ++j) d(j) = rng.uniform01();
    } else {
      for (Eigen::Index j = 0; j < kContextDim; ++j) d(j) = rng.gaussian();
    }
    Eigen::VectorXd w;
    if (config.kind == DatasetKind::kGridLinear) {
      w = gen_costs_linear(d, map_matrix);
    } else {
      w = gen_costs_polynomial(d, map_matrix, config.deg, config.noise_width,
                               rng);
    }
    data.contexts.row(i) = d.transpose();
    data.costs.row(i) = w.transpose();
    data.solutions.row(i) = problem.oracle(w).transpose();
  }
  return data;
}

ProblemInstance make_problem(const Dataset& data) {
  if (data.config.kind == DatasetKind::kKnapsackPolynomial) {
    return make_knapsack_problem(data.knap_sizes, data.knap_caps);
  }
  return make_grid_problem(data.config.k);
}

void write_dataset(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("write_dataset: cannot open " + path);

  std::string line;
  const DatagenConfig& c = data.config;
  char buf[96];
  if (c.kind == DatasetKind::kKnapsackPolynomial) {
    std::snprintf(buf, sizeof(buf), "%s %d %d %" PRId64 " %" PRIu64 " %d ",
                  kind_to_string(c.kind).c_str(), c.num_items,
                  c.num_constraints, static_cast<std::int64_t>(data.size()),
                  static_cast<std::uint64_t>(c.seed), c.deg);
  } else {
    std::snprintf(buf, sizeof(buf), "%s %d %" PRId64 " %" PRIu64 " %d ",
                  kind_to_string(c.kind).c_str(), c.k,
                  static_cast<std::int64_t>(data.size()),
                  static_cast<std::uint64_t>(c.seed), c.deg);
  }
  line = buf;
  format_value(line, c.noise_width);
  line += '\n';
  out << line;

  if (c.kind == DatasetKind::kKnapsackPolynomial) {
    for (Eigen::Index r = 0; r < data.knap_sizes.rows(); ++r) {
      line.clear();
      for (Eigen::Index j = 0; j < data.knap_sizes.cols(); ++j) {
        if (j) line += ' ';
        format_value(line, data.knap_sizes(r, j));
      }
      line += '\n';
      out << line;
    }
    line.clear();
    for (Eigen::Index j = 0; j < data.knap_caps.size(); ++j) {
      if (j) line += ' ';
      format_value(line, data.knap_caps(j));
    }
    line += '\n';
    out << line;
  }

  for (Eigen::Index i = 0; i < data.size(); ++i) {
    line.clear();
    for (Eigen::Index j = 0; j < kContextDim; ++j) {
      if (j) line += ' ';
      format_value(line, data.contexts(i, j));
    }
    for (Eigen::Index j = 0; j < data.costs.cols(); ++j) {
      line += ' ';
      format_value(line, data.costs(i, j));
    }
    for (Eigen::Index j = 0; j < data.solutions.cols(); ++j) {
      line += ' ';
      line += data.solutions(i, j) > 0.5 ? '1' : '0';
    }
    line += '\n';
    out << line;
  }
  if (!out) throw ValidationError("write_dataset: write failed for " + path);
}

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("read_dataset: cannot open " + path);

  Dataset data;
  DatagenConfig& c = data.config;
  std::string kind;
  in >> kind;
  c.kind = kind_from_string(kind);

  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
  if (c.kind == DatasetKind::kKnapsackPolynomial) {
    in >> c.num_items >> c.num_constraints >> n_samples >> seed >> c.deg >>
        c.noise_width;
  } else {
    in >> c.k >> n_samples >> seed >> c.deg >> c.noise_width;
  }
  if (!in || n_samples < 1) {
    throw ParseError("read_dataset: bad header in " + path);
  }
  c.seed = seed;
  c.n_samples = static_cast<int>(n_samples);

  Eigen::Index n = 0;
  if (c.kind == DatasetKind::kKnapsackPolynomial) {
    const Eigen::Index k = c.num_constraints;
    const Eigen::Index l = c.num_items;
    if (l < 1 || k < 1) throw ParseError("read_dataset: bad knapsack header");
    data.knap_sizes.resize(k, l);
    for (Eigen::Index r = 0; r < k; ++r) {
      for (Eigen::Index j = 0; j < l; ++j) {
        if (!(in >> data.knap_sizes(r, j))) {
          throw ParseError("read_dataset: truncated size matrix in " + path);
        }
      }
    }
    data.knap_caps.resize(k);
    for (Eigen::Index j = 0; j < k; ++j) {
      if (!(in >> data.knap_caps(j))) {
        throw ParseError("read_dataset: truncated capacities in " + path);
      }
    }
    n = l;
  } else {
    if (c.k < 2) throw ParseError("read_dataset: bad grid side in header");
    n = Eigen::Index(2) * c.k * (c.k - 1);
  }

  data.contexts.resize(n_samples, kContextDim);
  data.costs.resize(n_samples, n);
  data.solutions.resize(n_samples, n);
  for (Eigen::Index i = 0; i < n_samples; ++i) {
    for (Eigen::Index j = 0; j < kContextDim; ++j) {
      if (!(in >> data.contexts(i, j))) {
        throw ParseError("read_dataset: truncated record " +
                         std::to_string(i) + " in " + path);
      }
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!(in >> data.costs(i, j))) {
        throw ParseError("read_dataset: truncated costs in record " +
                         std::to_string(i));
      }
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!(in >> data.solutions(i, j))) {
        throw ParseError("read_dataset: truncated solution in record " +
                         std::to_string(i));
      }
    }
  }
  return data;
}

void write_matrix(const Eigen::MatrixXd& mat, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("write_matrix: cannot open " + path);
  out << mat.rows() << ' ' << mat.cols() << '\n';
  std::string line;
  for (Eigen::Index i = 0; i < mat.rows(); ++i) {
    line.clear();
    for (Eigen::Index j = 0; j < mat.cols(); ++j) {
      if (j) line += ' ';
      format_value(line, mat(i, j));
    }
    line += '\n';
    out << line;
  }
  if (!out) throw ValidationError("write_matrix: write failed for " + path);
}

Eigen::MatrixXd read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("read_matrix: cannot open " + path);
  Eigen::Index rows = 0, cols = 0;
  in >> rows >> cols;
  if (!in || rows < 0 || cols < 0) {
    throw ParseError("read_matrix: bad header in " + path);
  }
  Eigen::MatrixXd mat(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!(in >> mat(i, j))) {
        throw ParseError("read_matrix: truncated data in " + path);
      }
    }
  }
  return mat;
}

}  // namespace dylp
