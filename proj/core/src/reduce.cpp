// Copyright 2026 The lingeo Authors
//
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

#include "lingeo/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>
#include <json.hpp>

namespace lingeo::reduce {

// ---------------------------------------------------------------- PCA

PcaModel fit_pca(const DenseMatrix& points) {
  const Eigen::Index n = points.rows();
  const Eigen::Index m = points.cols();
  if (n < 2) throw Error("PCA needs at least two points");

  PcaModel model;
  model.mean = m > 0 ? Vector(points.colwise().mean().transpose()) : Vector();
  const DenseMatrix centered = points.rowwise() - model.mean.transpose();
  model.total_variance = centered.squaredNorm() / static_cast<double>(n);
  model.components = DenseMatrix::Zero(m, 2);
  model.variances.setZero();
  model.scores = Coords::Zero(n, 2);
  if (m == 0 || model.total_variance == 0.0) return model;

  const double floor = 1e-12 * model.total_variance * static_cast<double>(n);
  if (n < m) {
    const DenseMatrix gram = centered * centered.transpose();
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(gram);
    for (int k = 0; k < 2 && k < n; ++k) {
      const double lambda = es.eigenvalues()[n - 1 - k];
      if (!(lambda > floor)) break;
      Vector loading = centered.transpose() * es.eigenvectors().col(n - 1 - k) / std::sqrt(lambda);
      loading.normalize();
      model.components.col(k) = loading;
      model.variances[k] = lambda / static_cast<double>(n);
    }
  } else {
    const DenseMatrix cov = centered.transpose() * centered;
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(cov);
    for (int k = 0; k < 2 && k < m; ++k) {
      const double lambda = es.eigenvalues()[m - 1 - k];
      if (!(lambda > floor)) break;
      model.components.col(k) = es.eigenvectors().col(m - 1 - k);
      model.variances[k] = lambda / static_cast<double>(n);
    }
  }
  for (int k = 0; k < 2; ++k) {
    auto col = model.components.col(k);
    if (col.squaredNorm() == 0.0) continue;
    Eigen::Index arg = 0;
    col.cwiseAbs().maxCoeff(&arg);
    if (col[arg] < 0.0) col = -col;
  }
  model.scores = centered * model.components;
  return model;
}

Embedding2D pca(const PointCloud& cloud) {
  PcaModel model = fit_pca(cloud.points);
  Embedding2D e;
  e.coords = std::move(model.scores);
  e.ids = cloud.ids;
  e.info.reducer = "pca";
  e.info.config = "{}";
  return e;
}

// ---------------------------------------------------------------- t-SNE

void TsneConfig::validate(Eigen::Index n_points) const {
  if (!(perplexity > 0.0)) throw Error("perplexity must be positive");
  if (iterations <= 0) throw Error("t-SNE iterations must be positive");
  if (!(learning_rate > 0.0)) throw Error("learning rate must be positive");
  if (!(early_exaggeration > 0.0)) throw Error("early exaggeration must be positive");
  if (n_points < 5) throw Error("t-SNE needs at least 5 points");
  if (!(perplexity < static_cast<double>(n_points - 1))) {
    throw Error("perplexity " + std::to_string(perplexity) + " must be below the number of points minus one (" +
                std::to_string(n_points - 1) + ")");
  }
}

std::string TsneConfig::to_json() const {
  nlohmann::ordered_json j;
  j["perplexity"] = perplexity;
  j["iterations"] = iterations;
  j["learning_rate"] = learning_rate;
  j["early_exaggeration"] = early_exaggeration;
  j["exaggeration_iterations"] = exaggeration_iterations;
  j["initial_momentum"] = initial_momentum;
  j["final_momentum"] = final_momentum;
  j["momentum_switch"] = momentum_switch;
  return j.dump();
}

Calibration perplexity_calibration(std::span<const double> sq_distances, double target) {
  const std::size_t k = sq_distances.size();
  if (k == 0) throw Error("perplexity calibration needs at least one neighbour");
  if (!(target > 0.0) || target > static_cast<double>(k)) {
    throw Error("target perplexity must lie in (0, number of neighbours]");
  }
  Calibration cal;
  cal.p.assign(k, 1.0 / static_cast<double>(k));

  const double dmin = *std::min_element(sq_distances.begin(), sq_distances.end());
  const double dmax = *std::max_element(sq_distances.begin(), sq_distances.end());
  if (dmax - dmin <= 0.0) {
    cal.beta = 0.0;
    cal.perplexity = static_cast<double>(k);
    return cal;
  }

  // Entropy in nats of the row at precision beta; distances are shifted by
  // dmin, which leaves the normalized row unchanged.
  auto evaluate = [&](double beta) {
    double sum = 0.0;
    double weighted = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double d = sq_distances[j] - dmin;
      const double v = std::exp(-beta * d);
      cal.p[j] = v;
      sum += v;
      weighted += d * v;
    }
    for (double& v : cal.p) v /= sum;
    return std::log(sum) + beta * weighted / sum;
  };

  const double log_target = std::log(target);
  double beta = 1.0 / std::max((dmax - dmin) / static_cast<double>(k), std::numeric_limits<double>::min());
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 64; ++it) {
    const double h = evaluate(beta);
    cal.iterations = it + 1;
    cal.beta = beta;
    cal.perplexity = std::exp(h);
    if (std::abs(cal.perplexity - target) <= 1e-3) break;
    if (h > log_target) {
      lo = beta;
      beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
    } else {
      hi = beta;
      beta = 0.5 * (beta + lo);
    }
  }
  return cal;
}

namespace {

DenseMatrix squared_distances(const DenseMatrix& X) {
  const Vector norms = X.rowwise().squaredNorm();
  DenseMatrix D = (-2.0 * X * X.transpose()).colwise() + norms;
  D.rowwise() += norms.transpose();
  D = D.cwiseMax(0.0);
  D.diagonal().setZero();
  return D;
}

}  // namespace

DenseMatrix joint_probabilities(const DenseMatrix& points, double perplexity) {
  const Eigen::Index n = points.rows();
  const DenseMatrix D = squared_distances(points);
  DenseMatrix P = DenseMatrix::Zero(n, n);
  std::vector<double> row(static_cast<std::size_t>(n - 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0, k = 0; j < n; ++j) {
      if (j != i) row[static_cast<std::size_t>(k++)] = D(i, j);
    }
    const Calibration cal = perplexity_calibration(row, perplexity);
    for (Eigen::Index j = 0, k = 0; j < n; ++j) {
      if (j != i) P(i, j) = cal.p[static_cast<std::size_t>(k++)];
    }
  }
  DenseMatrix joint = (P + P.transpose()) / (2.0 * static_cast<double>(n));
  return joint;
}

double kl_divergence(const DenseMatrix& P, const Coords& Y) {
  const Eigen::Index n = Y.rows();
  DenseMatrix num(n, n);
  double z = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    num(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = 1.0 / (1.0 + (Y.row(i) - Y.row(j)).squaredNorm());
      num(i, j) = v;
      num(j, i) = v;
      z += 2.0 * v;
    }
  }
  double kl = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j || P(i, j) <= 0.0) continue;
      const double q = std::max(num(i, j) / z, std::numeric_limits<double>::min());
      kl += P(i, j) * std::log(P(i, j) / q);
    }
  }
  return kl;
}

namespace {

// Gradient of KL(scale * P || Q). Rows are accumulated independently so the
// result does not depend on evaluation order.
Coords gradient(const DenseMatrix& P, const Coords& Y, double scale, DenseMatrix& num) {
  const Eigen::Index n = Y.rows();
  double z = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    num(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dx = Y(i, 0) - Y(j, 0);
      const double dy = Y(i, 1) - Y(j, 1);
      const double v = 1.0 / (1.0 + dx * dx + dy * dy);
      num(i, j) = v;
      num(j, i) = v;
      z += 2.0 * v;
    }
  }
  Coords grad(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    double gx = 0.0;
    double gy = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double w = (scale * P(i, j) - num(i, j) / z) * num(i, j);
      gx += w * (Y(i, 0) - Y(j, 0));
      gy += w * (Y(i, 1) - Y(j, 1));
    }
    grad(i, 0) = 4.0 * gx;
    grad(i, 1) = 4.0 * gy;
  }
  return grad;
}

}  // namespace

Coords kl_gradient(const DenseMatrix& P, const Coords& Y) {
  DenseMatrix num(Y.rows(), Y.rows());
  return gradient(P, Y, 1.0, num);
}

TsneResult tsne(const PointCloud& cloud, const TsneConfig& config, const StopCheck& stop) {
  const Eigen::Index n = cloud.size();
  config.validate(n);
  const DenseMatrix P = joint_probabilities(cloud.points, config.perplexity);

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> noise(0.0, 1e-4);
  Coords Y(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    Y(i, 0) = noise(rng);
    Y(i, 1) = noise(rng);
  }
  Coords update = Coords::Zero(n, 2);
  Coords gains = Coords::Ones(n, 2);
  DenseMatrix num(n, n);

  TsneResult result;
  for (int t = 0; t < config.iterations; ++t) {
    if (stop && t % 10 == 0 && stop()) throw Cancelled();
    const double scale = t < config.exaggeration_iterations ? config.early_exaggeration : 1.0;
    const double momentum = t < config.momentum_switch ? config.initial_momentum : config.final_momentum;
    const Coords grad = gradient(P, Y, scale, num);
    if (!grad.allFinite()) throw Error("divergence; reduce learning rate");

    for (Eigen::Index i = 0; i < n; ++i) {
      for (int d = 0; d < 2; ++d) {
        const bool same_sign = (grad(i, d) > 0.0) == (update(i, d) > 0.0);
        gains(i, d) = same_sign ? gains(i, d) * 0.8 : gains(i, d) + 0.2;
        gains(i, d) = std::max(gains(i, d), 0.01);
        update(i, d) = momentum * update(i, d) - config.learning_rate * gains(i, d) * grad(i, d);
        Y(i, d) += update(i, d);
      }
    }
    Y.rowwise() -= Y.colwise().mean();
    if (!Y.allFinite()) throw Error("divergence; reduce learning rate");

    const int done = t + 1;
    if ((config.kl_interval > 0 && done % config.kl_interval == 0) || done == config.iterations) {
      result.kl_trace.emplace_back(done, kl_divergence(P, Y));
    }
  }
  result.final_kl = result.kl_trace.empty() ? kl_divergence(P, Y) : result.kl_trace.back().second;
  result.embedding.coords = std::move(Y);
  result.embedding.ids = cloud.ids;
  result.embedding.info.reducer = "tsne";
  result.embedding.info.seed = config.seed;
  result.embedding.info.config = config.to_json();
  return result;
}

}  // namespace lingeo::reduce
