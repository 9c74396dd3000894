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

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lingeo/error.hpp"
#include "lingeo/matrix.hpp"

namespace lingeo::reduce {

using Coords = Eigen::Matrix<double, Eigen::Dynamic, 2>;

// Dense document vectors (one row per document) after the geometry transform.
struct PointCloud {
  DenseMatrix points;
  std::vector<std::string> ids;

  Eigen::Index size() const { return points.rows(); }
};

struct EmbeddingInfo {
  std::string reducer;
  std::string geometry;
  std::uint64_t seed = 0;
  std::string config;  // reducer settings as compact JSON
};

struct Embedding2D {
  Coords coords;
  std::vector<std::string> ids;
  EmbeddingInfo info;

  Eigen::Index size() const { return coords.rows(); }
};

// Thrown when a computation is abandoned because a newer request superseded it.
class Cancelled : public Error {
 public:
  Cancelled() : Error("computation superseded by a newer revision") {}
};

// Polled periodically by long-running reducers; returning true cancels.
using StopCheck = std::function<bool()>;

// ---------------------------------------------------------------- PCA

struct PcaModel {
  Vector mean;
  // m x 2, orthonormal columns for every component with positive variance.
  DenseMatrix components;
  Eigen::Vector2d variances;  // per component, descending
  double total_variance = 0.0;
  Coords scores;
};

// Mean-centred projection onto the top two principal axes. Uses the m x m
// covariance when documents outnumber dimensions, the n x n Gram matrix
// otherwise. Each axis is signed so that its largest-magnitude loading is
// positive.
PcaModel fit_pca(const DenseMatrix& points);
Embedding2D pca(const PointCloud& cloud);

// ---------------------------------------------------------------- t-SNE

struct TsneConfig {
  double perplexity = 30.0;
  int iterations = 1000;
  double learning_rate = 200.0;
  double early_exaggeration = 12.0;
  int exaggeration_iterations = 250;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
  int momentum_switch = 250;
  std::uint64_t seed = 0;
  int kl_interval = 50;

  void validate(Eigen::Index n_points) const;
  std::string to_json() const;
};

struct Calibration {
  std::vector<double> p;  // conditional distribution, sums to 1
  double beta = 1.0;      // Gaussian precision 1 / (2 sigma^2)
  double perplexity = 0.0;
  int iterations = 0;
};

// Binary search on the Gaussian precision until the row's perplexity is
// within 1e-3 of `target` (at most 64 steps). `sq_distances` excludes self.
Calibration perplexity_calibration(std::span<const double> sq_distances, double target);

// Symmetrized joint probabilities (P_{j|i} + P_{i|j}) / 2n from the rows of
// `points` using squared Euclidean distances.
DenseMatrix joint_probabilities(const DenseMatrix& points, double perplexity);

// KL(P || Q) with Student-t Q over the 2-D layout.
double kl_divergence(const DenseMatrix& P, const Coords& Y);
Coords kl_gradient(const DenseMatrix& P, const Coords& Y);

struct TsneResult {
  Embedding2D embedding;
  std::vector<std::pair<int, double>> kl_trace;  // (iteration, KL)
  double final_kl = 0.0;
};

// Exact t-SNE. Deterministic for a given seed.
TsneResult tsne(const PointCloud& cloud, const TsneConfig& config, const StopCheck& stop = {});

}  // namespace lingeo::reduce
