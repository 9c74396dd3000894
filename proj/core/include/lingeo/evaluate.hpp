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

#include <optional>
#include <string>
#include <vector>

#include "lingeo/reduce.hpp"

namespace lingeo::evaluate {

// A 2-D embedding with one class label per point. Classes are indexed in
// ascending label order.
class LabeledEmbedding {
 public:
  LabeledEmbedding(reduce::Coords coords, std::vector<std::string> labels);

  const reduce::Coords& coords() const { return coords_; }
  const std::vector<std::string>& labels() const { return labels_; }
  // Sorted distinct labels.
  const std::vector<std::string>& classes() const { return classes_; }
  std::size_t class_of(Eigen::Index point) const { return class_index_[static_cast<std::size_t>(point)]; }
  Eigen::Index size() const { return coords_.rows(); }
  std::size_t num_classes() const { return classes_.size(); }

 private:
  reduce::Coords coords_;
  std::vector<std::string> labels_;
  std::vector<std::string> classes_;
  std::vector<std::size_t> class_index_;
};

struct ScatterMatrices {
  Eigen::Matrix2d within;
  Eigen::Matrix2d between;
  Eigen::Matrix2d total;
};

ScatterMatrices scatter_matrices(const LabeledEmbedding& emb);

// Weighted intra-inter index tr((S_T + ridge I)^-1 S_W). A negative ridge
// means none unless S_T is numerically singular, then 1e-9 * tr(S_T).
// Lower is better.
double intra_inter(const LabeledEmbedding& emb, double ridge = -1.0);

// Mean over classes of the worst (s_i + s_j) / |mu_i - mu_j|, with s the mean
// distance to the class centroid. Lower is better.
double davies_bouldin(const LabeledEmbedding& emb);

// Leave-one-out k-NN accuracy in the plane. Distance ties go to the lower
// point index, vote ties to the earlier class in label order.
double knn_accuracy(const LabeledEmbedding& emb, int k);

// Overlap area of the two univariate Gaussians fitted to the classes after
// projecting onto the Fisher discriminant direction. Requires exactly two
// classes. Lower is better.
double lda_overlap(const LabeledEmbedding& emb);

// Integral of min(N(m1, v1), N(m2, v2)) over the real line.
double gaussian_overlap(double mean1, double var1, double mean2, double var2);

struct EvaluationReport {
  double intra_inter = 0.0;
  double davies_bouldin = 0.0;
  int k = 5;
  double knn_accuracy = 0.0;
  std::optional<double> lda_overlap;  // two-class embeddings only
};

EvaluationReport evaluate_all(const LabeledEmbedding& emb, int k = 5);

}  // namespace lingeo::evaluate
