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

#include "lingeo/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lingeo::evaluate {

LabeledEmbedding::LabeledEmbedding(reduce::Coords coords, std::vector<std::string> labels)
    : coords_(std::move(coords)), labels_(std::move(labels)) {
  if (static_cast<Eigen::Index>(labels_.size()) != coords_.rows()) {
    throw Error("label count does not match embedding size");
  }
  if (!coords_.allFinite()) throw Error("embedding has non-finite coordinates");
  classes_ = labels_;
  std::sort(classes_.begin(), classes_.end());
  classes_.erase(std::unique(classes_.begin(), classes_.end()), classes_.end());
  class_index_.reserve(labels_.size());
  for (const std::string& l : labels_) {
    class_index_.push_back(static_cast<std::size_t>(
        std::lower_bound(classes_.begin(), classes_.end(), l) - classes_.begin()));
  }
}

namespace {

struct ClassStats {
  std::vector<Eigen::Vector2d> centroid;
  std::vector<std::size_t> count;
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
};

ClassStats class_stats(const LabeledEmbedding& emb) {
  ClassStats s;
  const std::size_t c = emb.num_classes();
  s.centroid.assign(c, Eigen::Vector2d::Zero());
  s.count.assign(c, 0);
  for (Eigen::Index i = 0; i < emb.size(); ++i) {
    const Eigen::Vector2d x = emb.coords().row(i).transpose();
    s.centroid[emb.class_of(i)] += x;
    ++s.count[emb.class_of(i)];
    s.mean += x;
  }
  for (std::size_t a = 0; a < c; ++a) {
    if (s.count[a]) s.centroid[a] /= static_cast<double>(s.count[a]);
  }
  if (emb.size()) s.mean /= static_cast<double>(emb.size());
  return s;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

ScatterMatrices scatter_matrices(const LabeledEmbedding& emb) {
  const ClassStats s = class_stats(emb);
  ScatterMatrices m;
  m.within.setZero();
  m.between.setZero();
  m.total.setZero();
  for (Eigen::Index i = 0; i < emb.size(); ++i) {
    const Eigen::Vector2d x = emb.coords().row(i).transpose();
    const Eigen::Vector2d dw = x - s.centroid[emb.class_of(i)];
    const Eigen::Vector2d dt = x - s.mean;
    m.within += dw * dw.transpose();
    m.total += dt * dt.transpose();
  }
  for (std::size_t a = 0; a < emb.num_classes(); ++a) {
    const Eigen::Vector2d d = s.centroid[a] - s.mean;
    m.between += static_cast<double>(s.count[a]) * d * d.transpose();
  }
  return m;
}

double intra_inter(const LabeledEmbedding& emb, double ridge) {
  const ScatterMatrices m = scatter_matrices(emb);
  if (ridge < 0.0) {
    // A fixed ridge would break invariance under linear maps, so only
    // singular scatter gets one.
    const double tr = m.total.trace();
    ridge = m.total.determinant() > 1e-12 * tr * tr ? 0.0 : std::max(1e-9 * tr, std::numeric_limits<double>::min());
  }
  const Eigen::Matrix2d regularized = m.total + ridge * Eigen::Matrix2d::Identity();
  return regularized.ldlt().solve(m.within).trace();
}

double davies_bouldin(const LabeledEmbedding& emb) {
  const std::size_t c = emb.num_classes();
  if (c < 2) throw Error("Davies-Bouldin index needs at least two classes");
  const ClassStats s = class_stats(emb);
  std::vector<double> spread(c, 0.0);
  for (Eigen::Index i = 0; i < emb.size(); ++i) {
    const std::size_t a = emb.class_of(i);
    spread[a] += (emb.coords().row(i).transpose() - s.centroid[a]).norm();
  }
  for (std::size_t a = 0; a < c; ++a) spread[a] /= static_cast<double>(s.count[a]);

  double sum = 0.0;
  for (std::size_t a = 0; a < c; ++a) {
    double worst = 0.0;
    for (std::size_t b = 0; b < c; ++b) {
      if (a == b) continue;
      const double d = (s.centroid[a] - s.centroid[b]).norm();
      if (d == 0.0) throw Error("degenerate centroids");
      worst = std::max(worst, (spread[a] + spread[b]) / d);
    }
    sum += worst;
  }
  return sum / static_cast<double>(c);
}

double knn_accuracy(const LabeledEmbedding& emb, int k) {
  const Eigen::Index n = emb.size();
  if (k < 1 || k >= n) throw Error("k must satisfy 1 <= k < number of points");
  std::vector<std::pair<double, Eigen::Index>> neighbours;
  std::vector<int> votes(emb.num_classes());
  Eigen::Index correct = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    neighbours.clear();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) neighbours.emplace_back((emb.coords().row(i) - emb.coords().row(j)).squaredNorm(), j);
    }
    std::partial_sort(neighbours.begin(), neighbours.begin() + k, neighbours.end());
    std::fill(votes.begin(), votes.end(), 0);
    for (int r = 0; r < k; ++r) ++votes[emb.class_of(neighbours[static_cast<std::size_t>(r)].second)];
    const auto winner = static_cast<std::size_t>(std::max_element(votes.begin(), votes.end()) - votes.begin());
    if (winner == emb.class_of(i)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(n);
}

double gaussian_overlap(double mean1, double var1, double mean2, double var2) {
  if (!(var1 > 0.0) || !(var2 > 0.0)) throw Error("degenerate projection");
  if (mean1 > mean2) {
    std::swap(mean1, mean2);
    std::swap(var1, var2);
  }
  const double s1 = std::sqrt(var1);
  const double s2 = std::sqrt(var2);
  if (std::abs(var1 - var2) <= 1e-12 * std::max(var1, var2)) {
    const double s = std::sqrt(0.5 * (var1 + var2));
    return 2.0 * normal_cdf(-(mean2 - mean1) / (2.0 * s));
  }

  // Crossing points of the two densities solve a x^2 + b x + c = 0.
  const double a = 1.0 / var1 - 1.0 / var2;
  const double b = -2.0 * (mean1 / var1 - mean2 / var2);
  const double c = mean1 * mean1 / var1 - mean2 * mean2 / var2 + std::log(var1 / var2);
  const double disc = std::sqrt(std::max(b * b - 4.0 * a * c, 0.0));
  const double q = -0.5 * (b + std::copysign(disc, b));
  double r1 = q / a;
  double r2 = q != 0.0 ? c / q : r1;
  if (r1 > r2) std::swap(r1, r2);

  auto mass = [](double m, double s, double lo, double hi) {
    const double upper = std::isinf(hi) ? 1.0 : normal_cdf((hi - m) / s);
    const double lower = std::isinf(lo) ? 0.0 : normal_cdf((lo - m) / s);
    return upper - lower;
  };
  auto log_density = [](double x, double m, double v) { return -0.5 * (x - m) * (x - m) / v - 0.5 * std::log(v); };

  const double inf = std::numeric_limits<double>::infinity();
  const double cuts[4] = {-inf, r1, r2, inf};
  double total = 0.0;
  for (int seg = 0; seg < 3; ++seg) {
    const double lo = cuts[seg];
    const double hi = cuts[seg + 1];
    double probe;
    if (std::isinf(lo)) {
      probe = hi - 1.0 - std::abs(hi);
    } else if (std::isinf(hi)) {
      probe = lo + 1.0 + std::abs(lo);
    } else {
      probe = 0.5 * (lo + hi);
    }
    const bool first_lower = log_density(probe, mean1, var1) <= log_density(probe, mean2, var2);
    total += first_lower ? mass(mean1, s1, lo, hi) : mass(mean2, s2, lo, hi);
  }
  return std::clamp(total, 0.0, 1.0);
}

double lda_overlap(const LabeledEmbedding& emb) {
  if (emb.num_classes() != 2) throw Error("LDA overlap needs exactly two classes");
  const ClassStats s = class_stats(emb);
  if (s.count[0] < 2 || s.count[1] < 2) throw Error("LDA overlap needs at least two points per class");
  const ScatterMatrices m = scatter_matrices(emb);
  const double ridge = std::max(1e-9 * m.within.trace(), std::numeric_limits<double>::min());
  Eigen::Vector2d w = (m.within + ridge * Eigen::Matrix2d::Identity()).ldlt().solve(s.centroid[1] - s.centroid[0]);
  if (!(w.norm() > 0.0) || !w.allFinite()) throw Error("degenerate projection");
  w.normalize();

  double mean[2] = {0.0, 0.0};
  double sq[2] = {0.0, 0.0};
  for (Eigen::Index i = 0; i < emb.size(); ++i) mean[emb.class_of(i)] += emb.coords().row(i).dot(w);
  for (int a = 0; a < 2; ++a) mean[a] /= static_cast<double>(s.count[a]);
  for (Eigen::Index i = 0; i < emb.size(); ++i) {
    const std::size_t a = emb.class_of(i);
    const double d = emb.coords().row(i).dot(w) - mean[a];
    sq[a] += d * d;
  }
  const double var0 = sq[0] / static_cast<double>(s.count[0]);
  const double var1 = sq[1] / static_cast<double>(s.count[1]);
  return gaussian_overlap(mean[0], var0, mean[1], var1);
}

EvaluationReport evaluate_all(const LabeledEmbedding& emb, int k) {
  EvaluationReport r;
  r.intra_inter = intra_inter(emb);
  r.davies_bouldin = davies_bouldin(emb);
  r.k = k;
  r.knn_accuracy = knn_accuracy(emb, k);
  if (emb.num_classes() == 2) r.lda_overlap = lda_overlap(emb);
  return r;
}

}  // namespace lingeo::evaluate
