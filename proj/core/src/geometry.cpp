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

#include "lingeo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <unordered_map>

#include <Eigen/Eigenvalues>

#include "lingeo/error.hpp"

namespace lingeo::geometry {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::identity: return "identity";
    case Provenance::manual: return "manual";
    case Provenance::soft: return "soft";
    case Provenance::diffusion: return "diffusion";
    case Provenance::ngram: return "ngram";
    case Provenance::taxonomy: return "taxonomy";
    case Provenance::combination: return "combination";
    case Provenance::imported: return "imported";
  }
  return "imported";
}

Provenance provenance_from_string(std::string_view s) {
  for (Provenance p : {Provenance::identity, Provenance::manual, Provenance::soft, Provenance::diffusion,
                       Provenance::ngram, Provenance::taxonomy, Provenance::combination,
                       Provenance::imported}) {
    if (to_string(p) == s) return p;
  }
  throw Error("unknown geometry provenance '" + std::string(s) + "'");
}

WordClustering::WordClustering(std::vector<std::string> words, std::vector<Cluster> clusters)
    : words_(std::move(words)), clusters_(std::move(clusters)) {
  constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();
  assignment_.assign(words_.size(), kUnassigned);
  std::unordered_map<std::string, std::size_t> names;
  for (std::size_t a = 0; a < clusters_.size(); ++a) {
    if (!names.emplace(clusters_[a].name, a).second) {
      throw Error("duplicate cluster name '" + clusters_[a].name + "'");
    }
    for (corpus::TermId w : clusters_[a].members) {
      if (w >= words_.size()) throw Error("cluster '" + clusters_[a].name + "' has out-of-range word index");
      if (assignment_[w] != kUnassigned) {
        throw Error("word '" + words_[w] + "' assigned to clusters '" + clusters_[assignment_[w]].name +
                    "' and '" + clusters_[a].name + "'");
      }
      assignment_[w] = a;
    }
  }
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (assignment_[w] == kUnassigned) throw Error("word '" + words_[w] + "' is not in any cluster");
  }
}

std::optional<std::size_t> WordClustering::find_cluster(std::string_view name) const {
  for (std::size_t a = 0; a < clusters_.size(); ++a) {
    if (clusters_[a].name == name) return a;
  }
  return std::nullopt;
}

double GeometryParams::pair(std::size_t a, std::size_t b) const {
  auto it = rho_pair.find({std::min(a, b), std::max(a, b)});
  return it == rho_pair.end() ? 0.0 : it->second;
}

void GeometryParams::set_pair(std::size_t a, std::size_t b, double value) {
  rho_pair[{std::min(a, b), std::max(a, b)}] = value;
}

void GeometryParams::validate(std::size_t num_clusters) const {
  if (rho_self.size() != num_clusters || importance.size() != num_clusters) {
    throw Error("geometry parameters do not cover every cluster");
  }
  auto check = [](double v, const char* what) {
    if (!std::isfinite(v) || v < 0.0) throw Error(std::string(what) + " must be a nonnegative real");
  };
  for (double v : rho_self) check(v, "rho_self");
  for (double v : importance) check(v, "importance");
  for (const auto& [key, v] : rho_pair) {
    if (key.first >= num_clusters || key.second >= num_clusters) throw Error("rho_pair refers to unknown cluster");
    check(v, "rho_pair");
  }
}

void SoftScoreSpec::validate() const {
  if (scores.size() != importance.size()) throw Error("soft score table: scores and importance differ in length");
  if (!std::isfinite(rho_self) || rho_self < 0.0) throw Error("soft score table: rho_self must be nonnegative");
  for (const auto& row : scores) {
    if (row.size() != cluster_names.size()) throw Error("soft score table: score vectors differ in length");
    for (double v : row) {
      if (!(v >= 0.0 && v <= 2.0)) throw Error("soft score table: relatedness outside [0,2]");
    }
  }
  for (double v : importance) {
    if (!(v >= 0.0 && v <= 3.0)) throw Error("soft score table: importance outside [0,3]");
  }
}

MarkovMatrix::MarkovMatrix(GeoMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw Error("Markov matrix must be square");
  const Vector sums = m_.column_sums();
  for (Eigen::Index j = 0; j < sums.size(); ++j) {
    if (std::abs(sums[j] - 1.0) > 1e-9) {
      throw Error("Markov matrix column " + std::to_string(j) + " sums to " + std::to_string(sums[j]));
    }
  }
  const bool negative = m_.is_sparse()
                            ? (m_.sparse().nonZeros() > 0 &&
                               Eigen::Map<const Vector>(m_.sparse().valuePtr(), m_.sparse().nonZeros()).minCoeff() < 0.0)
                            : (m_.dense().size() > 0 && m_.dense().minCoeff() < 0.0);
  if (negative) throw Error("Markov matrix has negative entries");
}

DiagonalWeights::DiagonalWeights(Vector w) : w_(std::move(w)) {
  for (Eigen::Index i = 0; i < w_.size(); ++i) {
    if (!std::isfinite(w_[i]) || w_[i] < 0.0) throw Error("diagonal weights must be nonnegative");
  }
}

SimilarityMatrix::SimilarityMatrix(DenseMatrix t, bool psd_certified)
    : t_(std::move(t)), psd_certified_(psd_certified) {
  if (t_.rows() != t_.cols()) throw Error("similarity matrix must be square");
  if (!t_.allFinite()) throw Error("similarity matrix has non-finite entries");
  const double scale = std::max(1.0, t_.size() ? t_.cwiseAbs().maxCoeff() : 0.0);
  if (t_.size() && (t_ - t_.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw Error("asymmetric similarity matrix");
  }
}

SimilarityMatrix SimilarityMatrix::certify() const {
  if (t_.size() == 0) return SimilarityMatrix(t_, true);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(t_, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo < -1e-8 * std::max(hi, 0.0)) throw Error("T not PSD");
  return SimilarityMatrix(t_, true);
}

CombinationWeights::CombinationWeights(std::vector<double> alpha) : alpha_(std::move(alpha)) {
  if (alpha_.empty()) throw Error("combination weights are empty");
  double sum = 0.0;
  for (double a : alpha_) {
    if (!std::isfinite(a) || a < 0.0) throw Error("combination weights must be nonnegative");
    sum += a;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error("combination weights must sum to 1");
}

namespace {

std::vector<std::size_t> cluster_sizes(const WordClustering& c) {
  std::vector<std::size_t> sizes;
  for (const auto& cl : c.clusters()) sizes.push_back(cl.members.size());
  return sizes;
}

}  // namespace

MarkovMatrix build_manual_R(const WordClustering& clustering, const GeometryParams& params) {
  params.validate(clustering.num_clusters());
  const auto n = static_cast<Eigen::Index>(clustering.num_words());
  const std::size_t r = clustering.num_clusters();
  const std::vector<std::size_t> sizes = cluster_sizes(clustering);

  // Column sums depend only on the column's cluster.
  std::vector<double> col_sum(r, 0.0);
  for (std::size_t b = 0; b < r; ++b) {
    double s = params.rho_self[b];
    for (std::size_t a = 0; a < r; ++a) {
      const double count = static_cast<double>(a == b ? sizes[a] - (sizes[a] > 0 ? 1 : 0) : sizes[a]);
      s += count * params.pair(a, b);
    }
    col_sum[b] = s;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto w = static_cast<corpus::TermId>(j);
    if (!(col_sum[clustering.cluster_of(w)] > 0.0)) {
      throw Error("isolated word column: '" + clustering.word(w) + "'");
    }
  }

  if (n <= kDenseLimit) {
    DenseMatrix R(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const std::size_t b = clustering.cluster_of(static_cast<corpus::TermId>(j));
      for (Eigen::Index i = 0; i < n; ++i) {
        const std::size_t a = clustering.cluster_of(static_cast<corpus::TermId>(i));
        const double v = i == j ? params.rho_self[a] : params.pair(a, b);
        R(i, j) = v / col_sum[b];
      }
    }
    return MarkovMatrix(GeoMatrix(std::move(R)));
  }

  std::vector<Eigen::Triplet<double>> triplets;
  for (Eigen::Index j = 0; j < n; ++j) {
    const std::size_t b = clustering.cluster_of(static_cast<corpus::TermId>(j));
    triplets.emplace_back(j, j, params.rho_self[b] / col_sum[b]);
    for (std::size_t a = 0; a < r; ++a) {
      const double v = params.pair(a, b) / col_sum[b];
      if (v < kSparseDropThreshold) continue;
      for (corpus::TermId i : clustering.clusters()[a].members) {
        if (static_cast<Eigen::Index>(i) != j) triplets.emplace_back(i, j, v);
      }
    }
  }
  SparseMatrix R(n, n);
  R.setFromTriplets(triplets.begin(), triplets.end());
  R.prune(0.0);
  // Renormalize so dropped mass does not break column-stochasticity.
  Vector sums = Vector::Zero(n);
  for (Eigen::Index j = 0; j < R.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(R, j); it; ++it) sums[j] += it.value();
  }
  for (Eigen::Index j = 0; j < R.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(R, j); it; ++it) it.valueRef() /= sums[j];
  }
  return MarkovMatrix(GeoMatrix(std::move(R)));
}

DiagonalWeights build_manual_D(const WordClustering& clustering, const GeometryParams& params) {
  params.validate(clustering.num_clusters());
  Vector d(static_cast<Eigen::Index>(clustering.num_words()));
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    d[i] = params.importance[clustering.cluster_of(static_cast<corpus::TermId>(i))];
  }
  return DiagonalWeights(std::move(d));
}

MarkovMatrix build_soft_R(const SoftScoreSpec& spec) {
  spec.validate();
  const auto n = static_cast<Eigen::Index>(spec.scores.size());
  const auto k = static_cast<Eigen::Index>(spec.cluster_names.size());
  DenseMatrix S = DenseMatrix::Zero(n, k);
  bool any_nonzero = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < k; ++c) S(i, c) = spec.scores[i][c];
    const double norm = S.row(i).norm();
    if (norm > 0.0) {
      S.row(i) /= norm;
      any_nonzero = true;
    }
  }
  if (!any_nonzero) throw Error("degenerate score table");

  auto finish_column = [&](Eigen::Index j, Vector& col) {
    col[j] = spec.rho_self;
    const double sum = col.sum();
    if (!(sum > 0.0)) throw Error("isolated word column: index " + std::to_string(j));
    col /= sum;
  };

  if (n <= kDenseLimit) {
    DenseMatrix R = S * S.transpose();
    for (Eigen::Index j = 0; j < n; ++j) {
      Vector col = R.col(j).cwiseMax(0.0);
      finish_column(j, col);
      R.col(j) = col;
    }
    return MarkovMatrix(GeoMatrix(std::move(R)));
  }

  std::vector<Eigen::Triplet<double>> triplets;
  for (Eigen::Index j = 0; j < n; ++j) {
    Vector col = (S * S.row(j).transpose()).cwiseMax(0.0);
    finish_column(j, col);
    double kept = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (col[i] >= kSparseDropThreshold) kept += col[i];
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (col[i] >= kSparseDropThreshold) triplets.emplace_back(i, j, col[i] / kept);
    }
  }
  SparseMatrix R(n, n);
  R.setFromTriplets(triplets.begin(), triplets.end());
  return MarkovMatrix(GeoMatrix(std::move(R)));
}

DiagonalWeights build_soft_D(const SoftScoreSpec& spec) {
  spec.validate();
  return DiagonalWeights(Eigen::Map<const Vector>(spec.importance.data(),
                                                  static_cast<Eigen::Index>(spec.importance.size())));
}

TransformMatrix compose_H(const MarkovMatrix& R, const DiagonalWeights& D, Provenance provenance) {
  if (R.size() != D.size()) throw Error("R and D dimensions disagree");
  const GeoMatrix& m = R.matrix();
  if (m.is_sparse()) {
    SparseMatrix H = m.sparse() * D.values().asDiagonal();
    H.prune(0.0);
    return {GeoMatrix(std::move(H)), provenance};
  }
  DenseMatrix H = m.dense() * D.values().asDiagonal();
  return {GeoMatrix(std::move(H)), provenance};
}

namespace {

struct ClampedEigen {
  Vector values;        // clamped, descending
  DenseMatrix vectors;  // columns aligned with values
};

ClampedEigen clamped_eigen(const SimilarityMatrix& T) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(T.values());
  if (es.info() != Eigen::Success) throw Error("eigendecomposition of similarity matrix failed");
  const Eigen::Index n = T.size();
  ClampedEigen out{Vector(n), DenseMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = n - 1 - k;
    out.values[k] = std::max(es.eigenvalues()[src], 0.0);
    Vector v = es.eigenvectors().col(src);
    // Deterministic sign: the largest-magnitude component is positive.
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0.0) v = -v;
    out.vectors.col(k) = v;
  }
  return out;
}

}  // namespace

TransformMatrix factorize_T(const SimilarityMatrix& T, Provenance provenance) {
  const Eigen::Index n = T.size();
  if (n == 0) return {GeoMatrix(DenseMatrix(0, 0)), provenance};
  const ClampedEigen e = clamped_eigen(T);
  const double top = e.values[0];
  const double tol = top * static_cast<double>(n) * std::numeric_limits<double>::epsilon();
  Eigen::Index rank = 0;
  while (rank < n && e.values[rank] > tol) ++rank;
  DenseMatrix H(rank, n);
  for (Eigen::Index k = 0; k < rank; ++k) {
    H.row(k) = std::sqrt(e.values[k]) * e.vectors.col(k).transpose();
  }
  return {GeoMatrix(std::move(H)), provenance};
}

TransformMatrix symmetric_factor(const SimilarityMatrix& T, Provenance provenance) {
  if (T.size() == 0) return {GeoMatrix(DenseMatrix(0, 0)), provenance};
  const ClampedEigen e = clamped_eigen(T);
  DenseMatrix H = e.vectors * e.values.cwiseSqrt().asDiagonal() * e.vectors.transpose();
  return {GeoMatrix(std::move(H)), provenance};
}

SimilarityMatrix clamp_psd(const SimilarityMatrix& T) {
  if (T.size() == 0) return SimilarityMatrix(T.values(), true);
  const ClampedEigen e = clamped_eigen(T);
  DenseMatrix out = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
  out = 0.5 * (out + out.transpose()).eval();
  return SimilarityMatrix(std::move(out), true);
}

TransformMatrix convex_combination(std::span<const TransformMatrix> components,
                                   const CombinationWeights& alpha) {
  if (components.empty()) throw Error("convex combination of zero components");
  if (alpha.size() != components.size()) throw Error("combination weight count does not match component count");
  const Eigen::Index n = components.front().cols();
  Eigen::Index m = 0;
  bool all_sparse = true;
  for (const TransformMatrix& H : components) {
    if (H.cols() != n) throw Error("combination components differ in column count");
    m = std::max(m, H.rows());
    all_sparse = all_sparse && H.matrix.is_sparse();
  }

  if (all_sparse) {
    SparseMatrix sum(m, n);
    for (std::size_t i = 0; i < components.size(); ++i) {
      if (alpha.values()[i] == 0.0) continue;
      SparseMatrix padded = components[i].matrix.sparse();
      padded.conservativeResize(m, n);
      sum += alpha.values()[i] * padded;
    }
    sum.prune(0.0);
    return {GeoMatrix(std::move(sum)), Provenance::combination};
  }

  DenseMatrix sum = DenseMatrix::Zero(m, n);
  for (std::size_t i = 0; i < components.size(); ++i) {
    const double a = alpha.values()[i];
    if (a == 0.0) continue;
    const GeoMatrix& H = components[i].matrix;
    if (H.is_sparse()) {
      sum.topRows(H.rows()) += a * DenseMatrix(H.sparse());
    } else {
      sum.topRows(H.rows()) += a * H.dense();
    }
  }
  return {GeoMatrix(std::move(sum)), Provenance::combination};
}

TransformMatrix identity_transform(std::size_t vocab_size) {
  return {GeoMatrix::identity(static_cast<Eigen::Index>(vocab_size)), Provenance::identity};
}

Vector tf_vector(const corpus::SparseCounts& row, std::size_t vocab_size, TfNormalization normalization) {
  Vector x = Vector::Zero(static_cast<Eigen::Index>(vocab_size));
  const double total = static_cast<double>(row.total());
  for (const auto& [term, count] : row.entries) {
    x[term] = normalization == TfNormalization::l1 ? count / total : static_cast<double>(count);
  }
  return x;
}

DenseMatrix transform(const TransformMatrix& H, const corpus::CountMatrix& docs,
                      TfNormalization normalization) {
  if (H.cols() != static_cast<Eigen::Index>(docs.vocab.size())) {
    throw Error("geometry has " + std::to_string(H.cols()) + " columns but the vocabulary has " +
                std::to_string(docs.vocab.size()) + " words");
  }
  const auto n_docs = static_cast<Eigen::Index>(docs.num_documents());
  DenseMatrix out = DenseMatrix::Zero(n_docs, H.rows());
  Vector y(H.rows());
  for (Eigen::Index d = 0; d < n_docs; ++d) {
    const corpus::SparseCounts& row = docs.rows[d];
    const double total = static_cast<double>(row.total());
    y.setZero();
    for (const auto& [term, count] : row.entries) {
      const double w = normalization == TfNormalization::l1 ? count / total : static_cast<double>(count);
      H.matrix.add_column(term, w, y);
    }
    out.row(d) = y.transpose();
  }
  return out;
}

double distance(const SimilarityMatrix& T, const Vector& x, const Vector& y) {
  if (!T.psd_certified()) throw Error("T not PSD-certified");
  if (x.size() != T.size() || y.size() != T.size()) throw Error("vector size does not match similarity matrix");
  const Vector d = x - y;
  const double q = d.dot(T.values() * d);
  if (q < -1e-8) throw Error("T not PSD");
  return std::sqrt(std::max(q, 0.0));
}

std::map<std::pair<std::size_t, std::size_t>, double> tree_affinities(
    const ClusterTree& tree, const WordClustering& clustering, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw Error("tree beta must lie in (0,1)");
  // Flatten into an undirected adjacency list.
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> adj;
  std::deque<std::pair<const ClusterTree*, std::size_t>> stack;
  names.push_back(tree.name);
  adj.emplace_back();
  stack.emplace_back(&tree, 0);
  while (!stack.empty()) {
    auto [node, id] = stack.back();
    stack.pop_back();
    for (const ClusterTree& child : node->children) {
      const std::size_t cid = names.size();
      names.push_back(child.name);
      adj.emplace_back();
      adj[id].push_back(cid);
      adj[cid].push_back(id);
      stack.emplace_back(&child, cid);
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> cluster_nodes;  // (cluster, node)
  for (std::size_t node = 0; node < names.size(); ++node) {
    if (auto a = clustering.find_cluster(names[node])) cluster_nodes.emplace_back(*a, node);
  }

  std::map<std::pair<std::size_t, std::size_t>, double> out;
  for (const auto& [a, src] : cluster_nodes) {
    std::vector<long> dist(names.size(), -1);
    std::deque<std::size_t> queue{src};
    dist[src] = 0;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v : adj[u]) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      }
    }
    for (const auto& [b, dst] : cluster_nodes) {
      if (b < a) continue;
      out[{a, b}] = std::pow(beta, static_cast<double>(dist[dst]));
    }
  }
  return out;
}

}  // namespace lingeo::geometry
