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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lingeo/corpus.hpp"
#include "lingeo/matrix.hpp"

namespace lingeo::geometry {

enum class Provenance { identity, manual, soft, diffusion, ngram, taxonomy, combination, imported };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view s);

// A named partition of the vocabulary indices.
class WordClustering {
 public:
  struct Cluster {
    std::string name;
    std::vector<corpus::TermId> members;
  };

  // Throws unless every index in [0, words.size()) is in exactly one cluster
  // and names are unique.
  WordClustering(std::vector<std::string> words, std::vector<Cluster> clusters);

  std::size_t num_words() const { return words_.size(); }
  std::size_t num_clusters() const { return clusters_.size(); }
  const std::vector<Cluster>& clusters() const { return clusters_; }
  std::size_t cluster_of(corpus::TermId word) const { return assignment_[word]; }
  const std::string& word(corpus::TermId id) const { return words_[id]; }
  std::optional<std::size_t> find_cluster(std::string_view name) const;

 private:
  std::vector<std::string> words_;
  std::vector<Cluster> clusters_;
  std::vector<std::size_t> assignment_;
};

// Blend and importance parameters for a WordClustering. rho_pair is keyed by
// unordered cluster pair (smaller index first); missing pairs are 0.
struct GeometryParams {
  std::vector<double> rho_self;
  std::map<std::pair<std::size_t, std::size_t>, double> rho_pair;
  std::vector<double> importance;

  double pair(std::size_t a, std::size_t b) const;
  void set_pair(std::size_t a, std::size_t b, double value);
  void validate(std::size_t num_clusters) const;
};

// Per-word relatedness scores in [0,2] over a fixed cluster list plus a
// per-word importance in [0,3]. Rows are aligned with the vocabulary.
struct SoftScoreSpec {
  std::vector<std::string> cluster_names;
  std::vector<std::vector<double>> scores;
  std::vector<double> importance;
  double rho_self = 1.0;

  void validate() const;
};

// Nonnegative matrix with unit column sums.
class MarkovMatrix {
 public:
  // Throws if an entry is negative or a column sum is off by more than 1e-9.
  explicit MarkovMatrix(GeoMatrix m);
  const GeoMatrix& matrix() const { return m_; }
  Eigen::Index size() const { return m_.cols(); }

 private:
  GeoMatrix m_;
};

class DiagonalWeights {
 public:
  explicit DiagonalWeights(Vector w);
  const Vector& values() const { return w_; }
  Eigen::Index size() const { return w_.size(); }

 private:
  Vector w_;
};

// The document transform x -> Hx. Column count equals the vocabulary size.
struct TransformMatrix {
  GeoMatrix matrix;
  Provenance provenance = Provenance::identity;

  Eigen::Index rows() const { return matrix.rows(); }
  Eigen::Index cols() const { return matrix.cols(); }
};

// Symmetric word-similarity matrix T defining d_T.
class SimilarityMatrix {
 public:
  // Throws "asymmetric similarity matrix" when |T - T^T| exceeds 1e-9
  // (relative to the largest magnitude entry, floor 1).
  explicit SimilarityMatrix(DenseMatrix t, bool psd_certified = false);

  const DenseMatrix& values() const { return t_; }
  bool psd_certified() const { return psd_certified_; }
  Eigen::Index size() const { return t_.rows(); }

  // Checks the smallest eigenvalue against -1e-8 * largest and returns a
  // certified copy; throws "T not PSD" otherwise.
  SimilarityMatrix certify() const;

 private:
  DenseMatrix t_;
  bool psd_certified_ = false;
};

class CombinationWeights {
 public:
  // Nonnegative, summing to 1 within 1e-9.
  explicit CombinationWeights(std::vector<double> alpha);
  const std::vector<double>& values() const { return alpha_; }
  std::size_t size() const { return alpha_.size(); }

 private:
  std::vector<double> alpha_;
};

enum class TfNormalization { l1, raw };

MarkovMatrix build_manual_R(const WordClustering& clustering, const GeometryParams& params);
DiagonalWeights build_manual_D(const WordClustering& clustering, const GeometryParams& params);
MarkovMatrix build_soft_R(const SoftScoreSpec& spec);
DiagonalWeights build_soft_D(const SoftScoreSpec& spec);
TransformMatrix compose_H(const MarkovMatrix& R, const DiagonalWeights& D,
                          Provenance provenance = Provenance::manual);

// T = V diag(lambda) V^T with negative eigenvalues clamped to zero; returns
// H = diag(sqrt(lambda)) V^T restricted to positive eigenvalues, rows ordered
// by decreasing eigenvalue.
TransformMatrix factorize_T(const SimilarityMatrix& T, Provenance provenance = Provenance::imported);

// Principal square root H = V diag(sqrt(lambda)) V^T of the clamped T. Rows
// stay indexed by vocabulary words, which keeps convex combinations of
// factored geometries aligned word by word.
TransformMatrix symmetric_factor(const SimilarityMatrix& T, Provenance provenance = Provenance::imported);

// Nearest PSD matrix in Frobenius norm (eigenvalue clamping), certified.
SimilarityMatrix clamp_psd(const SimilarityMatrix& T);

// H* = sum_i alpha_i H_i with row-deficient components zero padded.
TransformMatrix convex_combination(std::span<const TransformMatrix> components,
                                   const CombinationWeights& alpha);

TransformMatrix identity_transform(std::size_t vocab_size);

// Dense rows H x_d for every document, optionally after L1 normalization.
DenseMatrix transform(const TransformMatrix& H, const corpus::CountMatrix& docs,
                      TfNormalization normalization = TfNormalization::l1);

// Dense tf vector of one document.
Vector tf_vector(const corpus::SparseCounts& row, std::size_t vocab_size,
                 TfNormalization normalization = TfNormalization::l1);

// sqrt((x-y)^T T (x-y)); T must be PSD-certified.
double distance(const SimilarityMatrix& T, const Vector& x, const Vector& y);

// Block-constant rho derivation from a cluster tree: rho_ab = beta^t(a,b)
// with t the tree edge distance between the nodes naming clusters a and b.
struct ClusterTree {
  std::string name;
  std::vector<ClusterTree> children;
};
std::map<std::pair<std::size_t, std::size_t>, double> tree_affinities(
    const ClusterTree& tree, const WordClustering& clustering, double beta);

}  // namespace lingeo::geometry
