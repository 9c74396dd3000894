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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lingeo/error.hpp"
#include "lingeo/geometry.hpp"

using namespace lingeo;
using namespace lingeo::geometry;

namespace {

WordClustering five_word_clusters() {
  return WordClustering({"v1", "v2", "v3", "v4", "v5"}, {{"c1", {0, 1, 2}}, {"c2", {3, 4}}});
}

GeometryParams five_word_params() {
  GeometryParams p;
  p.rho_self = {0.8, 0.9};
  p.importance = {5.0, 3.0};
  p.set_pair(0, 0, 0.1);
  p.set_pair(1, 1, 0.1);
  return p;
}

DenseMatrix five_word_R() {
  DenseMatrix R(5, 5);
  R << 0.8, 0.1, 0.1, 0, 0,  //
      0.1, 0.8, 0.1, 0, 0,   //
      0.1, 0.1, 0.8, 0, 0,   //
      0, 0, 0, 0.9, 0.1,     //
      0, 0, 0, 0.1, 0.9;
  return R;
}

corpus::CountMatrix counts(std::size_t n, std::vector<std::vector<std::pair<corpus::TermId, std::uint32_t>>> rows) {
  corpus::CountMatrix m;
  std::vector<std::string> words;
  for (std::size_t i = 0; i < n; ++i) words.push_back("w" + std::to_string(i));
  m.vocab = corpus::Vocabulary(words);
  for (std::size_t d = 0; d < rows.size(); ++d) {
    m.rows.push_back({rows[d]});
    m.ids.push_back("d" + std::to_string(d));
  }
  return m;
}

DenseMatrix random_psd(int n, int rank, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  DenseMatrix H0(rank, n);
  for (int i = 0; i < rank; ++i) {
    for (int j = 0; j < n; ++j) H0(i, j) = g(rng);
  }
  return H0.transpose() * H0;
}

double max_abs(const DenseMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(ManualR, FiveWord) {
  const MarkovMatrix R = build_manual_R(five_word_clusters(), five_word_params());
  EXPECT_LE(max_abs(R.matrix().to_dense() - five_word_R()), 1e-15);
}

TEST(ManualR, SingleClusterSelfOnlyIsIdentity) {
  WordClustering c({"a", "b", "c"}, {{"all", {0, 1, 2}}});
  GeometryParams p;
  p.rho_self = {1.0};
  p.importance = {1.0};
  EXPECT_EQ(build_manual_R(c, p).matrix().to_dense(), DenseMatrix::Identity(3, 3));
}

TEST(ManualR, TwoWordsFullyBlended) {
  WordClustering c({"a", "b"}, {{"all", {0, 1}}});
  GeometryParams p;
  p.rho_self = {1.0};
  p.importance = {1.0};
  p.set_pair(0, 0, 1.0);
  EXPECT_EQ(build_manual_R(c, p).matrix().to_dense(), DenseMatrix::Constant(2, 2, 0.5));
}

TEST(ManualR, IsolatedColumnNamesWord) {
  WordClustering c({"a", "lonely"}, {{"x", {0}}, {"y", {1}}});
  GeometryParams p;
  p.rho_self = {1.0, 0.0};
  p.importance = {1.0, 1.0};
  try {
    build_manual_R(c, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("isolated word column"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("lonely"), std::string::npos);
  }
}

TEST(ManualR, BlockDiagonalWithoutCrossAffinity) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  WordClustering c({"a", "b", "c", "d", "e", "f"}, {{"x", {0, 1}}, {"y", {2, 3, 4}}, {"z", {5}}});
  GeometryParams p;
  p.rho_self = {u(rng) + 0.1, u(rng) + 0.1, u(rng) + 0.1};
  p.importance = {1, 1, 1};
  for (std::size_t a = 0; a < 3; ++a) p.set_pair(a, a, u(rng));
  const DenseMatrix R = build_manual_R(c, p).matrix().to_dense();
  for (corpus::TermId i = 0; i < 6; ++i) {
    for (corpus::TermId j = 0; j < 6; ++j) {
      if (c.cluster_of(i) != c.cluster_of(j)) EXPECT_EQ(R(i, j), 0.0);
    }
  }
}

TEST(ManualR, ColumnSumsOverRandomSpecs) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + rng() % 20;
    const std::size_t r = 1 + rng() % std::min<std::size_t>(n, 5);
    std::vector<std::string> words;
    std::vector<WordClustering::Cluster> clusters(r);
    for (std::size_t a = 0; a < r; ++a) clusters[a].name = "c" + std::to_string(a);
    for (std::size_t i = 0; i < n; ++i) {
      words.push_back("w" + std::to_string(i));
      clusters[i < r ? i : rng() % r].members.push_back(static_cast<corpus::TermId>(i));
    }
    GeometryParams p;
    for (std::size_t a = 0; a < r; ++a) {
      p.rho_self.push_back(u(rng) + 0.01);
      p.importance.push_back(u(rng));
      for (std::size_t b = a; b < r; ++b) p.set_pair(a, b, u(rng));
    }
    const MarkovMatrix R = build_manual_R(WordClustering(words, clusters), p);
    const Vector sums = R.matrix().column_sums();
    for (Eigen::Index j = 0; j < sums.size(); ++j) EXPECT_NEAR(sums[j], 1.0, 1e-9);
    EXPECT_GE(R.matrix().to_dense().minCoeff(), 0.0);
  }
}

TEST(ManualR, SparseAboveDenseLimit) {
  const std::size_t n = static_cast<std::size_t>(kDenseLimit) + 200;
  std::vector<std::string> words;
  std::vector<WordClustering::Cluster> clusters;
  for (std::size_t i = 0; i < n; ++i) {
    words.push_back("w" + std::to_string(i));
    if (i % 10 == 0) clusters.push_back({"c" + std::to_string(i / 10), {}});
    clusters.back().members.push_back(static_cast<corpus::TermId>(i));
  }
  GeometryParams p;
  p.rho_self.assign(clusters.size(), 0.5);
  p.importance.assign(clusters.size(), 1.0);
  for (std::size_t a = 0; a < clusters.size(); ++a) p.set_pair(a, a, 0.05);
  const MarkovMatrix R = build_manual_R(WordClustering(words, clusters), p);
  ASSERT_TRUE(R.matrix().is_sparse());
  EXPECT_EQ(R.matrix().sparse().nonZeros(), static_cast<Eigen::Index>(n * 10));
  const Vector sums = R.matrix().column_sums();
  EXPECT_LE((sums.array() - 1.0).abs().maxCoeff(), 1e-9);
  EXPECT_NEAR(R.matrix().coeff(0, 0), 0.5 / 0.95, 1e-12);
}

TEST(ManualD, FiveWord) {
  const DiagonalWeights D = build_manual_D(five_word_clusters(), five_word_params());
  EXPECT_EQ(D.values(), (Vector(5) << 5, 5, 5, 3, 3).finished());
}

TEST(ManualD, UnitImportanceIsIdentity) {
  GeometryParams p = five_word_params();
  p.importance = {1.0, 1.0};
  EXPECT_EQ(build_manual_D(five_word_clusters(), p).values(), Vector::Ones(5));
}

TEST(ManualD, ZeroImportanceAnnihilatesColumns) {
  GeometryParams p = five_word_params();
  p.importance = {1.0, 0.0};
  const auto clusters = five_word_clusters();
  const TransformMatrix H = compose_H(build_manual_R(clusters, p), build_manual_D(clusters, p));
  const DenseMatrix h = H.matrix.to_dense();
  EXPECT_EQ(h.col(3).norm(), 0.0);
  EXPECT_EQ(h.col(4).norm(), 0.0);
  EXPECT_GT(h.col(0).norm(), 0.0);
}

TEST(ComposeH, FiveWord) {
  const auto clusters = five_word_clusters();
  const auto p = five_word_params();
  const TransformMatrix H = compose_H(build_manual_R(clusters, p), build_manual_D(clusters, p));
  DenseMatrix expected = five_word_R();
  expected.leftCols(3) *= 5.0;
  expected.rightCols(2) *= 3.0;
  EXPECT_LE(max_abs(H.matrix.to_dense() - expected), 1e-14);
  EXPECT_EQ(H.provenance, Provenance::manual);
}

TEST(ComposeH, IdentityD) {
  const auto clusters = five_word_clusters();
  GeometryParams p = five_word_params();
  p.importance = {1.0, 1.0};
  const MarkovMatrix R = build_manual_R(clusters, p);
  EXPECT_EQ(compose_H(R, build_manual_D(clusters, p)).matrix.to_dense(), R.matrix().to_dense());
}

TEST(ComposeH, IdentityR) {
  const MarkovMatrix R(GeoMatrix(DenseMatrix(DenseMatrix::Identity(2, 2))));
  const DiagonalWeights D((Vector(2) << 2, 3).finished());
  EXPECT_EQ(compose_H(R, D).matrix.to_dense(), (DenseMatrix(2, 2) << 2, 0, 0, 3).finished());
}

TEST(SoftR, IdenticalScores) {
  SoftScoreSpec s{{"x", "y"}, {{1.0, 2.0}, {1.0, 2.0}}, {1.0, 1.0}, 1.0};
  EXPECT_LE(max_abs(build_soft_R(s).matrix().to_dense() - DenseMatrix::Constant(2, 2, 0.5)), 1e-15);
}

TEST(SoftR, OrthogonalScores) {
  SoftScoreSpec s{{"x", "y"}, {{1.0, 0.0}, {0.0, 2.0}}, {1.0, 1.0}, 1.0};
  EXPECT_EQ(build_soft_R(s).matrix().to_dense(), DenseMatrix::Identity(2, 2));
}

TEST(SoftR, ZeroScoresKeepIndicatorColumn) {
  SoftScoreSpec s{{"x"}, {{1.0}, {2.0}, {0.0}}, {1.0, 1.0, 1.0}, 1.0};
  const DenseMatrix R = build_soft_R(s).matrix().to_dense();
  EXPECT_EQ(R.col(2), (Vector(3) << 0, 0, 1).finished());
  EXPECT_EQ(R(2, 0), 0.0);
}

TEST(SoftR, DegenerateTable) {
  SoftScoreSpec s{{"x"}, {{0.0}, {0.0}}, {1.0, 1.0}, 1.0};
  EXPECT_THROW(build_soft_R(s), Error);
}

TEST(SoftR, RangeValidation) {
  SoftScoreSpec s{{"x"}, {{2.5}}, {1.0}, 1.0};
  EXPECT_THROW(build_soft_R(s), Error);
  SoftScoreSpec t{{"x"}, {{1.0}}, {3.5}, 1.0};
  EXPECT_THROW(build_soft_D(t), Error);
}

TEST(Similarity, RejectsAsymmetric) {
  try {
    SimilarityMatrix((DenseMatrix(2, 2) << 1, 0.5, 0.4, 1).finished());
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "asymmetric similarity matrix");
  }
}

TEST(FactorizeT, Identity) {
  const TransformMatrix H = factorize_T(SimilarityMatrix(DenseMatrix::Identity(4, 4)));
  const DenseMatrix h = H.matrix.to_dense();
  EXPECT_LE(max_abs(h.transpose() * h - DenseMatrix::Identity(4, 4)), 1e-12);
  EXPECT_LE(max_abs(h.cwiseAbs() * DenseMatrix::Ones(4, 1) - DenseMatrix::Ones(4, 1)), 1e-12);
}

TEST(FactorizeT, LowRankReconstruction) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const DenseMatrix T = random_psd(5, 3, rng);
    const DenseMatrix h = factorize_T(SimilarityMatrix(T)).matrix.to_dense();
    EXPECT_EQ(h.rows(), 3);
    EXPECT_LE((h.transpose() * h - T).norm() / T.norm(), 1e-6);
  }
}

TEST(FactorizeT, IndefiniteIsClamped) {
  const DenseMatrix h = factorize_T(SimilarityMatrix((DenseMatrix(2, 2) << 1, 2, 2, 1).finished())).matrix.to_dense();
  EXPECT_EQ(h.rows(), 1);
  EXPECT_LE(max_abs(h.transpose() * h - DenseMatrix::Constant(2, 2, 1.5)), 1e-12);
}

TEST(SymmetricFactor, SquareRoot) {
  std::mt19937_64 rng(9);
  const DenseMatrix T = random_psd(6, 6, rng);
  const DenseMatrix h = symmetric_factor(SimilarityMatrix(T)).matrix.to_dense();
  EXPECT_LE(max_abs(h - h.transpose()), 1e-9);
  EXPECT_LE((h * h - T).norm() / T.norm(), 1e-9);
}

TEST(ClampPsd, CertifiesResult) {
  const SimilarityMatrix c = clamp_psd(SimilarityMatrix((DenseMatrix(2, 2) << 1, 2, 2, 1).finished()));
  EXPECT_TRUE(c.psd_certified());
  EXPECT_LE(max_abs(c.values() - DenseMatrix::Constant(2, 2, 1.5)), 1e-12);
  EXPECT_THROW(SimilarityMatrix((DenseMatrix(2, 2) << 1, 2, 2, 1).finished()).certify(), Error);
}

TEST(Convex, Vertex) {
  std::mt19937_64 rng(1);
  std::vector<TransformMatrix> parts;
  for (int i = 0; i < 4; ++i) parts.push_back({GeoMatrix(DenseMatrix(random_psd(3, 3, rng))), Provenance::imported});
  const TransformMatrix H = convex_combination(parts, CombinationWeights({1, 0, 0, 0}));
  EXPECT_EQ(H.matrix.to_dense(), parts[0].matrix.to_dense());
  EXPECT_EQ(H.provenance, Provenance::combination);
}

TEST(Convex, IdenticalComponentsFixedPoint) {
  std::mt19937_64 rng(2);
  const TransformMatrix A{GeoMatrix(DenseMatrix(random_psd(3, 3, rng))), Provenance::imported};
  const std::vector<TransformMatrix> parts{A, A, A};
  const TransformMatrix H = convex_combination(parts, CombinationWeights({0.2, 0.3, 0.5}));
  EXPECT_LE(max_abs(H.matrix.to_dense() - A.matrix.to_dense()), 1e-12);
}

TEST(Convex, ScaledIdentities) {
  const std::vector<TransformMatrix> parts{{GeoMatrix::identity(2), Provenance::identity},
                                          {GeoMatrix(DenseMatrix(2.0 * DenseMatrix::Identity(2, 2))), Provenance::imported}};
  EXPECT_EQ(convex_combination(parts, CombinationWeights({0.5, 0.5})).matrix.to_dense(), 1.5 * DenseMatrix::Identity(2, 2));
}

TEST(Convex, ColumnMismatchThrows) {
  const std::vector<TransformMatrix> parts{{GeoMatrix::identity(2), Provenance::identity},
                                          {GeoMatrix::identity(3), Provenance::identity}};
  EXPECT_THROW(convex_combination(parts, CombinationWeights({0.5, 0.5})), Error);
}

TEST(Convex, ZeroPadsShortFactors) {
  const std::vector<TransformMatrix> parts{{GeoMatrix(DenseMatrix(DenseMatrix::Ones(1, 2))), Provenance::imported},
                                          {GeoMatrix::identity(2), Provenance::identity}};
  const DenseMatrix H = convex_combination(parts, CombinationWeights({0.5, 0.5})).matrix.to_dense();
  EXPECT_EQ(H, (DenseMatrix(2, 2) << 1.0, 0.5, 0.0, 0.5).finished());
}

TEST(Convex, EntrywiseBounds) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<TransformMatrix> parts;
  for (int i = 0; i < 3; ++i) parts.push_back({GeoMatrix(DenseMatrix(DenseMatrix::Random(4, 4))), Provenance::imported});
  for (int trial = 0; trial < 20; ++trial) {
    double a = u(rng), b = u(rng) * (1 - a);
    const DenseMatrix H = convex_combination(parts, CombinationWeights({a, b, 1 - a - b})).matrix.to_dense();
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        double lo = 1e300, hi = -1e300;
        for (const auto& p : parts) {
          lo = std::min(lo, p.matrix.coeff(i, j));
          hi = std::max(hi, p.matrix.coeff(i, j));
        }
        EXPECT_GE(H(i, j), lo - 1e-12);
        EXPECT_LE(H(i, j), hi + 1e-12);
      }
    }
  }
}

TEST(CombinationWeights, Validation) {
  EXPECT_THROW(CombinationWeights({0.5, 0.6}), Error);
  EXPECT_THROW(CombinationWeights({1.5, -0.5}), Error);
  EXPECT_NO_THROW(CombinationWeights({0.3, 0.4, 0.1, 0.2}));
}

TEST(Transform, IdentityPassesThrough) {
  const auto m = counts(3, {{{0, 2}, {2, 1}}, {{1, 4}}});
  const DenseMatrix raw = transform(identity_transform(3), m, TfNormalization::raw);
  EXPECT_EQ(raw, (DenseMatrix(2, 3) << 2, 0, 1, 0, 4, 0).finished());
  const DenseMatrix rel = transform(identity_transform(3), m);
  EXPECT_NEAR(rel(0, 0), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(rel(1, 1), 1.0);
}

TEST(Transform, ZeroColumnIgnoresWord) {
  DenseMatrix h = DenseMatrix::Identity(3, 3);
  h.col(1).setZero();
  const TransformMatrix H{GeoMatrix(h), Provenance::imported};
  const auto a = counts(3, {{{0, 1}, {1, 5}}});
  const auto b = counts(3, {{{0, 1}}});
  EXPECT_EQ(transform(H, a, TfNormalization::raw), transform(H, b, TfNormalization::raw));
}

TEST(Transform, FiveWordUnitVector) {
  const auto clusters = five_word_clusters();
  const auto p = five_word_params();
  const TransformMatrix H = compose_H(build_manual_R(clusters, p), build_manual_D(clusters, p));
  const DenseMatrix out = transform(H, counts(5, {{{0, 1}}}));
  const Vector expected = 5.0 * (Vector(5) << 0.8, 0.1, 0.1, 0, 0).finished();
  EXPECT_LE((out.row(0).transpose() - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Transform, ColumnMismatchThrows) { EXPECT_THROW(transform(identity_transform(4), counts(3, {{{0, 1}}})), Error); }

TEST(Distance, Examples) {
  const SimilarityMatrix I = SimilarityMatrix(DenseMatrix::Identity(3, 3)).certify();
  const Vector x = (Vector(3) << 1, 2, 3).finished();
  EXPECT_EQ(distance(I, x, x), 0.0);
  EXPECT_NEAR(distance(I, (Vector(3) << 1, 1, 0).finished(), Vector::Zero(3)), std::sqrt(2.0), 1e-15);
  const SimilarityMatrix T = SimilarityMatrix((DenseMatrix(2, 2) << 4, 0, 0, 1).finished()).certify();
  EXPECT_NEAR(distance(T, (Vector(2) << 1, 1).finished(), Vector::Zero(2)), std::sqrt(5.0), 1e-15);
}

TEST(Distance, RequiresCertification) {
  const SimilarityMatrix T(DenseMatrix::Identity(2, 2));
  EXPECT_THROW(distance(T, Vector::Zero(2), Vector::Ones(2)), Error);
}

TEST(Distance, MatchesFactorNorm) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 8;
    DenseMatrix raw = random_psd(n, 5, rng);
    raw(0, 1) -= 0.3;  // make it indefinite-ish, then clamp
    raw(1, 0) -= 0.3;
    const SimilarityMatrix T = clamp_psd(SimilarityMatrix(raw));
    const DenseMatrix H = factorize_T(T).matrix.to_dense();
    Vector x = Vector::Zero(n), y = Vector::Zero(n);
    for (int k = 0; k < 3; ++k) {
      x[rng() % n] += u(rng);
      y[rng() % n] += u(rng);
    }
    EXPECT_LE(std::abs(distance(T, x, y) - (H * x - H * y).norm()), 1e-6 * (1 + (x - y).norm()));
  }
}

TEST(Distance, PseudometricAxioms) {
  std::mt19937_64 rng(22);
  std::normal_distribution<double> g;
  const SimilarityMatrix T = SimilarityMatrix(random_psd(6, 4, rng)).certify();
  for (int trial = 0; trial < 200; ++trial) {
    Vector x(6), y(6), z(6);
    for (int i = 0; i < 6; ++i) {
      x[i] = g(rng);
      y[i] = g(rng);
      z[i] = g(rng);
    }
    const double xy = distance(T, x, y), yz = distance(T, y, z), xz = distance(T, x, z);
    EXPECT_GE(xy, 0.0);
    EXPECT_NEAR(xy, distance(T, y, x), 1e-12);
    EXPECT_LE(xz, xy + yz + 1e-9);
  }
}

TEST(TreeAffinities, PowersOfBeta) {
  WordClustering c({"a", "b", "c"}, {{"x", {0}}, {"y", {1}}, {"z", {2}}});
  const ClusterTree tree{"root", {{"x", {}}, {"mid", {{"y", {}}, {"z", {}}}}}};
  const auto rho = tree_affinities(tree, c, 0.5);
  EXPECT_DOUBLE_EQ(rho.at({0, 1}), 0.125);  // x-root-mid-y
  EXPECT_DOUBLE_EQ(rho.at({1, 2}), 0.25);   // y-mid-z
  EXPECT_THROW(tree_affinities(tree, c, 1.0), Error);
}

TEST(Provenance, RoundTrip) {
  for (Provenance p : {Provenance::identity, Provenance::manual, Provenance::soft, Provenance::diffusion,
                       Provenance::ngram, Provenance::taxonomy, Provenance::combination, Provenance::imported}) {
    EXPECT_EQ(provenance_from_string(to_string(p)), p);
  }
  EXPECT_THROW(provenance_from_string("nope"), Error);
}
