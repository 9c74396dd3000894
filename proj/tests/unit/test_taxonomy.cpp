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
#include "lingeo/taxonomy.hpp"
#include "test_util.hpp"

using namespace lingeo;
using namespace lingeo::taxonomy;

namespace {

// root -> a {w1}, root -> b {w2}, b -> bb {w3}
Taxonomy toy() {
  Taxonomy t;
  t.add_isa("a", "root");
  t.add_isa("b", "root");
  t.add_isa("bb", "b");
  t.add_member("w1", "a");
  t.add_member("w2", "b");
  t.add_member("w3", "bb");
  t.finalize();
  return t;
}

ConceptId id(const Taxonomy& t, const char* name) { return *t.find(name); }

}  // namespace

TEST(ConceptProbabilities, ChainWithoutSmoothing) {
  Taxonomy t;
  t.add_isa("c1", "root");
  t.add_member("w", "c1");
  t.finalize();
  const auto p = concept_probabilities(t, {{"w", 10.0}}, 0.0);
  EXPECT_EQ(p[id(t, "c1")], 1.0);
  EXPECT_EQ(p[id(t, "root")], 1.0);
}

TEST(ConceptProbabilities, ChainWithAddOne) {
  Taxonomy t;
  t.add_isa("c1", "root");
  t.add_member("w", "c1");
  t.finalize();
  const auto p = concept_probabilities(t, {{"w", 10.0}});
  EXPECT_DOUBLE_EQ(p[id(t, "c1")], 11.0 / 12.0);
  EXPECT_DOUBLE_EQ(p[id(t, "root")], 1.0);
}

TEST(ConceptProbabilities, Siblings) {
  Taxonomy t;
  t.add_isa("c1", "root");
  t.add_isa("c2", "root");
  t.add_member("w1", "c1");
  t.add_member("w2", "c2");
  t.finalize();
  const auto p = concept_probabilities(t, {{"w1", 3.0}, {"w2", 1.0}, {"unknown", 50.0}}, 0.0);
  EXPECT_DOUBLE_EQ(p[id(t, "c1")], 0.75);
  EXPECT_DOUBLE_EQ(p[id(t, "c2")], 0.25);
  EXPECT_DOUBLE_EQ(p[id(t, "root")], 1.0);
}

TEST(ConceptProbabilities, WordInTwoConcepts) {
  Taxonomy t;
  t.add_isa("c1", "root");
  t.add_isa("c2", "root");
  t.add_member("w", "c1");
  t.add_member("w", "c2");
  t.finalize();
  const auto p = concept_probabilities(t, {{"w", 5.0}}, 0.0);
  EXPECT_EQ(p[id(t, "c1")], 1.0);
  EXPECT_EQ(p[id(t, "c2")], 1.0);
  EXPECT_EQ(p[id(t, "root")], 1.0);
}

TEST(ConceptProbabilities, ZeroTotalThrows) {
  Taxonomy t = toy();
  EXPECT_THROW(concept_probabilities(t, {}, 0.0), Error);
  EXPECT_THROW(concept_probabilities(t, {{"w1", 1.0}}, -1.0), Error);
}

TEST(ConceptProbabilities, MonotoneOnRandomDags) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    Taxonomy t;
    const int n = 3 + static_cast<int>(rng() % 15);
    t.add_concept("c0");
    for (int c = 1; c < n; ++c) {
      const int parents = 1 + static_cast<int>(rng() % 2);
      for (int k = 0; k < parents; ++k) t.add_isa("c" + std::to_string(c), "c" + std::to_string(rng() % c));
    }
    std::unordered_map<std::string, double> counts;
    for (int w = 0; w < 10; ++w) {
      const std::string word = "w" + std::to_string(w);
      t.add_member(word, "c" + std::to_string(rng() % n));
      counts[word] = static_cast<double>(rng() % 7);
    }
    t.finalize();
    const auto p = concept_probabilities(t, counts, trial % 2 ? 1.0 : 0.0 + 1e-3);
    for (ConceptId c = 0; c < t.num_concepts(); ++c) {
      EXPECT_GT(p[c], 0.0);
      EXPECT_LE(p[c], 1.0 + 1e-12);
      for (ConceptId parent : t.parents(c)) EXPECT_GE(p[parent], p[c] - 1e-12);
    }
    EXPECT_NEAR(p[id(t, "c0")], 1.0, 1e-12);
  }
}

TEST(Lcs, Examples) {
  const Taxonomy t = toy();
  const auto p = concept_probabilities(t, {{"w1", 2}, {"w2", 1}, {"w3", 1}}, 0.0);
  EXPECT_EQ(lcs(t, p, id(t, "a"), id(t, "a")), id(t, "a"));
  EXPECT_EQ(lcs(t, p, id(t, "a"), id(t, "b")), id(t, "root"));
  EXPECT_EQ(lcs(t, p, id(t, "b"), id(t, "bb")), id(t, "b"));
  EXPECT_EQ(lcs(t, p, id(t, "bb"), id(t, "a")), lcs(t, p, id(t, "a"), id(t, "bb")));
}

TEST(Lcs, DisjointThrows) {
  Taxonomy t;
  t.add_concept("x");
  t.add_concept("y");
  t.finalize();
  const ConceptProbabilities p{{0.5, 0.5}};
  try {
    lcs(t, p, 0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("no common subsumer"), std::string::npos);
  }
}

TEST(JiangConrath, Examples) {
  Taxonomy t;
  t.add_isa("c1", "root");
  t.add_isa("c2", "root");
  t.add_isa("c3", "root");
  t.add_isa("c4", "root");
  t.finalize();
  const ConceptId root = id(t, "root");
  ConceptProbabilities p;
  p.p.assign(t.num_concepts(), 0.25);
  p.p[root] = 1.0;
  EXPECT_NEAR(jiang_conrath(t, p, root, root), std::log(0.5), 1e-15);
  EXPECT_NEAR(jiang_conrath(t, p, id(t, "c1"), id(t, "c2")), std::log(1.0 / 32.0), 1e-15);
  EXPECT_NEAR(jiang_conrath(t, p, id(t, "c1"), id(t, "c2")), -3.4657, 5e-5);
  EXPECT_NEAR(jiang_conrath(t, p, id(t, "c3"), id(t, "c3")), std::log(0.25 / 2.0), 1e-15);
  p.p[id(t, "c4")] = 0.0;
  EXPECT_THROW(jiang_conrath(t, p, id(t, "c4"), id(t, "c1")), Error);
}

TEST(SimilarityMatrix, ToyTaxonomy) {
  const Taxonomy t = toy();
  // p: root 1, a 1/2, b 1/2, bb 1/4. Raw log2 scores: w1w2 -3, w1w3 -4,
  // w2w3 -3, diagonal -2, -2, -3. Rescaled over [-4, -2].
  const auto p = concept_probabilities(t, {{"w1", 2}, {"w2", 1}, {"w3", 1}}, 0.0);
  const corpus::Vocabulary vocab({"w1", "w2", "w3", "oov1", "oov2"});
  const DenseMatrix T = taxonomy_similarity_matrix(t, p, vocab).values();
  DenseMatrix expected = DenseMatrix::Identity(5, 5);
  expected(0, 1) = expected(1, 0) = 0.5;
  expected(1, 2) = expected(2, 1) = 0.5;
  EXPECT_LE((T - expected).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(*word_score(t, p, "w1", "w3"), std::log(1.0 / 16.0), 1e-12);
  EXPECT_FALSE(word_score(t, p, "w1", "oov1"));
}

TEST(SimilarityMatrix, RescalingPreservesOrder) {
  std::mt19937_64 rng(23);
  Taxonomy t;
  t.add_concept("c0");
  for (int c = 1; c < 12; ++c) t.add_isa("c" + std::to_string(c), "c" + std::to_string(rng() % c));
  std::vector<std::string> words;
  std::unordered_map<std::string, double> counts;
  for (int w = 0; w < 15; ++w) {
    words.push_back("w" + std::to_string(w));
    t.add_member(words.back(), "c" + std::to_string(1 + rng() % 11));
    counts[words.back()] = 1.0 + static_cast<double>(rng() % 9);
  }
  t.finalize();
  const auto p = concept_probabilities(t, counts);
  const DenseMatrix T = taxonomy_similarity_matrix(t, p, corpus::Vocabulary(words)).values();
  EXPECT_EQ(T, T.transpose());
  for (int i = 0; i < 15; ++i) EXPECT_EQ(T(i, i), 1.0);
  for (int i = 0; i < 15; ++i) {
    for (int j = i + 1; j < 15; ++j) {
      for (int k = 0; k < 15; ++k) {
        for (int l = k + 1; l < 15; ++l) {
          const double ra = *word_score(t, p, words[i], words[j]);
          const double rb = *word_score(t, p, words[k], words[l]);
          if (ra < rb - 1e-12) EXPECT_LE(T(i, j), T(k, l) + 1e-12);
        }
      }
    }
  }
}

TEST(Taxonomy, CycleRejected) {
  Taxonomy t;
  t.add_isa("a", "b");
  t.add_isa("b", "c");
  t.add_isa("c", "a");
  EXPECT_THROW(t.finalize(), Error);
  Taxonomy self;
  EXPECT_THROW(self.add_isa("a", "a"), Error);
}

TEST(Taxonomy, LoaderAndGeometry) {
  const auto dir = lingeo::testing::temp_dir("taxonomy");
  const auto path = lingeo::testing::write_text(dir / "t.txt",
                                                "concept entity\nisa animal entity\nisa plant entity\n"
                                                "member Dogs animal\nmember cats animal\nmember trees plant\n");
  corpus::PreprocessConfig pre;
  const Taxonomy t = load_taxonomy(path, pre);
  EXPECT_EQ(t.num_concepts(), 3u);
  EXPECT_EQ(t.concepts_of("dog").size(), 1u);
  EXPECT_TRUE(t.concepts_of("Dogs").empty());

  const corpus::Vocabulary vocab({"dog", "cat", "tree", "rock"});
  corpus::CountMatrix counts = corpus::count_matrix(std::vector<corpus::Tokens>{{"dog", "cat", "tree", "rock"}}, vocab);
  const auto H = taxonomy_geometry(t, counts);
  EXPECT_EQ(H.provenance, geometry::Provenance::taxonomy);
  const DenseMatrix h = H.matrix.to_dense();
  const DenseMatrix T = h.transpose() * h;
  EXPECT_NEAR(T(3, 3), 1.0, 1e-9);
  EXPECT_NEAR(T(0, 3), 0.0, 1e-9);
  EXPECT_GT(T(0, 1), T(0, 2));

  lingeo::testing::write_text(dir / "bad.txt", "member onlyword\n");
  EXPECT_THROW(load_taxonomy(dir / "bad.txt", pre), FormatError);
  lingeo::testing::write_text(dir / "bad2.txt", "synset x\n");
  EXPECT_THROW(load_taxonomy(dir / "bad2.txt", pre), FormatError);
}

TEST(Taxonomy, SimilarityPairsImport) {
  const auto dir = lingeo::testing::temp_dir("simpairs");
  const auto path = lingeo::testing::write_text(dir / "s.txt", "# comment\ndog cat 4\ndog tree 2\ncat tree 0\ncat unknown 9\n");
  const corpus::Vocabulary vocab({"dog", "cat", "tree", "rock"});
  const DenseMatrix T = load_similarity_pairs(path, vocab, corpus::PreprocessConfig{}).values();
  EXPECT_EQ(T(0, 1), 1.0);
  EXPECT_EQ(T(0, 2), 0.5);
  EXPECT_EQ(T(1, 2), 0.0);
  EXPECT_EQ(T(0, 3), 0.0);
  EXPECT_EQ(T(3, 3), 1.0);
  lingeo::testing::write_text(dir / "bad.txt", "dog cat\n");
  EXPECT_THROW(load_similarity_pairs(dir / "bad.txt", vocab, corpus::PreprocessConfig{}), FormatError);
}
