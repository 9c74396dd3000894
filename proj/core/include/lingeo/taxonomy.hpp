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

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lingeo/corpus.hpp"
#include "lingeo/geometry.hpp"

namespace lingeo::taxonomy {

using ConceptId = std::size_t;

// Is-a DAG over concepts with word membership (synsets).
class Taxonomy {
 public:
  ConceptId add_concept(const std::string& id);
  // Both concepts are created on demand. Cycles are rejected by finalize().
  void add_isa(const std::string& child, const std::string& parent);
  void add_member(const std::string& word, const std::string& concept_id);
  // Validates acyclicity and caches upward closures. Must be called before
  // any query; the loader calls it.
  void finalize();

  std::size_t num_concepts() const { return names_.size(); }
  const std::string& name(ConceptId c) const { return names_.at(c); }
  std::optional<ConceptId> find(std::string_view id) const;
  const std::vector<ConceptId>& parents(ConceptId c) const { return parents_.at(c); }
  // Concepts containing `word`; empty when the word is out of taxonomy.
  const std::vector<ConceptId>& concepts_of(std::string_view word) const;
  const std::unordered_map<std::string, std::vector<ConceptId>>& members() const { return members_; }
  // c and all of its ancestors, sorted ascending.
  const std::vector<ConceptId>& ancestors(ConceptId c) const { return closure_.at(c); }
  // Topological order, parents before children.
  const std::vector<ConceptId>& topological_order() const { return topo_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, ConceptId> index_;
  std::vector<std::vector<ConceptId>> parents_;
  std::unordered_map<std::string, std::vector<ConceptId>> members_;
  std::vector<std::vector<ConceptId>> closure_;
  std::vector<ConceptId> topo_;
};

struct ConceptProbabilities {
  std::vector<double> p;
  double operator[](ConceptId c) const { return p.at(c); }
};

// count(c) sums the counts of every word whose concepts have c in their
// upward closure, plus `pseudocount` for every concept below or at c. p(c)
// is count(c) / (total word mass + pseudocount * num_concepts).
ConceptProbabilities concept_probabilities(const Taxonomy& tax,
                                           const std::unordered_map<std::string, double>& word_counts,
                                           double pseudocount = 1.0);

// Common subsumer with the smallest p; ties broken by concept name.
ConceptId lcs(const Taxonomy& tax, const ConceptProbabilities& p, ConceptId c1, ConceptId c2);

// log(p(c1) p(c2) / (2 p(lcs(c1, c2)))).
double jiang_conrath(const Taxonomy& tax, const ConceptProbabilities& p, ConceptId c1, ConceptId c2);

// Word-pair score = max over concept pairs, affinely rescaled to [0,1] over
// all in-taxonomy pairs, diagonal forced to 1, identity rows for words
// outside the taxonomy. Not PSD-certified.
geometry::SimilarityMatrix taxonomy_similarity_matrix(const Taxonomy& tax, const ConceptProbabilities& p,
                                                      const corpus::Vocabulary& vocab);

// Raw (unscaled) word-pair score; nullopt when either word is out of taxonomy.
std::optional<double> word_score(const Taxonomy& tax, const ConceptProbabilities& p, std::string_view w1,
                                 std::string_view w2);

// Lines "concept <id>", "isa <child> <parent>", "member <word> <concept>".
// Member words are normalized with `preprocessing`.
Taxonomy load_taxonomy(const std::filesystem::path& path, const corpus::PreprocessConfig& preprocessing);

// External word-pair scores "word1 word2 score", rescaled like
// taxonomy_similarity_matrix; unlisted pairs are 0 and the diagonal is 1.
geometry::SimilarityMatrix load_similarity_pairs(const std::filesystem::path& path, const corpus::Vocabulary& vocab,
                                                 const corpus::PreprocessConfig& preprocessing);

// Concept probabilities from vocabulary column totals, similarity matrix,
// principal square root.
geometry::TransformMatrix taxonomy_geometry(const Taxonomy& tax, const corpus::CountMatrix& counts);

}  // namespace lingeo::taxonomy
