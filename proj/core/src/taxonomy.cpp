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

#include "lingeo/taxonomy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "lingeo/error.hpp"

namespace lingeo::taxonomy {

ConceptId Taxonomy::add_concept(const std::string& id) {
  auto it = index_.find(id);
  if (it != index_.end()) return it->second;
  const ConceptId c = names_.size();
  names_.push_back(id);
  index_.emplace(id, c);
  parents_.emplace_back();
  return c;
}

void Taxonomy::add_isa(const std::string& child, const std::string& parent) {
  const ConceptId c = add_concept(child);
  const ConceptId p = add_concept(parent);
  if (c == p) throw Error("concept '" + child + "' cannot be its own parent");
  auto& ps = parents_[c];
  if (std::find(ps.begin(), ps.end(), p) == ps.end()) ps.push_back(p);
}

void Taxonomy::add_member(const std::string& word, const std::string& concept_id) {
  const ConceptId c = add_concept(concept_id);
  auto& cs = members_[word];
  if (std::find(cs.begin(), cs.end(), c) == cs.end()) cs.push_back(c);
}

void Taxonomy::finalize() {
  const std::size_t n = names_.size();
  // Kahn's algorithm on the parent -> child orientation.
  std::vector<std::vector<ConceptId>> children(n);
  std::vector<std::size_t> indegree(n, 0);
  for (ConceptId c = 0; c < n; ++c) {
    for (ConceptId p : parents_[c]) {
      children[p].push_back(c);
      ++indegree[c];
    }
  }
  topo_.clear();
  std::vector<ConceptId> ready;
  for (ConceptId c = 0; c < n; ++c) {
    if (indegree[c] == 0) ready.push_back(c);
  }
  while (!ready.empty()) {
    const ConceptId c = ready.back();
    ready.pop_back();
    topo_.push_back(c);
    for (ConceptId ch : children[c]) {
      if (--indegree[ch] == 0) ready.push_back(ch);
    }
  }
  if (topo_.size() != n) throw Error("taxonomy contains an is-a cycle");

  closure_.assign(n, {});
  for (ConceptId c : topo_) {
    std::vector<ConceptId> up{c};
    for (ConceptId p : parents_[c]) up.insert(up.end(), closure_[p].begin(), closure_[p].end());
    std::sort(up.begin(), up.end());
    up.erase(std::unique(up.begin(), up.end()), up.end());
    closure_[c] = std::move(up);
  }
}

std::optional<ConceptId> Taxonomy::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::vector<ConceptId>& Taxonomy::concepts_of(std::string_view word) const {
  static const std::vector<ConceptId> kNone;
  auto it = members_.find(std::string(word));
  return it == members_.end() ? kNone : it->second;
}

namespace {

std::vector<ConceptId> word_closure(const Taxonomy& tax, const std::vector<ConceptId>& concepts) {
  std::vector<ConceptId> up;
  for (ConceptId c : concepts) up.insert(up.end(), tax.ancestors(c).begin(), tax.ancestors(c).end());
  std::sort(up.begin(), up.end());
  up.erase(std::unique(up.begin(), up.end()), up.end());
  return up;
}

}  // namespace

ConceptProbabilities concept_probabilities(const Taxonomy& tax,
                                           const std::unordered_map<std::string, double>& word_counts,
                                           double pseudocount) {
  if (pseudocount < 0.0) throw Error("pseudocount must be nonnegative");
  const std::size_t n = tax.num_concepts();
  std::vector<double> count(n, 0.0);
  double total = 0.0;

  // Iterate in sorted word order so the floating-point sums are reproducible.
  std::map<std::string, double> sorted(word_counts.begin(), word_counts.end());
  for (const auto& [word, c] : sorted) {
    const auto& concepts = tax.concepts_of(word);
    if (concepts.empty() || c <= 0.0) continue;
    total += c;
    for (ConceptId a : word_closure(tax, concepts)) count[a] += c;
  }
  if (pseudocount > 0.0) {
    for (ConceptId c = 0; c < n; ++c) {
      for (ConceptId a : tax.ancestors(c)) count[a] += pseudocount;
    }
    total += pseudocount * static_cast<double>(n);
  }
  if (!(total > 0.0)) throw Error("concept probabilities need a positive total count");

  ConceptProbabilities p;
  p.p.resize(n);
  for (ConceptId c = 0; c < n; ++c) p.p[c] = count[c] / total;
  return p;
}

ConceptId lcs(const Taxonomy& tax, const ConceptProbabilities& p, ConceptId c1, ConceptId c2) {
  const auto& a = tax.ancestors(c1);
  const auto& b = tax.ancestors(c2);
  std::vector<ConceptId> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  if (common.empty()) throw Error("no common subsumer for '" + tax.name(c1) + "' and '" + tax.name(c2) + "'");
  ConceptId best = common.front();
  for (ConceptId c : common) {
    if (p[c] < p[best] || (p[c] == p[best] && tax.name(c) < tax.name(best))) best = c;
  }
  return best;
}

double jiang_conrath(const Taxonomy& tax, const ConceptProbabilities& p, ConceptId c1, ConceptId c2) {
  const ConceptId s = lcs(tax, p, c1, c2);
  if (!(p[c1] > 0.0) || !(p[c2] > 0.0) || !(p[s] > 0.0)) {
    throw Error("zero concept probability in Jiang-Conrath score");
  }
  return std::log(p[c1] * p[c2] / (2.0 * p[s]));
}

namespace {

class PairScorer {
 public:
  PairScorer(const Taxonomy& tax, const ConceptProbabilities& p) : tax_(tax), p_(p) {}

  // Max over concept pairs; nullopt when no pair shares a subsumer.
  std::optional<double> score(const std::vector<ConceptId>& a, const std::vector<ConceptId>& b) {
    std::optional<double> best;
    for (ConceptId x : a) {
      for (ConceptId y : b) {
        const auto v = concept_score(x, y);
        if (v && (!best || *v > *best)) best = v;
      }
    }
    return best;
  }

 private:
  std::optional<double> concept_score(ConceptId x, ConceptId y) {
    if (x > y) std::swap(x, y);
    const std::uint64_t key = (static_cast<std::uint64_t>(x) << 32) | static_cast<std::uint64_t>(y);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::optional<double> v;
    const auto& a = tax_.ancestors(x);
    const auto& b = tax_.ancestors(y);
    std::vector<ConceptId> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    if (!common.empty()) v = jiang_conrath(tax_, p_, x, y);
    cache_.emplace(key, v);
    return v;
  }

  const Taxonomy& tax_;
  const ConceptProbabilities& p_;
  std::unordered_map<std::uint64_t, std::optional<double>> cache_;
};

// Affine map of finite raw scores onto [0,1]; missing entries become 0 and
// the diagonal 1.
geometry::SimilarityMatrix rescale(DenseMatrix raw, const std::vector<bool>& known) {
  const Eigen::Index n = raw.rows();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      if (known[static_cast<std::size_t>(i * n + j)]) {
        lo = std::min(lo, raw(i, j));
        hi = std::max(hi, raw(i, j));
      }
    }
  }
  DenseMatrix T = DenseMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      if (!known[static_cast<std::size_t>(i * n + j)]) continue;
      const double v = hi > lo ? (raw(i, j) - lo) / (hi - lo) : 1.0;
      T(i, j) = v;
      T(j, i) = v;
    }
    T(j, j) = 1.0;
  }
  return geometry::SimilarityMatrix(std::move(T));
}

}  // namespace

std::optional<double> word_score(const Taxonomy& tax, const ConceptProbabilities& p, std::string_view w1,
                                 std::string_view w2) {
  const auto& a = tax.concepts_of(w1);
  const auto& b = tax.concepts_of(w2);
  if (a.empty() || b.empty()) return std::nullopt;
  PairScorer scorer(tax, p);
  return scorer.score(a, b);
}

geometry::SimilarityMatrix taxonomy_similarity_matrix(const Taxonomy& tax, const ConceptProbabilities& p,
                                                      const corpus::Vocabulary& vocab) {
  const auto n = static_cast<Eigen::Index>(vocab.size());
  std::vector<const std::vector<ConceptId>*> concepts(vocab.size());
  for (std::size_t w = 0; w < vocab.size(); ++w) concepts[w] = &tax.concepts_of(vocab.word(static_cast<corpus::TermId>(w)));

  PairScorer scorer(tax, p);
  DenseMatrix raw = DenseMatrix::Zero(n, n);
  std::vector<bool> known(static_cast<std::size_t>(n * n), false);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (concepts[j]->empty()) continue;
    for (Eigen::Index i = 0; i <= j; ++i) {
      if (concepts[i]->empty()) continue;
      if (auto s = scorer.score(*concepts[i], *concepts[j])) {
        raw(i, j) = *s;
        known[static_cast<std::size_t>(i * n + j)] = true;
      }
    }
  }
  return rescale(std::move(raw), known);
}

Taxonomy load_taxonomy(const std::filesystem::path& path, const corpus::PreprocessConfig& preprocessing) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open taxonomy file " + path.string());
  Taxonomy tax;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind) || kind.front() == '#') continue;
    std::string a, b, extra;
    const auto where = [&] { return path.string() + ":" + std::to_string(line_no) + ": "; };
    if (kind == "concept") {
      if (!(ls >> a) || (ls >> extra)) throw FormatError(where() + "expected 'concept <id>'");
      tax.add_concept(a);
    } else if (kind == "isa") {
      if (!(ls >> a >> b) || (ls >> extra)) throw FormatError(where() + "expected 'isa <child> <parent>'");
      tax.add_isa(a, b);
    } else if (kind == "member") {
      if (!(ls >> a >> b) || (ls >> extra)) throw FormatError(where() + "expected 'member <word> <concept>'");
      tax.add_member(corpus::normalize_term(a, preprocessing), b);
    } else {
      throw FormatError(where() + "unknown record '" + kind + "'");
    }
  }
  tax.finalize();
  return tax;
}

geometry::SimilarityMatrix load_similarity_pairs(const std::filesystem::path& path, const corpus::Vocabulary& vocab,
                                                 const corpus::PreprocessConfig& preprocessing) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open similarity file " + path.string());
  const auto n = static_cast<Eigen::Index>(vocab.size());
  DenseMatrix raw = DenseMatrix::Zero(n, n);
  std::vector<bool> known(static_cast<std::size_t>(n * n), false);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string w1, w2;
    double score = 0.0;
    if (!(ls >> w1) || w1.front() == '#') continue;
    if (!(ls >> w2 >> score)) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected 'word1 word2 score'");
    }
    auto a = vocab.find(corpus::normalize_term(w1, preprocessing));
    auto b = vocab.find(corpus::normalize_term(w2, preprocessing));
    if (!a || !b) continue;
    const Eigen::Index i = std::min(*a, *b);
    const Eigen::Index j = std::max(*a, *b);
    auto slot = static_cast<std::size_t>(i * n + j);
    if (!known[slot] || score > raw(i, j)) raw(i, j) = score;
    known[slot] = true;
  }
  return rescale(std::move(raw), known);
}

geometry::TransformMatrix taxonomy_geometry(const Taxonomy& tax, const corpus::CountMatrix& counts) {
  std::unordered_map<std::string, double> word_counts;
  const auto totals = counts.column_totals();
  for (std::size_t w = 0; w < totals.size(); ++w) {
    word_counts[counts.vocab.word(static_cast<corpus::TermId>(w))] = static_cast<double>(totals[w]);
  }
  const ConceptProbabilities p = concept_probabilities(tax, word_counts);
  return geometry::symmetric_factor(taxonomy_similarity_matrix(tax, p, counts.vocab),
                                    geometry::Provenance::taxonomy);
}

}  // namespace lingeo::taxonomy
