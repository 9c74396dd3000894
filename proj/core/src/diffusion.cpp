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

#include "lingeo/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "lingeo/error.hpp"

namespace lingeo::diffusion {
namespace {

// Streaming accumulator for the co-occurrence sums behind q_w. Memory grows
// with the number of distinct co-occurring pairs, not with n^2.
class ContextAccumulator {
 public:
  explicit ContextAccumulator(std::size_t n) : acc_(n), denom_(n, 0.0), support_(n, 0) {}

  // One (micro-)document given as sorted (term, count) pairs, repeated
  // `multiplicity` times.
  void add(std::span<const std::pair<corpus::TermId, std::uint32_t>> entries, std::uint64_t multiplicity) {
    double total = 0.0;
    for (const auto& [t, c] : entries) total += c;
    if (total == 0.0) return;
    const double k = static_cast<double>(multiplicity);
    for (const auto& [w, cw] : entries) {
      const double weight = k * cw;
      denom_[w] += weight;
      support_[w] += multiplicity;
      auto& row = acc_[w];
      for (const auto& [u, cu] : entries) row[u] += weight * (cu / total);
    }
  }

  bool empty() const {
    return std::all_of(denom_.begin(), denom_.end(), [](double d) { return d == 0.0; });
  }

  ContextualTable finish() && {
    ContextualTable table;
    const std::size_t n = acc_.size();
    table.q.resize(n);
    table.support_count = std::move(support_);
    for (std::size_t w = 0; w < n; ++w) {
      if (denom_[w] == 0.0) {
        table.q[w] = {{static_cast<corpus::TermId>(w), 1.0}};
        continue;
      }
      Distribution d(acc_[w].begin(), acc_[w].end());
      std::sort(d.begin(), d.end());
      for (auto& [u, v] : d) v /= denom_[w];
      table.q[w] = std::move(d);
    }
    return table;
  }

 private:
  std::vector<std::unordered_map<corpus::TermId, double>> acc_;
  std::vector<double> denom_;
  std::vector<std::uint64_t> support_;
};

}  // namespace

ContextualTable contextual_distributions(const corpus::CountMatrix& docs) {
  if (docs.num_documents() == 0 || docs.vocab.empty()) throw Error("empty document matrix");
  ContextAccumulator acc(docs.vocab.size());
  for (const corpus::SparseCounts& row : docs.rows) acc.add(row.entries, 1);
  if (acc.empty()) throw Error("empty document matrix");
  return std::move(acc).finish();
}

ContextualTable ngram_contextual_distributions(const NgramTable& table, const corpus::Vocabulary& vocab) {
  ContextAccumulator acc(vocab.size());
  bool any = false;
  for (const NgramRecord& rec : table.records) {
    std::map<corpus::TermId, std::uint32_t> counts;
    for (const std::string& tok : rec.tokens) {
      if (auto id = vocab.find(tok)) ++counts[*id];
    }
    if (counts.empty() || rec.count == 0) continue;
    any = true;
    const std::vector<std::pair<corpus::TermId, std::uint32_t>> entries(counts.begin(), counts.end());
    acc.add(entries, rec.count);
  }
  if (!any) throw Error("no n-gram contains a vocabulary word");
  return std::move(acc).finish();
}

double hellinger_affinity(const Distribution& qu, const Distribution& qv) {
  double s = 0.0;
  auto a = qu.begin();
  auto b = qv.begin();
  while (a != qu.end() && b != qv.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      s += std::sqrt(a->second * b->second);
      ++a;
      ++b;
    }
  }
  return std::clamp(s, 0.0, 1.0);
}

geometry::SimilarityMatrix diffusion_kernel(const ContextualTable& table, const DiffusionConfig& config) {
  if (!(config.c > 0.0)) throw Error("diffusion kernel scale c must be positive");
  const auto n = static_cast<Eigen::Index>(table.size());

  // Column w holds sqrt(q_w); affinities are then inner products.
  std::vector<Eigen::Triplet<double>> triplets;
  for (Eigen::Index w = 0; w < n; ++w) {
    for (const auto& [u, p] : table.q[w]) triplets.emplace_back(u, w, std::sqrt(p));
  }
  SparseMatrix roots(n, n);
  roots.setFromTriplets(triplets.begin(), triplets.end());

  DenseMatrix affinity;
  if (n <= kDenseLimit) {
    const DenseMatrix dense_roots(roots);
    affinity.noalias() = dense_roots.transpose() * dense_roots;
  } else {
    affinity = DenseMatrix(roots.transpose()) * roots;
  }

  DenseMatrix T(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    T(j, j) = 1.0;
    for (Eigen::Index i = 0; i < j; ++i) {
      const double angle = std::acos(std::clamp(affinity(i, j), 0.0, 1.0));
      const double v = std::exp(-config.c * angle * angle);
      T(i, j) = v;
      T(j, i) = v;
    }
  }
  return geometry::SimilarityMatrix(std::move(T));
}

NgramTable load_ngram_table(const std::filesystem::path& path, const corpus::Vocabulary& vocab,
                            const corpus::PreprocessConfig& preprocessing) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open n-gram table " + path.string());
  NgramTable table;
  table.n = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": missing TAB before count");
    }
    NgramRecord rec;
    std::istringstream toks(line.substr(0, tab));
    std::string tok;
    while (toks >> tok) rec.tokens.push_back(corpus::normalize_term(tok, preprocessing));
    const std::string count_text = line.substr(tab + 1);
    try {
      std::size_t used = 0;
      const long long c = std::stoll(count_text, &used);
      if (c < 1 || used != count_text.size()) throw std::invalid_argument("count");
      rec.count = static_cast<std::uint64_t>(c);
    } catch (const std::exception&) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": bad count '" + count_text + "'");
    }
    if (rec.tokens.empty()) continue;
    if (table.n == 0) table.n = rec.tokens.size();
    const bool relevant =
        std::any_of(rec.tokens.begin(), rec.tokens.end(), [&](const std::string& t) { return vocab.find(t).has_value(); });
    if (relevant) table.records.push_back(std::move(rec));
  }
  if (table.n == 0) table.n = 3;
  return table;
}

geometry::TransformMatrix diffusion_geometry(const ContextualTable& table, const DiffusionConfig& config,
                                             geometry::Provenance provenance) {
  return geometry::symmetric_factor(diffusion_kernel(table, config), provenance);
}

}  // namespace lingeo::diffusion
