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
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lingeo/corpus.hpp"
#include "lingeo/geometry.hpp"

namespace lingeo::diffusion {

// Sparse probability vector over vocabulary ids, sorted by id.
using Distribution = std::vector<std::pair<corpus::TermId, double>>;

// Contextual distribution q_w for every vocabulary word w.
struct ContextualTable {
  std::vector<Distribution> q;
  // Number of documents (or n-gram records) containing the word.
  std::vector<std::uint64_t> support_count;

  std::size_t size() const { return q.size(); }
};

struct NgramRecord {
  std::vector<std::string> tokens;
  std::uint64_t count = 1;
};

struct NgramTable {
  std::size_t n = 3;
  std::vector<NgramRecord> records;
};

struct DiffusionConfig {
  double c = 1.0;
};

// q_w(u) = sum_x tfrel(u,x) tf(w,x) / sum_x tf(w,x). Words that never occur
// get the indicator distribution at themselves.
ContextualTable contextual_distributions(const corpus::CountMatrix& docs);

// Each gram with count k acts as a micro-document repeated k times; tokens
// outside the vocabulary are dropped before normalization.
ContextualTable ngram_contextual_distributions(const NgramTable& table, const corpus::Vocabulary& vocab);

// Bhattacharyya coefficient sum_w sqrt(qu(w) qv(w)), clamped to [0,1].
double hellinger_affinity(const Distribution& qu, const Distribution& qv);

// T(u,v) = exp(-c arccos^2(affinity(q_u, q_v))). Diagonal is exactly 1.
geometry::SimilarityMatrix diffusion_kernel(const ContextualTable& table, const DiffusionConfig& config);

// Lines "tok tok tok<TAB>count". Tokens are normalized with `preprocessing`;
// records with no vocabulary token are dropped on load.
NgramTable load_ngram_table(const std::filesystem::path& path, const corpus::Vocabulary& vocab,
                            const corpus::PreprocessConfig& preprocessing);

// Kernel followed by the principal square root factor.
geometry::TransformMatrix diffusion_geometry(const ContextualTable& table, const DiffusionConfig& config,
                                             geometry::Provenance provenance);

}  // namespace lingeo::diffusion
