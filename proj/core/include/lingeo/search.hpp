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

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lingeo/corpus.hpp"
#include "lingeo/evaluate.hpp"
#include "lingeo/geometry.hpp"
#include "lingeo/reduce.hpp"

namespace lingeo::evaluate {

// Quantity minimized by the weight search. knn_error is 1 - accuracy.
enum class Objective { davies_bouldin, intra_inter, knn_error, lda_overlap };

std::string_view to_string(Objective o);
Objective objective_from_string(std::string_view s);

using Reducer = std::function<reduce::Embedding2D(const reduce::PointCloud&)>;

// All points of the simplex {alpha >= 0, sum = 1} with coordinates that are
// multiples of `step`. Enumeration is lexicographic with the first
// coordinate descending, so the first point is (1, 0, ..., 0). Throws unless
// 1/step is an integer within 1e-9.
std::vector<std::vector<double>> simplex_grid(std::size_t components, double step);

struct SearchCandidate {
  std::vector<double> alpha;
  double objective = 0.0;  // +inf when scoring failed
  std::optional<EvaluationReport> report;
  std::string error;
};

struct SearchConfig {
  double grid_step = 0.1;
  Objective objective = Objective::davies_bouldin;
  int k = 5;
  geometry::TfNormalization normalization = geometry::TfNormalization::l1;
  unsigned threads = 1;
};

struct SearchResult {
  geometry::CombinationWeights weights{std::vector<double>{1.0}};
  EvaluationReport report;
  double objective = 0.0;
  std::vector<SearchCandidate> candidates;  // grid order
};

// Grid search over convex combinations of `components`. Labels are used only
// to score embeddings; geometry and reduction never see them. The reducer is
// called with identical settings for every candidate. A candidate replaces
// the incumbent only when it is lower by more than 1e-9 relative, so ties go
// to the earliest grid point.
SearchResult search_convex_combination(std::span<const geometry::TransformMatrix> components,
                                       const corpus::CountMatrix& docs, const std::vector<std::string>& labels,
                                       const Reducer& reducer, const SearchConfig& config = {});

double objective_value(const EvaluationReport& report, Objective o);

}  // namespace lingeo::evaluate
