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

#include "lingeo/search.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace lingeo::evaluate {

std::string_view to_string(Objective o) {
  switch (o) {
    case Objective::davies_bouldin: return "davies_bouldin";
    case Objective::intra_inter: return "intra_inter";
    case Objective::knn_error: return "knn_error";
    case Objective::lda_overlap: return "lda_overlap";
  }
  return "davies_bouldin";
}

Objective objective_from_string(std::string_view s) {
  if (s == "davies_bouldin" || s == "ii") return Objective::davies_bouldin;
  if (s == "intra_inter" || s == "i") return Objective::intra_inter;
  if (s == "knn_error" || s == "iii") return Objective::knn_error;
  if (s == "lda_overlap" || s == "iv") return Objective::lda_overlap;
  throw Error("unknown objective '" + std::string(s) + "'");
}

double objective_value(const EvaluationReport& report, Objective o) {
  switch (o) {
    case Objective::davies_bouldin: return report.davies_bouldin;
    case Objective::intra_inter: return report.intra_inter;
    case Objective::knn_error: return 1.0 - report.knn_accuracy;
    case Objective::lda_overlap:
      if (!report.lda_overlap) throw Error("LDA overlap objective needs exactly two classes");
      return *report.lda_overlap;
  }
  return report.davies_bouldin;
}

std::vector<std::vector<double>> simplex_grid(std::size_t components, double step) {
  if (components == 0) throw Error("simplex grid needs at least one component");
  if (!(step > 0.0) || step > 1.0) throw Error("grid step must lie in (0, 1]");
  const double ratio = 1.0 / step;
  const long parts = std::lround(ratio);
  if (std::abs(ratio - static_cast<double>(parts)) > 1e-9 * ratio) throw Error("grid step must divide 1");

  std::vector<std::vector<double>> grid;
  std::vector<long> counts(components, 0);
  // Depth-first fill; the last coordinate takes the remainder.
  auto fill = [&](auto&& self, std::size_t pos, long remaining) -> void {
    if (pos + 1 == components) {
      counts[pos] = remaining;
      std::vector<double> alpha(components);
      for (std::size_t i = 0; i < components; ++i) {
        alpha[i] = static_cast<double>(counts[i]) / static_cast<double>(parts);
      }
      grid.push_back(std::move(alpha));
      return;
    }
    for (long c = remaining; c >= 0; --c) {
      counts[pos] = c;
      self(self, pos + 1, remaining - c);
    }
  };
  fill(fill, 0, parts);
  return grid;
}

SearchResult search_convex_combination(std::span<const geometry::TransformMatrix> components,
                                       const corpus::CountMatrix& docs, const std::vector<std::string>& labels,
                                       const Reducer& reducer, const SearchConfig& config) {
  if (components.empty()) throw Error("weight search needs at least one component");
  if (labels.size() != docs.num_documents()) throw Error("label count does not match document count");
  if (!reducer) throw Error("weight search needs a reducer");

  const std::vector<std::vector<double>> grid = simplex_grid(components.size(), config.grid_step);
  std::vector<SearchCandidate> candidates(grid.size());

  auto score = [&](std::size_t idx) {
    SearchCandidate& cand = candidates[idx];
    cand.alpha = grid[idx];
    cand.objective = std::numeric_limits<double>::infinity();
    try {
      const geometry::TransformMatrix H =
          geometry::convex_combination(components, geometry::CombinationWeights(cand.alpha));
      reduce::PointCloud cloud{geometry::transform(H, docs, config.normalization), docs.ids};
      const reduce::Embedding2D emb = reducer(cloud);
      const EvaluationReport report = evaluate_all(LabeledEmbedding(emb.coords, labels), config.k);
      cand.objective = objective_value(report, config.objective);
      cand.report = report;
    } catch (const reduce::Cancelled&) {
      throw;
    } catch (const Error& e) {
      cand.error = e.what();
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(grid.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) score(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < grid.size(); i = next++) score(i);
        } catch (...) {
          failures[w] = std::current_exception();
          next = grid.size();
        }
      });
    }
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& f : failures) {
      if (f) std::rethrow_exception(f);
    }
  }

  std::size_t best = candidates.size();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!candidates[i].report) continue;
    if (best == candidates.size()) {
      best = i;
      continue;
    }
    const double incumbent = candidates[best].objective;
    if (candidates[i].objective < incumbent - 1e-9 * std::max(1.0, std::abs(incumbent))) best = i;
  }
  if (best == candidates.size()) {
    throw Error("no grid point could be scored: " + candidates.front().error);
  }

  SearchResult result;
  result.weights = geometry::CombinationWeights(candidates[best].alpha);
  result.report = *candidates[best].report;
  result.objective = candidates[best].objective;
  result.candidates = std::move(candidates);
  return result;
}

}  // namespace lingeo::evaluate
