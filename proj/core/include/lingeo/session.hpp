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

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lingeo/pipeline.hpp"

namespace lingeo::pipeline {

// A malformed client request (as opposed to a failed computation).
class RequestError : public Error {
 public:
  using Error::Error;
};

// Immutable result of one accepted revision.
struct Published {
  std::uint64_t revision = 0;
  Method method = Method::identity;
  std::string geometry_key;
  std::shared_ptr<const geometry::TransformMatrix> geometry;
  reduce::Embedding2D embedding;
  std::optional<evaluate::EvaluationReport> report;
  std::vector<Method> components;
  std::vector<double> weights;
  std::optional<geometry::GeometrySpec> spec;
};

struct MutationResult {
  std::uint64_t revision = 0;
  bool superseded = false;  // accepted, but a queued newer write took over the recompute
};

struct RevisionRecord {
  std::uint64_t revision = 0;
  std::string kind;
  bool published = false;
};

// Interactive state for the service: one loaded corpus, the current geometry
// choice and reducer, and the latest embedding and report. Writes go through
// a single exclusive path; reads see the last published snapshot. A write
// that is still reducing when another write is queued behind it is
// abandoned and its state change folded into the next one.
class Session {
 public:
  explicit Session(const PipelineConfig& config);
  Session(Inputs inputs, const PipelineConfig& config);

  // JSON body of PUT /geometry/spec.
  MutationResult put_spec(std::string_view spec_json);
  // Switch to H* = sum alpha_i H_i over `components` (default: the current
  // component list).
  MutationResult set_alpha(std::vector<double> weights, std::optional<std::vector<Method>> components = {});
  // Select a single geometry method.
  MutationResult set_method(Method method);
  MutationResult set_reducer(const ReducerSettings& reducer, std::optional<std::uint64_t> seed = {});

  // Grid search over the current components with the current reducer. Does
  // not change the state.
  evaluate::SearchResult search_alpha(const evaluate::SearchConfig& config,
                                      std::optional<std::vector<Method>> components = {});

  std::shared_ptr<const Published> published() const;
  std::vector<RevisionRecord> revisions() const;
  // Number of non-combination geometries built so far (cache misses).
  std::size_t geometry_builds() const { return builds_.load(); }

  const Inputs& inputs() const { return inputs_; }
  const PipelineConfig& config() const { return config_; }

  std::string corpus_summary_json() const;
  std::string matrix_summary_json() const;
  std::string embedding_json() const;
  std::string report_json() const;
  std::string revisions_json() const;
  std::string search_json(const evaluate::SearchResult& result, const std::vector<Method>& components) const;

 private:
  struct Desired {
    Method method = Method::identity;
    std::optional<geometry::GeometrySpec> spec;
    std::vector<Method> components;
    std::vector<double> weights;
    ReducerSettings reducer;
    std::uint64_t seed = 0;
  };

  template <typename Change>
  MutationResult mutate(const char* kind, Change&& change);

  std::string component_key(Method m, const Desired& d) const;
  std::shared_ptr<const geometry::TransformMatrix> component(Method m, const Desired& d);
  std::shared_ptr<const geometry::TransformMatrix> current_geometry(const Desired& d, std::string& key);
  std::shared_ptr<const Published> compute(const Desired& d, std::uint64_t revision, const reduce::StopCheck& stop);

  PipelineConfig config_;
  Inputs inputs_;

  std::mutex write_mutex_;  // exclusive update path
  std::atomic<int> waiting_{0};
  Desired desired_;
  std::uint64_t next_revision_ = 1;

  mutable std::mutex cache_mutex_;
  std::map<std::string, std::shared_ptr<const geometry::TransformMatrix>> cache_;
  std::vector<std::string> cache_order_;
  std::atomic<std::size_t> builds_{0};

  mutable std::mutex publish_mutex_;
  std::shared_ptr<const Published> published_;
  std::vector<RevisionRecord> history_;
};

}  // namespace lingeo::pipeline
