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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lingeo/corpus.hpp"
#include "lingeo/diffusion.hpp"
#include "lingeo/evaluate.hpp"
#include "lingeo/geometry.hpp"
#include "lingeo/geometry_spec.hpp"
#include "lingeo/reduce.hpp"
#include "lingeo/search.hpp"
#include "lingeo/taxonomy.hpp"

namespace lingeo::pipeline {

enum class Method { identity, manual, soft, diffusion, ngram, taxonomy, combine };

std::string_view to_string(Method m);
Method method_from_string(std::string_view s);

// Error raised by a pipeline stage; what() is prefixed with the stage name.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message)
      : Error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct ReducerSettings {
  std::string name = "pca";  // pca | tsne
  reduce::TsneConfig tsne;   // seed is ignored; it comes from the run seed

  void validate() const;
  std::string to_json() const;
};

// Parses {"perplexity": .., "iterations": .., "learning_rate": ..,
// "early_exaggeration": .., "exaggeration_iterations": ..} on top of the
// defaults. Unknown keys are rejected.
ReducerSettings parse_reducer_settings(std::string_view name, std::string_view config_json);

struct PipelineConfig {
  std::filesystem::path corpus;
  std::filesystem::path estimation_corpus;
  std::filesystem::path ngram_table;
  std::filesystem::path taxonomy;
  std::filesystem::path similarity_pairs;
  std::filesystem::path geometry_spec;
  corpus::PreprocessConfig preprocessing;

  Method method = Method::identity;
  std::vector<Method> components;              // combine only
  std::optional<std::vector<double>> weights;  // combine; absent runs the grid search
  evaluate::SearchConfig search;
  double diffusion_c = 1.0;
  geometry::TfNormalization normalization = geometry::TfNormalization::l1;

  ReducerSettings reducer;
  int k = 5;
  std::uint64_t seed = 0;

  std::filesystem::path embedding_out;
  std::filesystem::path report_out;
  std::filesystem::path geometry_out;

  // Checks that referenced files exist and that the selected method has
  // its inputs.
  void validate() const;
};

// Relative paths are resolved against `base_dir`.
PipelineConfig parse_pipeline_config(std::string_view json_text, const std::filesystem::path& base_dir);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

// splitmix64 over seed and stream index.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);
inline constexpr std::uint64_t kReducerStream = 1;

struct Inputs {
  corpus::DocumentMatrix docs;
  corpus::StopwordSet stopwords;
  std::optional<corpus::CountMatrix> estimation;  // counted against docs' vocabulary
  std::optional<diffusion::NgramTable> ngrams;
  std::optional<taxonomy::Taxonomy> taxonomy;
  std::optional<geometry::SimilarityMatrix> similarity;  // imported word-pair scores
  std::optional<geometry::GeometrySpec> spec;

  // Counts used for corpus statistics: the estimation corpus if given.
  const corpus::CountMatrix& statistics_counts() const { return estimation ? *estimation : docs.counts; }
};

corpus::DocumentMatrix ingest(const std::filesystem::path& corpus_path, const corpus::PreprocessConfig& preprocessing);
Inputs load_inputs(const PipelineConfig& config);

// Methods that are not `combine`.
geometry::TransformMatrix build_geometry(Method method, const Inputs& inputs, double diffusion_c = 1.0);
geometry::TransformMatrix build_spec_geometry(const geometry::GeometrySpec& spec, const corpus::DocumentMatrix& docs);

reduce::Embedding2D reduce_points(const reduce::PointCloud& cloud, const ReducerSettings& reducer,
                                  std::uint64_t seed, const reduce::StopCheck& stop = {});

// Transform, then reduce. info.geometry is the provenance of H and info.seed
// the run seed.
reduce::Embedding2D embed(const geometry::TransformMatrix& H, const corpus::CountMatrix& counts,
                          const ReducerSettings& reducer, std::uint64_t seed,
                          geometry::TfNormalization normalization = geometry::TfNormalization::l1,
                          const reduce::StopCheck& stop = {});

struct PipelineResult {
  geometry::TransformMatrix geometry;
  reduce::Embedding2D embedding;
  std::optional<std::vector<std::string>> labels;
  std::optional<evaluate::EvaluationReport> report;  // labeled corpora only
  std::optional<std::vector<double>> weights;        // combine only
  std::string embedding_csv;
  std::string report_json;
};

// Runs every stage and writes whichever outputs have paths configured.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace lingeo::pipeline
