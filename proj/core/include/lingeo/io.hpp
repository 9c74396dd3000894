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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lingeo/corpus.hpp"
#include "lingeo/evaluate.hpp"
#include "lingeo/geometry.hpp"
#include "lingeo/reduce.hpp"

namespace lingeo::io {

// Document matrix as JSON: {format, preprocessing, vocabulary, documents:
// [{id, label?, counts: [[term, count], ...]}]}.
std::string document_matrix_to_json(const corpus::DocumentMatrix& m);
corpus::DocumentMatrix document_matrix_from_json(std::string_view text);
void save_document_matrix(const std::filesystem::path& path, const corpus::DocumentMatrix& m);
corpus::DocumentMatrix load_document_matrix(const std::filesystem::path& path);

// Geometry file: "lingeo-geometry v1 <provenance>" then a matrix block.
void write_geometry(std::ostream& out, const geometry::TransformMatrix& H);
geometry::TransformMatrix read_geometry(std::istream& in);
void save_geometry(const std::filesystem::path& path, const geometry::TransformMatrix& H);
geometry::TransformMatrix load_geometry(const std::filesystem::path& path);

struct EmbeddingFile {
  reduce::Embedding2D embedding;
  std::optional<std::vector<std::string>> labels;
};

// CSV "id,x,y[,label]" preceded by "# key: value" lines for reducer,
// geometry, seed and config. Coordinates use the shortest round-trip form.
std::string embedding_to_csv(const reduce::Embedding2D& e, const std::optional<std::vector<std::string>>& labels);
EmbeddingFile embedding_from_csv(std::string_view text);
void save_embedding(const std::filesystem::path& path, const reduce::Embedding2D& e,
                    const std::optional<std::vector<std::string>>& labels);
EmbeddingFile load_embedding(const std::filesystem::path& path);

// {measure_i, measure_ii, measure_iii: {k, accuracy}, measure_iv?, geometry,
// reducer, seed}
std::string report_to_json(const evaluate::EvaluationReport& r, const reduce::EmbeddingInfo& info);
evaluate::EvaluationReport report_from_json(std::string_view text);
void save_report(const std::filesystem::path& path, const evaluate::EvaluationReport& r,
                 const reduce::EmbeddingInfo& info);

std::string read_file(const std::filesystem::path& path);
// Writes to a sibling temporary file and renames it into place.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace lingeo::io
