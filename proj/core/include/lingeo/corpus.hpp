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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace lingeo::corpus {

using TermId = std::uint32_t;
using Tokens = std::vector<std::string>;
using StopwordSet = std::unordered_set<std::string>;

struct RawDocument {
  std::string id;
  std::string text;
  std::optional<std::string> label;  // evaluation only
};

// Ordered list of distinct tokens; positions are contiguous from zero.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Throws lingeo::Error on duplicate words.
  explicit Vocabulary(std::vector<std::string> words);

  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  const std::string& word(TermId id) const { return words_.at(id); }
  const std::vector<std::string>& words() const { return words_; }
  std::optional<TermId> find(std::string_view word) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.words_ == b.words_;
  }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, TermId> index_;
};

// One document's term counts, sorted by term id, no zero entries.
struct SparseCounts {
  std::vector<std::pair<TermId, std::uint32_t>> entries;

  std::uint64_t total() const;
  friend bool operator==(const SparseCounts&, const SparseCounts&) = default;
};

// Unlabeled term-frequency matrix. This is the only corpus view that the
// geometry, diffusion, taxonomy and reduce modules accept.
struct CountMatrix {
  Vocabulary vocab;
  std::vector<SparseCounts> rows;
  std::vector<std::string> ids;

  std::size_t num_documents() const { return rows.size(); }
  // Total count of every vocabulary word across all documents.
  std::vector<std::uint64_t> column_totals() const;
  friend bool operator==(const CountMatrix&, const CountMatrix&) = default;
};

struct PreprocessConfig {
  bool lowercase = true;
  bool stem = true;
  std::string stopword_file;  // empty: no stopwords
  std::size_t vocab_cap = 2000;
};

// Count matrix plus the evaluation labels that must never reach geometry
// construction or reduction.
struct DocumentMatrix {
  CountMatrix counts;
  std::optional<std::vector<std::string>> labels;
  PreprocessConfig preprocessing;

  const CountMatrix& unlabeled() const { return counts; }
  bool has_labels() const { return labels.has_value(); }
};

// Maximal runs of alphabetic characters. Non-ASCII UTF-8 bytes are kept as
// part of a token; only ASCII letters are case-folded.
Tokens tokenize(std::string_view text, bool lowercase = true);

Tokens preprocess(std::span<const std::string> tokens, const StopwordSet& stopwords,
                  bool stem);

// Most frequent `cap` tokens, ties broken lexicographically ascending. The
// resulting vocabulary is ordered by that same ranking.
Vocabulary build_vocabulary(std::span<const Tokens> docs, std::size_t cap);

CountMatrix count_matrix(std::span<const Tokens> docs, const Vocabulary& vocab,
                         std::vector<std::string> ids = {});

// Lowercase + stem a single word the same way corpus tokens are processed.
// Used to align external word lists (specs, taxonomies, lexicons).
std::string normalize_term(std::string_view word, const PreprocessConfig& config);

// Full ingest: tokenize, preprocess, build vocabulary, count.
DocumentMatrix build_document_matrix(std::span<const RawDocument> docs,
                                     const PreprocessConfig& config,
                                     const StopwordSet& stopwords);

// Ingest against an existing vocabulary (e.g. an estimation corpus that must
// share the visualization corpus vocabulary).
CountMatrix count_against(std::span<const RawDocument> docs, const Vocabulary& vocab,
                          const PreprocessConfig& config, const StopwordSet& stopwords);

std::vector<RawDocument> load_jsonl(const std::filesystem::path& path);
std::vector<RawDocument> load_text_directory(const std::filesystem::path& dir);
// Dispatches on whether `path` is a directory.
std::vector<RawDocument> load_corpus(const std::filesystem::path& path);
StopwordSet load_stopwords(const std::filesystem::path& path);

}  // namespace lingeo::corpus
