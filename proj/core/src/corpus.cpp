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

#include "lingeo/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "lingeo/error.hpp"
#include "lingeo/porter_stemmer.hpp"

namespace lingeo::corpus {

Vocabulary::Vocabulary(std::vector<std::string> words) : words_(std::move(words)) {
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], static_cast<TermId>(i)).second) {
      throw Error("duplicate vocabulary word '" + words_[i] + "'");
    }
  }
}

std::optional<TermId> Vocabulary::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t SparseCounts::total() const {
  std::uint64_t sum = 0;
  for (const auto& [term, count] : entries) sum += count;
  return sum;
}

std::vector<std::uint64_t> CountMatrix::column_totals() const {
  std::vector<std::uint64_t> totals(vocab.size(), 0);
  for (const SparseCounts& row : rows) {
    for (const auto& [term, count] : row.entries) totals[term] += count;
  }
  return totals;
}

namespace {

bool is_ascii_alpha(unsigned char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

bool is_token_byte(unsigned char c) { return is_ascii_alpha(c) || c >= 0x80; }

}  // namespace

Tokens tokenize(std::string_view text, bool lowercase) {
  Tokens tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !is_token_byte(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && is_token_byte(static_cast<unsigned char>(text[i]))) ++i;
    if (i == start) continue;
    std::string token(text.substr(start, i - start));
    if (lowercase) {
      for (char& c : token) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      }
    }
    tokens.push_back(std::move(token));
  }
  return tokens;
}

Tokens preprocess(std::span<const std::string> tokens, const StopwordSet& stopwords, bool stem) {
  Tokens out;
  out.reserve(tokens.size());
  for (const std::string& t : tokens) {
    if (stopwords.contains(t)) continue;
    out.push_back(stem ? porter_stem(t) : t);
  }
  return out;
}

Vocabulary build_vocabulary(std::span<const Tokens> docs, std::size_t cap) {
  if (cap == 0) throw Error("vocabulary cap must be positive");
  std::unordered_map<std::string, std::uint64_t> freq;
  for (const Tokens& doc : docs) {
    for (const std::string& t : doc) ++freq[t];
  }
  if (freq.empty()) throw Error("empty corpus");

  std::vector<std::pair<std::string, std::uint64_t>> ranked(freq.begin(), freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > cap) ranked.resize(cap);

  std::vector<std::string> words;
  words.reserve(ranked.size());
  for (auto& [word, count] : ranked) words.push_back(std::move(word));
  return Vocabulary(std::move(words));
}

CountMatrix count_matrix(std::span<const Tokens> docs, const Vocabulary& vocab,
                         std::vector<std::string> ids) {
  if (ids.empty()) {
    ids.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) ids.push_back(std::to_string(i));
  }
  if (ids.size() != docs.size()) throw Error("document id count does not match document count");

  CountMatrix m;
  m.vocab = vocab;
  m.ids = std::move(ids);
  m.rows.reserve(docs.size());
  for (const Tokens& doc : docs) {
    std::map<TermId, std::uint32_t> counts;
    for (const std::string& t : doc) {
      if (auto id = vocab.find(t)) ++counts[*id];
    }
    SparseCounts row;
    row.entries.assign(counts.begin(), counts.end());
    m.rows.push_back(std::move(row));
  }
  return m;
}

std::string normalize_term(std::string_view word, const PreprocessConfig& config) {
  std::string w(word);
  if (config.lowercase) {
    for (char& c : w) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
  }
  return config.stem ? porter_stem(w) : w;
}

namespace {

std::vector<Tokens> preprocess_all(std::span<const RawDocument> docs, const PreprocessConfig& config,
                                   const StopwordSet& stopwords) {
  std::vector<Tokens> out;
  out.reserve(docs.size());
  for (const RawDocument& d : docs) {
    const Tokens raw = tokenize(d.text, config.lowercase);
    out.push_back(preprocess(raw, stopwords, config.stem));
  }
  return out;
}

std::vector<std::string> ids_of(std::span<const RawDocument> docs) {
  std::vector<std::string> ids;
  ids.reserve(docs.size());
  std::unordered_set<std::string> seen;
  for (const RawDocument& d : docs) {
    if (!seen.insert(d.id).second) throw Error("duplicate document id '" + d.id + "'");
    ids.push_back(d.id);
  }
  return ids;
}

}  // namespace

DocumentMatrix build_document_matrix(std::span<const RawDocument> docs,
                                     const PreprocessConfig& config,
                                     const StopwordSet& stopwords) {
  const std::vector<Tokens> processed = preprocess_all(docs, config, stopwords);
  DocumentMatrix dm;
  dm.preprocessing = config;
  dm.counts = count_matrix(processed, build_vocabulary(processed, config.vocab_cap), ids_of(docs));

  const bool any_label = std::any_of(docs.begin(), docs.end(), [](const RawDocument& d) { return d.label.has_value(); });
  if (any_label) {
    std::vector<std::string> labels;
    labels.reserve(docs.size());
    for (const RawDocument& d : docs) {
      if (!d.label) throw Error("document '" + d.id + "' has no label while others do");
      labels.push_back(*d.label);
    }
    dm.labels = std::move(labels);
  }
  return dm;
}

CountMatrix count_against(std::span<const RawDocument> docs, const Vocabulary& vocab,
                          const PreprocessConfig& config, const StopwordSet& stopwords) {
  return count_matrix(preprocess_all(docs, config, stopwords), vocab, ids_of(docs));
}

std::vector<RawDocument> load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file " + path.string());
  std::vector<RawDocument> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      RawDocument d;
      d.id = j.at("id").get<std::string>();
      d.text = j.at("text").get<std::string>();
      if (j.contains("label") && !j["label"].is_null()) d.label = j["label"].get<std::string>();
      docs.push_back(std::move(d));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return docs;
}

std::vector<RawDocument> load_text_directory(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<RawDocument> docs;
  docs.reserve(files.size());
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    docs.push_back({f.stem().string(), ss.str(), std::nullopt});
  }
  return docs;
}

std::vector<RawDocument> load_corpus(const std::filesystem::path& path) {
  if (std::filesystem::is_directory(path)) return load_text_directory(path);
  return load_jsonl(path);
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stopword file " + path.string());
  StopwordSet words;
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    std::string w = line.substr(b, e - b + 1);
    for (char& c : w) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    words.insert(std::move(w));
  }
  return words;
}

}  // namespace lingeo::corpus
