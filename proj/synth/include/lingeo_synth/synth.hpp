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
#include <string>
#include <vector>

#include "lingeo/corpus.hpp"

// Synthetic labeled corpora with the structure the geometries are meant to
// exploit: many rare class-bearing words over a background of frequent
// neutral ones.
namespace lingeo::synth {

struct SplitCorpus {
  std::vector<corpus::RawDocument> visualization;
  std::vector<corpus::RawDocument> estimation;  // held out, used for corpus statistics
};

struct SentimentParams {
  std::size_t words_per_polarity = 150;
  std::size_t neutral_words = 400;
  std::size_t docs_per_class = 120;
  std::size_t estimation_docs = 400;
  std::size_t min_length = 30;
  std::size_t max_length = 60;
  double sentiment_rate = 0.25;  // fraction of tokens carrying polarity
  double cross_rate = 0.2;       // of those, fraction from the other polarity
  double lexicon_coverage = 0.6; // fraction of polar words listed in the lexicon
  std::uint64_t seed = 7;
};

struct SentimentData {
  SplitCorpus corpus;
  std::vector<std::string> positive_words;
  std::vector<std::string> negative_words;
  std::string lexicon_spec;  // manual geometry spec JSON
};

struct TopicalParams {
  std::size_t topics = 3;
  std::size_t subtopics = 3;
  std::size_t words_per_subtopic = 40;
  std::size_t general_words = 400;
  std::size_t docs_per_topic = 100;
  std::size_t estimation_docs = 600;
  std::size_t min_length = 25;
  std::size_t max_length = 50;
  double topic_rate = 0.3;        // fraction of topical tokens
  double subtopic_focus = 0.6;    // topical tokens from the document's subtopic
  double noise_rate = 0.1;        // topical tokens from another topic
  std::size_t ngram_sentences = 3000;
  double taxonomy_coverage = 0.85;
  double spec_coverage = 0.4;
  std::uint64_t seed = 11;
};

struct TopicalData {
  SplitCorpus corpus;
  std::vector<std::string> topic_names;
  std::string ngram_table;  // "a b c<TAB>count" lines
  std::string taxonomy;     // concept / isa / member lines
  std::string manual_spec;  // manual geometry spec JSON
};

SentimentData make_sentiment(const SentimentParams& params);
TopicalData make_topical(const TopicalParams& params);

std::string to_jsonl(const std::vector<corpus::RawDocument>& docs);

// Writes corpus.jsonl, estimation.jsonl and the side inputs into `dir`.
void write_sentiment(const std::filesystem::path& dir, const SentimentData& data);
void write_topical(const std::filesystem::path& dir, const TopicalData& data);

}  // namespace lingeo::synth
