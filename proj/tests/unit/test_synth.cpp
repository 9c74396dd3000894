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

#include <set>

#include <gtest/gtest.h>

#include "lingeo/error.hpp"
#include "lingeo/geometry_spec.hpp"
#include "lingeo/porter_stemmer.hpp"
#include "lingeo_synth/synth.hpp"
#include "test_util.hpp"

using namespace lingeo;

TEST(Synth, SentimentIsDeterministicAndBalanced) {
  synth::SentimentParams p;
  p.docs_per_class = 20;
  p.estimation_docs = 30;
  const auto a = synth::make_sentiment(p);
  const auto b = synth::make_sentiment(p);
  EXPECT_EQ(synth::to_jsonl(a.corpus.visualization), synth::to_jsonl(b.corpus.visualization));
  EXPECT_EQ(a.lexicon_spec, b.lexicon_spec);
  ASSERT_EQ(a.corpus.visualization.size(), 40u);
  EXPECT_EQ(a.corpus.estimation.size(), 30u);
  std::map<std::string, int> classes;
  for (const auto& d : a.corpus.visualization) ++classes[*d.label];
  EXPECT_EQ(classes.size(), 2u);
  for (const auto& [label, n] : classes) EXPECT_EQ(n, 20);
  for (const auto& d : a.corpus.estimation) EXPECT_FALSE(d.label);
  p.seed = 8;
  EXPECT_NE(synth::to_jsonl(synth::make_sentiment(p).corpus.visualization), synth::to_jsonl(a.corpus.visualization));
}

TEST(Synth, WordsSurviveStemming) {
  const auto s = synth::make_sentiment(synth::SentimentParams{});
  std::set<std::string> all;
  for (const auto* list : {&s.positive_words, &s.negative_words}) {
    for (const auto& w : *list) {
      EXPECT_EQ(corpus::porter_stem(w), w);
      EXPECT_TRUE(all.insert(w).second);
    }
  }
  const auto spec = geometry::parse_geometry_spec(s.lexicon_spec);
  EXPECT_TRUE(std::holds_alternative<geometry::ManualSpec>(spec));
}

TEST(Synth, TopicalFiles) {
  synth::TopicalParams p;
  p.docs_per_topic = 10;
  p.estimation_docs = 20;
  p.ngram_sentences = 50;
  const auto t = synth::make_topical(p);
  EXPECT_EQ(t.corpus.visualization.size(), 30u);
  EXPECT_EQ(t.topic_names.size(), 3u);
  const auto dir = lingeo::testing::temp_dir("synth_topical");
  synth::write_topical(dir, t);
  for (const char* f : {"corpus.jsonl", "estimation.jsonl", "ngrams.tsv", "taxonomy.txt", "manual_spec.json", "pipeline.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  EXPECT_NE(t.ngram_table.find('\t'), std::string::npos);
  EXPECT_NE(t.taxonomy.find("isa "), std::string::npos);
  EXPECT_NO_THROW(geometry::parse_geometry_spec(t.manual_spec));
}
