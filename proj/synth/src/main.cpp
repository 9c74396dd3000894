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

#include <iostream>

#include <CLI11.hpp>

#include "lingeo_synth/synth.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate synthetic labeled corpora"};
  app.require_subcommand(1);

  lingeo::synth::SentimentParams sentiment;
  std::string sentiment_out;
  auto* s = app.add_subcommand("sentiment", "two-class polarity corpus with a lexicon spec");
  s->add_option("--out", sentiment_out, "output directory")->required();
  s->add_option("--seed", sentiment.seed);
  s->add_option("--docs-per-class", sentiment.docs_per_class);

  lingeo::synth::TopicalParams topical;
  std::string topical_out;
  auto* t = app.add_subcommand("topical", "multi-topic corpus with n-grams and a taxonomy");
  t->add_option("--out", topical_out, "output directory")->required();
  t->add_option("--seed", topical.seed);
  t->add_option("--topics", topical.topics);
  t->add_option("--docs-per-topic", topical.docs_per_topic);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*s) lingeo::synth::write_sentiment(sentiment_out, lingeo::synth::make_sentiment(sentiment));
    if (*t) lingeo::synth::write_topical(topical_out, lingeo::synth::make_topical(topical));
  } catch (const std::exception& e) {
    std::cerr << "lingeo-synth: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
