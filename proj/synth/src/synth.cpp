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

#include "lingeo_synth/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include <json.hpp>

#include "lingeo/error.hpp"
#include "lingeo/io.hpp"
#include "lingeo/porter_stemmer.hpp"

namespace lingeo::synth {

using nlohmann::ordered_json;

namespace {

// Pronounceable pseudo-words that the stemmer leaves alone, so every
// generated word is its own vocabulary entry.
class WordMaker {
 public:
  explicit WordMaker(std::mt19937_64& rng) : rng_(rng) {}

  std::vector<std::string> make(std::size_t count) {
    static constexpr std::string_view consonants = "bdfgklmnprtvz";
    static constexpr std::string_view vowels = "aiou";
    std::uniform_int_distribution<int> syllables(2, 3);
    std::uniform_int_distribution<std::size_t> pick_c(0, consonants.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_v(0, vowels.size() - 1);
    std::vector<std::string> out;
    while (out.size() < count) {
      std::string w;
      for (int s = syllables(rng_); s > 0; --s) {
        w += consonants[pick_c(rng_)];
        w += vowels[pick_v(rng_)];
      }
      if (corpus::porter_stem(w) != w || !used_.insert(w).second) continue;
      out.push_back(std::move(w));
    }
    return out;
  }

 private:
  std::mt19937_64& rng_;
  std::set<std::string> used_;
};

std::discrete_distribution<std::size_t> zipf(std::size_t n, double exponent) {
  std::vector<double> w(n);
  for (std::size_t r = 0; r < n; ++r) w[r] = 1.0 / std::pow(static_cast<double>(r + 1), exponent);
  return std::discrete_distribution<std::size_t>(w.begin(), w.end());
}

const std::string& pick(const std::vector<std::string>& words, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> d(0, words.size() - 1);
  return words[d(rng)];
}

// Tokens joined into sentences of 6 to 12 words.
std::string render(const std::vector<std::string>& tokens, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> sentence(6, 12);
  std::string text;
  int left = sentence(rng);
  bool capital = true;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string w = tokens[i];
    if (capital) w[0] = static_cast<char>(w[0] - 'a' + 'A');
    capital = false;
    if (!text.empty()) text += ' ';
    text += w;
    if (--left == 0 || i + 1 == tokens.size()) {
      text += '.';
      left = sentence(rng);
      capital = true;
    }
  }
  return text;
}

std::string doc_id(char prefix, std::size_t i) {
  std::string n = std::to_string(i);
  if (n.size() < 4) n.insert(0, 4 - n.size(), '0');
  return prefix + n;
}

std::vector<std::string> take(std::vector<std::string> words, double fraction, std::mt19937_64& rng) {
  std::shuffle(words.begin(), words.end(), rng);
  words.resize(static_cast<std::size_t>(std::round(fraction * static_cast<double>(words.size()))));
  std::sort(words.begin(), words.end());
  return words;
}

ordered_json cluster(const std::string& name, const std::vector<std::string>& words, double importance) {
  return {{"name", name}, {"words", words}, {"rho_self", 1.0}, {"importance", importance}};
}

}  // namespace

SentimentData make_sentiment(const SentimentParams& p) {
  if (p.min_length == 0 || p.max_length < p.min_length) throw Error("bad document length range");
  std::mt19937_64 rng(p.seed);
  WordMaker maker(rng);
  SentimentData data;
  data.positive_words = maker.make(p.words_per_polarity);
  data.negative_words = maker.make(p.words_per_polarity);
  const std::vector<std::string> neutral = maker.make(p.neutral_words);

  auto neutral_dist = zipf(neutral.size(), 1.0);
  auto polar_dist = zipf(p.words_per_polarity, 0.5);
  std::uniform_int_distribution<std::size_t> length(p.min_length, p.max_length);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  auto document = [&](int polarity) {
    std::vector<std::string> tokens(length(rng));
    for (std::string& t : tokens) {
      if (u(rng) < p.sentiment_rate) {
        const bool flip = u(rng) < p.cross_rate;
        const auto& words = (polarity == 0) != flip ? data.positive_words : data.negative_words;
        t = words[polar_dist(rng)];
      } else {
        t = neutral[neutral_dist(rng)];
      }
    }
    return render(tokens, rng);
  };

  std::vector<int> classes;
  for (std::size_t i = 0; i < p.docs_per_class; ++i) {
    classes.push_back(0);
    classes.push_back(1);
  }
  std::shuffle(classes.begin(), classes.end(), rng);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    data.corpus.visualization.push_back(
        {doc_id('s', i), document(classes[i]), classes[i] == 0 ? "positive" : "negative"});
  }
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < p.estimation_docs; ++i) {
    data.corpus.estimation.push_back({doc_id('e', i), document(coin(rng) ? 0 : 1), std::nullopt});
  }

  ordered_json spec;
  spec["clusters"] = {cluster("positive", take(data.positive_words, p.lexicon_coverage, rng), 3.0),
                      cluster("negative", take(data.negative_words, p.lexicon_coverage, rng), 3.0)};
  spec["rho_pairs"] = {{{"a", "positive"}, {"b", "positive"}, {"value", 1.0}},
                       {{"a", "negative"}, {"b", "negative"}, {"value", 1.0}}};
  spec["unassigned"] = {{"rho_self", 1.0}, {"importance", 0.5}};
  data.lexicon_spec = spec.dump(2) + "\n";
  return data;
}

TopicalData make_topical(const TopicalParams& p) {
  if (p.topics < 2 || p.subtopics < 1) throw Error("need at least two topics and one subtopic");
  if (p.min_length == 0 || p.max_length < p.min_length) throw Error("bad document length range");
  static const std::vector<std::string> kNames = {"sports", "finance", "science", "travel", "music", "health"};
  std::mt19937_64 rng(p.seed);
  WordMaker maker(rng);
  TopicalData data;
  // words[t][s] lists subtopic s of topic t.
  std::vector<std::vector<std::vector<std::string>>> words(p.topics);
  for (std::size_t t = 0; t < p.topics; ++t) {
    data.topic_names.push_back(t < kNames.size() ? kNames[t] : "topic" + std::to_string(t));
    for (std::size_t s = 0; s < p.subtopics; ++s) words[t].push_back(maker.make(p.words_per_subtopic));
  }
  const std::vector<std::string> general = maker.make(p.general_words);

  auto general_dist = zipf(general.size(), 1.0);
  std::uniform_int_distribution<std::size_t> length(p.min_length, p.max_length);
  std::uniform_int_distribution<std::size_t> any_topic(0, p.topics - 1);
  std::uniform_int_distribution<std::size_t> any_sub(0, p.subtopics - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  auto tokens_for = [&](std::size_t topic, std::size_t sub, std::size_t n) {
    std::vector<std::string> tokens(n);
    for (std::string& tok : tokens) {
      if (u(rng) >= p.topic_rate) {
        tok = general[general_dist(rng)];
        continue;
      }
      std::size_t t = topic;
      std::size_t s = sub;
      if (u(rng) < p.noise_rate) {
        t = (topic + 1 + any_topic(rng) % (p.topics - 1)) % p.topics;
        s = any_sub(rng);
      } else if (u(rng) >= p.subtopic_focus) {
        s = any_sub(rng);
      }
      tok = pick(words[t][s], rng);
    }
    return tokens;
  };

  std::vector<std::size_t> classes;
  for (std::size_t i = 0; i < p.docs_per_topic; ++i) {
    for (std::size_t t = 0; t < p.topics; ++t) classes.push_back(t);
  }
  std::shuffle(classes.begin(), classes.end(), rng);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const std::size_t t = classes[i];
    data.corpus.visualization.push_back(
        {doc_id('t', i), render(tokens_for(t, any_sub(rng), length(rng)), rng), data.topic_names[t]});
  }
  for (std::size_t i = 0; i < p.estimation_docs; ++i) {
    data.corpus.estimation.push_back(
        {doc_id('e', i), render(tokens_for(any_topic(rng), any_sub(rng), length(rng)), rng), std::nullopt});
  }

  // Trigram counts over short topical word streams.
  std::map<std::string, std::uint64_t> grams;
  std::uniform_int_distribution<std::size_t> sentence(8, 15);
  for (std::size_t i = 0; i < p.ngram_sentences; ++i) {
    const std::vector<std::string> tokens = tokens_for(any_topic(rng), any_sub(rng), sentence(rng));
    for (std::size_t k = 0; k + 2 < tokens.size(); ++k) ++grams[tokens[k] + ' ' + tokens[k + 1] + ' ' + tokens[k + 2]];
  }
  for (const auto& [gram, count] : grams) data.ngram_table += gram + '\t' + std::to_string(count) + '\n';

  std::string& tax = data.taxonomy;
  tax += "# topics, subtopics and a general branch\nconcept entity\n";
  for (std::size_t t = 0; t < p.topics; ++t) {
    tax += "isa " + data.topic_names[t] + " entity\n";
    for (std::size_t s = 0; s < p.subtopics; ++s) {
      const std::string sub = data.topic_names[t] + "_" + std::to_string(s);
      tax += "isa " + sub + " " + data.topic_names[t] + "\n";
      for (const std::string& w : words[t][s]) {
        if (u(rng) < p.taxonomy_coverage) tax += "member " + w + " " + sub + "\n";
      }
    }
  }
  tax += "isa general entity\n";
  for (int g = 0; g < 4; ++g) tax += "isa general_" + std::to_string(g) + " general\n";
  std::uniform_int_distribution<int> any_general(0, 3);
  for (const std::string& w : general) {
    if (u(rng) < p.taxonomy_coverage) tax += "member " + w + " general_" + std::to_string(any_general(rng)) + "\n";
  }

  ordered_json spec;
  spec["clusters"] = ordered_json::array();
  spec["rho_pairs"] = ordered_json::array();
  for (std::size_t t = 0; t < p.topics; ++t) {
    std::vector<std::string> all;
    for (const auto& sub : words[t]) all.insert(all.end(), sub.begin(), sub.end());
    spec["clusters"].push_back(cluster(data.topic_names[t], take(all, p.spec_coverage, rng), 3.0));
    spec["rho_pairs"].push_back({{"a", data.topic_names[t]}, {"b", data.topic_names[t]}, {"value", 1.0}});
  }
  spec["unassigned"] = {{"rho_self", 1.0}, {"importance", 0.5}};
  data.manual_spec = spec.dump(2) + "\n";
  return data;
}

std::string to_jsonl(const std::vector<corpus::RawDocument>& docs) {
  std::string out;
  for (const corpus::RawDocument& d : docs) {
    ordered_json j;
    j["id"] = d.id;
    j["text"] = d.text;
    if (d.label) j["label"] = *d.label;
    out += j.dump() + "\n";
  }
  return out;
}

namespace {

void write_config(const std::filesystem::path& path, ordered_json config) {
  io::write_file(path, config.dump(2) + "\n");
}

}  // namespace

void write_sentiment(const std::filesystem::path& dir, const SentimentData& data) {
  std::filesystem::create_directories(dir);
  io::write_file(dir / "corpus.jsonl", to_jsonl(data.corpus.visualization));
  io::write_file(dir / "estimation.jsonl", to_jsonl(data.corpus.estimation));
  io::write_file(dir / "lexicon_spec.json", data.lexicon_spec);
  write_config(dir / "pipeline.json",
               {{"corpus", "corpus.jsonl"},
                {"estimation_corpus", "estimation.jsonl"},
                {"seed", 1},
                {"geometry", {{"method", "manual"}, {"spec", "lexicon_spec.json"}}},
                {"reducer", {{"name", "tsne"}}},
                {"evaluation", {{"k", 5}}},
                {"output", {{"embedding", "embedding.csv"}, {"report", "report.json"}}}});
}

void write_topical(const std::filesystem::path& dir, const TopicalData& data) {
  std::filesystem::create_directories(dir);
  io::write_file(dir / "corpus.jsonl", to_jsonl(data.corpus.visualization));
  io::write_file(dir / "estimation.jsonl", to_jsonl(data.corpus.estimation));
  io::write_file(dir / "ngrams.tsv", data.ngram_table);
  io::write_file(dir / "taxonomy.txt", data.taxonomy);
  io::write_file(dir / "manual_spec.json", data.manual_spec);
  write_config(dir / "pipeline.json",
               {{"corpus", "corpus.jsonl"},
                {"estimation_corpus", "estimation.jsonl"},
                {"ngram_table", "ngrams.tsv"},
                {"taxonomy", "taxonomy.txt"},
                {"seed", 1},
                {"geometry",
                 {{"method", "combine"},
                  {"spec", "manual_spec.json"},
                  {"components", {"manual", "diffusion", "ngram", "taxonomy"}},
                  {"grid", 0.1}}},
                {"reducer", {{"name", "pca"}}},
                {"evaluation", {{"k", 5}}},
                {"output", {{"embedding", "embedding.csv"}, {"report", "report.json"}}}});
}

}  // namespace lingeo::synth
