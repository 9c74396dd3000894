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

#include "lingeo/pipeline.hpp"

#include <set>

#include <json.hpp>

#include "lingeo/io.hpp"

namespace lingeo::pipeline {

using nlohmann::json;

namespace {

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const reduce::Cancelled&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

constexpr std::pair<Method, std::string_view> kMethodNames[] = {
    {Method::identity, "identity"},   {Method::manual, "manual"}, {Method::soft, "soft"},
    {Method::diffusion, "diffusion"}, {Method::ngram, "ngram"},   {Method::taxonomy, "taxonomy"},
    {Method::combine, "combine"},
};

}  // namespace

std::string_view to_string(Method m) {
  for (const auto& [method, name] : kMethodNames) {
    if (method == m) return name;
  }
  return "identity";
}

Method method_from_string(std::string_view s) {
  for (const auto& [method, name] : kMethodNames) {
    if (name == s) return method;
  }
  throw Error("unknown geometry method '" + std::string(s) + "'");
}

// ---------------------------------------------------------------- reducer

void ReducerSettings::validate() const {
  if (name != "pca" && name != "tsne") throw Error("unknown reducer '" + name + "'");
}

std::string ReducerSettings::to_json() const {
  if (name == "pca") return "{}";
  return tsne.to_json();
}

ReducerSettings parse_reducer_settings(std::string_view name, std::string_view config_json) {
  ReducerSettings r;
  r.name = std::string(name);
  r.validate();
  if (config_json.empty()) return r;
  json j;
  try {
    j = json::parse(config_json);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed reducer config: ") + e.what());
  }
  if (j.is_null()) return r;
  if (!j.is_object()) throw FormatError("reducer config must be an object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "perplexity") r.tsne.perplexity = value.get<double>();
      else if (key == "iterations") r.tsne.iterations = value.get<int>();
      else if (key == "learning_rate") r.tsne.learning_rate = value.get<double>();
      else if (key == "early_exaggeration") r.tsne.early_exaggeration = value.get<double>();
      else if (key == "exaggeration_iterations") r.tsne.exaggeration_iterations = value.get<int>();
      else if (key == "initial_momentum") r.tsne.initial_momentum = value.get<double>();
      else if (key == "final_momentum") r.tsne.final_momentum = value.get<double>();
      else if (key == "momentum_switch") r.tsne.momentum_switch = value.get<int>();
      else throw FormatError("unknown reducer setting '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad reducer setting: ") + e.what());
  }
  return r;
}

// ---------------------------------------------------------------- config

void PipelineConfig::validate() const {
  auto require_file = [](const std::filesystem::path& p, const char* what) {
    if (!p.empty() && !std::filesystem::exists(p)) {
      throw Error(std::string(what) + " '" + p.string() + "' does not exist");
    }
  };
  if (corpus.empty()) throw Error("no corpus given");
  require_file(corpus, "corpus");
  require_file(estimation_corpus, "estimation corpus");
  require_file(ngram_table, "n-gram table");
  require_file(taxonomy, "taxonomy");
  require_file(similarity_pairs, "similarity file");
  require_file(geometry_spec, "geometry spec");
  if (!preprocessing.stopword_file.empty()) require_file(preprocessing.stopword_file, "stopword file");
  reducer.validate();
  if (k < 1) throw Error("k must be positive");

  auto require_inputs = [&](Method m) {
    switch (m) {
      case Method::manual:
      case Method::soft:
        if (geometry_spec.empty()) throw Error(std::string(to_string(m)) + " geometry needs a geometry spec");
        break;
      case Method::ngram:
        if (ngram_table.empty()) throw Error("ngram geometry needs an n-gram table");
        break;
      case Method::taxonomy:
        if (taxonomy.empty() && similarity_pairs.empty()) {
          throw Error("taxonomy geometry needs a taxonomy or a similarity file");
        }
        break;
      case Method::combine:
        throw Error("combine cannot be a component of itself");
      default:
        break;
    }
  };
  if (method == Method::combine) {
    if (components.empty()) throw Error("combine needs at least one component");
    for (Method m : components) require_inputs(m);
    if (weights) geometry::CombinationWeights w(*weights);
    if (weights && weights->size() != components.size()) throw Error("one weight per component required");
  } else {
    require_inputs(method);
  }
}

PipelineConfig parse_pipeline_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed pipeline config: ") + e.what());
  }
  auto path = [&](const json& obj, const char* key) -> std::filesystem::path {
    if (!obj.contains(key) || obj.at(key).is_null()) return {};
    std::filesystem::path p = obj.at(key).get<std::string>();
    return p.is_absolute() ? p : base_dir / p;
  };
  PipelineConfig c;
  try {
    c.corpus = path(j, "corpus");
    c.estimation_corpus = path(j, "estimation_corpus");
    c.ngram_table = path(j, "ngram_table");
    c.taxonomy = path(j, "taxonomy");
    c.similarity_pairs = path(j, "similarity_pairs");
    c.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("preprocessing")) {
      const json& p = j.at("preprocessing");
      c.preprocessing.lowercase = p.value("lowercase", true);
      c.preprocessing.stem = p.value("stem", true);
      c.preprocessing.vocab_cap = p.value("vocab_cap", std::size_t{2000});
      c.preprocessing.stopword_file = path(p, "stopwords").string();
    }
    if (j.contains("geometry")) {
      const json& g = j.at("geometry");
      c.method = method_from_string(g.value("method", std::string("identity")));
      c.geometry_spec = path(g, "spec");
      c.diffusion_c = g.value("c", 1.0);
      if (g.value("normalization", std::string("l1")) == "raw") c.normalization = geometry::TfNormalization::raw;
      for (const auto& m : g.value("components", std::vector<std::string>{})) c.components.push_back(method_from_string(m));
      if (g.contains("weights")) c.weights = g.at("weights").get<std::vector<double>>();
      c.search.grid_step = g.value("grid", 0.1);
      c.search.objective = evaluate::objective_from_string(g.value("objective", std::string("davies_bouldin")));
    }
    if (j.contains("reducer")) {
      const json& r = j.at("reducer");
      c.reducer = parse_reducer_settings(r.value("name", std::string("pca")),
                                         r.contains("config") ? r.at("config").dump() : std::string());
    }
    if (j.contains("evaluation")) c.k = j.at("evaluation").value("k", 5);
    c.search.k = c.k;
    c.search.normalization = c.normalization;
    if (j.contains("output")) {
      const json& o = j.at("output");
      c.embedding_out = path(o, "embedding");
      c.report_out = path(o, "report");
      c.geometry_out = path(o, "geometry");
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad pipeline config: ") + e.what());
  }
  return c;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  return parse_pipeline_config(io::read_file(path), path.parent_path());
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// ---------------------------------------------------------------- stages

corpus::DocumentMatrix ingest(const std::filesystem::path& corpus_path, const corpus::PreprocessConfig& preprocessing) {
  return stage("ingest", [&] {
    corpus::StopwordSet stopwords;
    if (!preprocessing.stopword_file.empty()) stopwords = corpus::load_stopwords(preprocessing.stopword_file);
    const std::vector<corpus::RawDocument> docs = corpus::load_corpus(corpus_path);
    return corpus::build_document_matrix(docs, preprocessing, stopwords);
  });
}

Inputs load_inputs(const PipelineConfig& config) {
  stage("config", [&] {
    config.validate();
    return 0;
  });
  Inputs in;
  in.docs = ingest(config.corpus, config.preprocessing);
  const corpus::Vocabulary& vocab = in.docs.counts.vocab;
  const corpus::PreprocessConfig& pre = in.docs.preprocessing;
  stage("ingest", [&] {
    if (!pre.stopword_file.empty()) in.stopwords = corpus::load_stopwords(pre.stopword_file);
    if (!config.estimation_corpus.empty()) {
      in.estimation = corpus::count_against(corpus::load_corpus(config.estimation_corpus), vocab, pre, in.stopwords);
    }
    return 0;
  });
  stage("geometry inputs", [&] {
    if (!config.ngram_table.empty()) in.ngrams = diffusion::load_ngram_table(config.ngram_table, vocab, pre);
    if (!config.taxonomy.empty()) in.taxonomy = taxonomy::load_taxonomy(config.taxonomy, pre);
    if (!config.similarity_pairs.empty()) {
      in.similarity = taxonomy::load_similarity_pairs(config.similarity_pairs, vocab, pre);
    }
    if (!config.geometry_spec.empty()) in.spec = geometry::load_geometry_spec(config.geometry_spec);
    return 0;
  });
  return in;
}

geometry::TransformMatrix build_spec_geometry(const geometry::GeometrySpec& spec, const corpus::DocumentMatrix& docs) {
  return stage("geometry", [&] { return geometry::build_from_spec(spec, docs.counts.vocab, docs.preprocessing); });
}

geometry::TransformMatrix build_geometry(Method method, const Inputs& in, double diffusion_c) {
  return stage("geometry", [&]() -> geometry::TransformMatrix {
    const std::size_t n = in.docs.counts.vocab.size();
    switch (method) {
      case Method::identity:
        return geometry::identity_transform(n);
      case Method::manual:
      case Method::soft: {
        if (!in.spec) throw Error("no geometry spec loaded");
        const bool soft = std::holds_alternative<geometry::SoftSpec>(*in.spec);
        if (soft != (method == Method::soft)) {
          throw Error(std::string("geometry spec is not a ") + (method == Method::soft ? "soft" : "manual") + " spec");
        }
        return geometry::build_from_spec(*in.spec, in.docs.counts.vocab, in.docs.preprocessing);
      }
      case Method::diffusion:
        return diffusion::diffusion_geometry(diffusion::contextual_distributions(in.statistics_counts()),
                                             diffusion::DiffusionConfig{diffusion_c}, geometry::Provenance::diffusion);
      case Method::ngram:
        if (!in.ngrams) throw Error("no n-gram table loaded");
        return diffusion::diffusion_geometry(diffusion::ngram_contextual_distributions(*in.ngrams, in.docs.counts.vocab),
                                             diffusion::DiffusionConfig{diffusion_c}, geometry::Provenance::ngram);
      case Method::taxonomy:
        if (in.similarity) return geometry::symmetric_factor(*in.similarity, geometry::Provenance::taxonomy);
        if (!in.taxonomy) throw Error("no taxonomy loaded");
        return taxonomy::taxonomy_geometry(*in.taxonomy, in.statistics_counts());
      case Method::combine:
        break;
    }
    throw Error("combine is not a single geometry");
  });
}

reduce::Embedding2D reduce_points(const reduce::PointCloud& cloud, const ReducerSettings& reducer, std::uint64_t seed,
                                  const reduce::StopCheck& stop) {
  return stage("reduce", [&] {
    reducer.validate();
    reduce::Embedding2D e;
    if (reducer.name == "tsne") {
      reduce::TsneConfig cfg = reducer.tsne;
      cfg.seed = derive_seed(seed, kReducerStream);
      e = reduce::tsne(cloud, cfg, stop).embedding;
    } else {
      e = reduce::pca(cloud);
    }
    e.info.seed = seed;
    e.info.config = reducer.to_json();
    return e;
  });
}

reduce::Embedding2D embed(const geometry::TransformMatrix& H, const corpus::CountMatrix& counts,
                          const ReducerSettings& reducer, std::uint64_t seed, geometry::TfNormalization normalization,
                          const reduce::StopCheck& stop) {
  reduce::PointCloud cloud = stage("transform", [&] {
    return reduce::PointCloud{geometry::transform(H, counts, normalization), counts.ids};
  });
  reduce::Embedding2D e = reduce_points(cloud, reducer, seed, stop);
  e.info.geometry = std::string(geometry::to_string(H.provenance));
  return e;
}

PipelineResult run_pipeline(const PipelineConfig& config) {
  const Inputs in = load_inputs(config);
  PipelineResult result;
  result.labels = in.docs.labels;

  if (config.method == Method::combine) {
    std::vector<geometry::TransformMatrix> parts;
    for (Method m : config.components) parts.push_back(build_geometry(m, in, config.diffusion_c));
    std::vector<double> alpha;
    if (config.weights) {
      alpha = *config.weights;
    } else {
      if (!in.docs.labels) throw StageError("search", "weight search needs a labeled corpus");
      const evaluate::Reducer reducer = [&](const reduce::PointCloud& cloud) {
        return reduce_points(cloud, config.reducer, config.seed);
      };
      alpha = stage("search", [&] {
        return evaluate::search_convex_combination(parts, in.docs.counts, *in.docs.labels, reducer, config.search)
            .weights.values();
      });
    }
    result.geometry = stage("geometry", [&] {
      return geometry::convex_combination(parts, geometry::CombinationWeights(alpha));
    });
    result.weights = alpha;
  } else {
    result.geometry = build_geometry(config.method, in, config.diffusion_c);
  }

  result.embedding = embed(result.geometry, in.docs.counts, config.reducer, config.seed, config.normalization);
  if (in.docs.labels) {
    result.report = stage("evaluate", [&] {
      return evaluate::evaluate_all(evaluate::LabeledEmbedding(result.embedding.coords, *in.docs.labels), config.k);
    });
  }

  result.embedding_csv = io::embedding_to_csv(result.embedding, result.labels);
  if (result.report) result.report_json = io::report_to_json(*result.report, result.embedding.info);
  stage("output", [&] {
    if (!config.geometry_out.empty()) io::save_geometry(config.geometry_out, result.geometry);
    if (!config.embedding_out.empty()) io::write_file(config.embedding_out, result.embedding_csv);
    if (!config.report_out.empty()) {
      if (!result.report) throw Error("a report needs a labeled corpus");
      io::write_file(config.report_out, result.report_json);
    }
    return 0;
  });
  return result;
}

}  // namespace lingeo::pipeline
