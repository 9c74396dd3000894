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

#include <csignal>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lingeo/io.hpp"
#include "lingeo/pipeline.hpp"
#include "lingeo/service.hpp"

namespace {

using namespace lingeo;

struct ReducerFlags {
  std::string name = "pca";
  std::optional<double> perplexity;
  std::optional<int> iterations;
  std::optional<double> learning_rate;
  std::uint64_t seed = 0;

  void add(CLI::App* cmd) {
    cmd->add_option("--reducer", name, "pca or tsne")->check(CLI::IsMember({"pca", "tsne"}));
    cmd->add_option("--perplexity", perplexity);
    cmd->add_option("--iters", iterations);
    cmd->add_option("--learning-rate", learning_rate);
    cmd->add_option("--seed", seed, "top-level seed");
  }

  pipeline::ReducerSettings settings() const {
    pipeline::ReducerSettings r;
    r.name = name;
    if (perplexity) r.tsne.perplexity = *perplexity;
    if (iterations) r.tsne.iterations = *iterations;
    if (learning_rate) r.tsne.learning_rate = *learning_rate;
    return r;
  }
};

std::vector<geometry::TransformMatrix> load_components(const std::vector<std::string>& paths) {
  std::vector<geometry::TransformMatrix> out;
  for (const std::string& p : paths) out.push_back(io::load_geometry(p));
  return out;
}

// Inputs for a single geometry built from a saved document matrix.
pipeline::Inputs matrix_inputs(const std::string& matrix, const std::string& estimation) {
  pipeline::Inputs in;
  in.docs = io::load_document_matrix(matrix);
  const corpus::PreprocessConfig& pre = in.docs.preprocessing;
  if (!pre.stopword_file.empty()) in.stopwords = corpus::load_stopwords(pre.stopword_file);
  if (!estimation.empty()) {
    in.estimation = corpus::count_against(corpus::load_corpus(estimation), in.docs.counts.vocab, pre, in.stopwords);
  }
  return in;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linguistic geometries for document visualization"};
  app.require_subcommand(1);

  // ingest
  std::string corpus_path, matrix_out;
  corpus::PreprocessConfig pre;
  bool no_stem = false, no_lowercase = false;
  auto* ingest = app.add_subcommand("ingest", "tokenize a corpus into a document matrix");
  ingest->add_option("--corpus", corpus_path, "JSON-lines file or directory of .txt files")->required();
  ingest->add_option("--out", matrix_out)->required();
  ingest->add_option("--vocab-cap", pre.vocab_cap);
  ingest->add_option("--stopwords", pre.stopword_file);
  ingest->add_flag("--no-stem", no_stem);
  ingest->add_flag("--no-lowercase", no_lowercase);

  // geometry
  std::string geo_matrix, geo_out, spec_path, estimation_path, ngram_path, taxonomy_path, similarity_path;
  std::vector<std::string> component_paths;
  std::vector<double> weights;
  double diffusion_c = 1.0;
  auto* geo = app.add_subcommand("geometry", "build a geometry transform H");
  geo->require_subcommand(1);
  struct GeoCmd {
    CLI::App* cmd;
    pipeline::Method method;
  };
  std::vector<GeoCmd> geo_cmds;
  for (pipeline::Method m : {pipeline::Method::identity, pipeline::Method::manual, pipeline::Method::soft,
                             pipeline::Method::diffusion, pipeline::Method::ngram, pipeline::Method::taxonomy,
                             pipeline::Method::combine}) {
    auto* cmd = geo->add_subcommand(std::string(pipeline::to_string(m)));
    cmd->add_option("--out", geo_out)->required();
    if (m == pipeline::Method::combine) {
      cmd->add_option("--components", component_paths, "geometry files")->delimiter(',')->required();
      cmd->add_option("--weights", weights, "convex weights")->delimiter(',')->required();
    } else {
      cmd->add_option("--matrix", geo_matrix, "document matrix from ingest")->required();
    }
    if (m == pipeline::Method::manual || m == pipeline::Method::soft) cmd->add_option("--spec", spec_path)->required();
    if (m == pipeline::Method::diffusion || m == pipeline::Method::taxonomy) {
      cmd->add_option("--estimation", estimation_path, "held-out corpus for word statistics");
    }
    if (m == pipeline::Method::diffusion || m == pipeline::Method::ngram) cmd->add_option("--c", diffusion_c);
    if (m == pipeline::Method::ngram) cmd->add_option("--ngrams", ngram_path)->required();
    if (m == pipeline::Method::taxonomy) {
      auto* t = cmd->add_option("--taxonomy", taxonomy_path);
      auto* s = cmd->add_option("--similarity", similarity_path, "precomputed word-pair scores");
      t->excludes(s);
    }
    geo_cmds.push_back({cmd, m});
  }

  // embed
  std::string embed_matrix, embed_geometry, embed_out;
  ReducerFlags embed_flags;
  bool raw_tf = false;
  auto* emb = app.add_subcommand("embed", "transform and reduce documents to 2-D");
  emb->add_option("--matrix", embed_matrix)->required();
  emb->add_option("--geometry", embed_geometry, "geometry file (identity when omitted)");
  emb->add_option("--out", embed_out)->required();
  emb->add_flag("--raw-tf", raw_tf, "skip L1 normalization of tf vectors");
  embed_flags.add(emb);

  // evaluate
  std::string eval_embedding, eval_out;
  int k = 5;
  auto* ev = app.add_subcommand("evaluate", "score a labeled embedding");
  ev->add_option("--embedding", eval_embedding)->required();
  ev->add_option("--k", k);
  ev->add_option("--out", eval_out);

  // search-alpha
  std::string search_matrix, search_out, search_geometry_out, objective = "davies_bouldin";
  std::vector<std::string> search_components;
  double grid = 0.1;
  unsigned threads = 1;
  ReducerFlags search_flags;
  auto* sa = app.add_subcommand("search-alpha", "grid search over convex combinations");
  sa->add_option("--matrix", search_matrix)->required();
  sa->add_option("--components", search_components)->delimiter(',')->required();
  sa->add_option("--grid", grid);
  sa->add_option("--objective", objective)
      ->check(CLI::IsMember({"davies_bouldin", "intra_inter", "knn_error", "lda_overlap"}));
  sa->add_option("--k", k);
  sa->add_option("--threads", threads);
  sa->add_option("--out", search_out, "write the result JSON here instead of stdout");
  sa->add_option("--geometry-out", search_geometry_out, "save the winning combination");
  search_flags.add(sa);

  // serve
  std::string serve_config, host = "127.0.0.1";
  int port = 8080;
  auto* sv = app.add_subcommand("serve", "HTTP service for interactive editing");
  sv->add_option("--config", serve_config)->required();
  sv->add_option("--port", port);
  sv->add_option("--host", host);

  // run
  std::string run_config;
  auto* run = app.add_subcommand("run", "execute a full pipeline config");
  run->add_option("--config", run_config)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      pre.stem = !no_stem;
      pre.lowercase = !no_lowercase;
      io::save_document_matrix(matrix_out, pipeline::ingest(corpus_path, pre));
    } else if (*geo) {
      for (const GeoCmd& g : geo_cmds) {
        if (!*g.cmd) continue;
        geometry::TransformMatrix H;
        if (g.method == pipeline::Method::combine) {
          const auto parts = load_components(component_paths);
          H = geometry::convex_combination(parts, geometry::CombinationWeights(weights));
        } else {
          pipeline::Inputs in = matrix_inputs(geo_matrix, estimation_path);
          const corpus::PreprocessConfig& p = in.docs.preprocessing;
          if (!spec_path.empty()) in.spec = geometry::load_geometry_spec(spec_path);
          if (!ngram_path.empty()) in.ngrams = diffusion::load_ngram_table(ngram_path, in.docs.counts.vocab, p);
          if (!taxonomy_path.empty()) in.taxonomy = taxonomy::load_taxonomy(taxonomy_path, p);
          if (!similarity_path.empty()) {
            in.similarity = taxonomy::load_similarity_pairs(similarity_path, in.docs.counts.vocab, p);
          }
          H = pipeline::build_geometry(g.method, in, diffusion_c);
        }
        io::save_geometry(geo_out, H);
      }
    } else if (*emb) {
      const corpus::DocumentMatrix m = io::load_document_matrix(embed_matrix);
      const geometry::TransformMatrix H = embed_geometry.empty()
                                              ? geometry::identity_transform(m.counts.vocab.size())
                                              : io::load_geometry(embed_geometry);
      const reduce::Embedding2D e =
          pipeline::embed(H, m.counts, embed_flags.settings(), embed_flags.seed,
                          raw_tf ? geometry::TfNormalization::raw : geometry::TfNormalization::l1);
      io::save_embedding(embed_out, e, m.labels);
    } else if (*ev) {
      const io::EmbeddingFile f = io::load_embedding(eval_embedding);
      if (!f.labels) throw Error("embedding file has no label column");
      const evaluate::EvaluationReport r =
          evaluate::evaluate_all(evaluate::LabeledEmbedding(f.embedding.coords, *f.labels), k);
      const std::string json = io::report_to_json(r, f.embedding.info);
      if (eval_out.empty()) std::cout << json;
      else io::write_file(eval_out, json);
    } else if (*sa) {
      const corpus::DocumentMatrix m = io::load_document_matrix(search_matrix);
      if (!m.labels) throw Error("weight search needs a labeled document matrix");
      const auto parts = load_components(search_components);
      const pipeline::ReducerSettings reducer = search_flags.settings();
      evaluate::SearchConfig cfg;
      cfg.grid_step = grid;
      cfg.objective = evaluate::objective_from_string(objective);
      cfg.k = k;
      cfg.threads = threads;
      const evaluate::SearchResult result = evaluate::search_convex_combination(
          parts, m.counts, *m.labels,
          [&](const reduce::PointCloud& cloud) { return pipeline::reduce_points(cloud, reducer, search_flags.seed); },
          cfg);
      reduce::EmbeddingInfo info{reducer.name, "combination", search_flags.seed, reducer.to_json()};
      nlohmann::ordered_json j;
      j["weights"] = result.weights.values();
      j["objective"] = evaluate::to_string(cfg.objective);
      j["objective_value"] = result.objective;
      j["report"] = nlohmann::ordered_json::parse(io::report_to_json(result.report, info));
      const std::string out = j.dump(2) + "\n";
      if (search_out.empty()) std::cout << out;
      else io::write_file(search_out, out);
      if (!search_geometry_out.empty()) {
        io::save_geometry(search_geometry_out, geometry::convex_combination(parts, result.weights));
      }
    } else if (*sv) {
      pipeline::Session session(pipeline::load_pipeline_config(serve_config));
      pipeline::Service service(session);
      const int bound = service.bind(host, port);
      std::cerr << "lingeo: serving on http://" << host << ":" << bound << "\n";
      service.run();
    } else if (*run) {
      const pipeline::PipelineResult r = pipeline::run_pipeline(pipeline::load_pipeline_config(run_config));
      if (!r.report_json.empty()) std::cout << r.report_json;
    }
  } catch (const std::exception& e) {
    std::cerr << "lingeo: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
