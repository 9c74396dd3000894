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

#include "lingeo/session.hpp"

#include <charconv>
#include <cstdio>
#include <functional>

#include <json.hpp>

#include "lingeo/io.hpp"

namespace lingeo::pipeline {

using nlohmann::ordered_json;

namespace {

constexpr std::size_t kCacheCapacity = 32;

std::string shortest(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string key_digest(const std::string& key) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016zx", std::hash<std::string>{}(key));
  return buf;
}

std::vector<Method> default_components(const Inputs& in) {
  std::vector<Method> out;
  if (in.spec) out.push_back(std::holds_alternative<geometry::SoftSpec>(*in.spec) ? Method::soft : Method::manual);
  out.push_back(Method::diffusion);
  if (in.ngrams) out.push_back(Method::ngram);
  if (in.taxonomy || in.similarity) out.push_back(Method::taxonomy);
  return out;
}

geometry::TransformMatrix combine_parts(const std::vector<geometry::TransformMatrix>& parts,
                                       const std::vector<double>& weights) {
  try {
    return geometry::convex_combination(parts, geometry::CombinationWeights(weights));
  } catch (const Error& e) {
    throw StageError("geometry", e.what());
  }
}

ordered_json report_object(const evaluate::EvaluationReport& r) {
  ordered_json j;
  j["measure_i"] = r.intra_inter;
  j["measure_ii"] = r.davies_bouldin;
  j["measure_iii"] = {{"k", r.k}, {"accuracy", r.knn_accuracy}};
  if (r.lda_overlap) j["measure_iv"] = *r.lda_overlap;
  return j;
}

std::vector<std::string> method_names(const std::vector<Method>& ms) {
  std::vector<std::string> out;
  for (Method m : ms) out.emplace_back(to_string(m));
  return out;
}

}  // namespace

Session::Session(const PipelineConfig& config) : Session(load_inputs(config), config) {}

Session::Session(Inputs inputs, const PipelineConfig& config) : config_(config), inputs_(std::move(inputs)) {
  desired_.method = config.method;
  desired_.spec = inputs_.spec;
  desired_.components = config.components.empty() ? default_components(inputs_) : config.components;
  if (config.weights) {
    desired_.weights = *config.weights;
  } else {
    desired_.weights.assign(desired_.components.size(), 1.0 / static_cast<double>(desired_.components.size()));
  }
  desired_.reducer = config.reducer;
  desired_.seed = config.seed;
  std::lock_guard lock(write_mutex_);
  auto first = compute(desired_, next_revision_, {});
  history_.push_back({next_revision_, "initial", true});
  published_ = std::move(first);
  ++next_revision_;
}

template <typename Change>
MutationResult Session::mutate(const char* kind, Change&& change) {
  ++waiting_;
  std::unique_lock lock(write_mutex_);
  --waiting_;
  Desired next = desired_;
  change(next);
  const std::uint64_t revision = next_revision_;
  std::shared_ptr<const Published> result;
  try {
    result = compute(next, revision, [this] { return waiting_.load() > 0; });
  } catch (const reduce::Cancelled&) {
    desired_ = std::move(next);
    ++next_revision_;
    std::lock_guard pub(publish_mutex_);
    history_.push_back({revision, kind, false});
    return {revision, true};
  }
  desired_ = std::move(next);
  ++next_revision_;
  std::lock_guard pub(publish_mutex_);
  published_ = std::move(result);
  history_.push_back({revision, kind, true});
  return {revision, false};
}

MutationResult Session::put_spec(std::string_view spec_json) {
  geometry::GeometrySpec spec;
  try {
    spec = geometry::parse_geometry_spec(spec_json);
  } catch (const Error& e) {
    throw RequestError(std::string("geometry spec: ") + e.what());
  }
  return mutate("spec", [&](Desired& d) {
    const bool soft = std::holds_alternative<geometry::SoftSpec>(spec);
    d.method = soft ? Method::soft : Method::manual;
    for (Method& m : d.components) {
      if (m == Method::manual || m == Method::soft) m = d.method;
    }
    d.spec = std::move(spec);
  });
}

MutationResult Session::set_alpha(std::vector<double> weights, std::optional<std::vector<Method>> components) {
  try {
    geometry::CombinationWeights check(weights);
  } catch (const Error& e) {
    throw RequestError(std::string("weights: ") + e.what());
  }
  if (components) {
    for (Method m : *components) {
      if (m == Method::combine) throw RequestError("combine cannot be a component");
    }
  }
  return mutate("alpha", [&](Desired& d) {
    if (components) d.components = *components;
    if (weights.size() != d.components.size()) {
      throw RequestError("expected " + std::to_string(d.components.size()) + " weights, got " +
                         std::to_string(weights.size()));
    }
    d.method = Method::combine;
    d.weights = weights;
  });
}

MutationResult Session::set_method(Method method) {
  return mutate("method", [&](Desired& d) { d.method = method; });
}

MutationResult Session::set_reducer(const ReducerSettings& reducer, std::optional<std::uint64_t> seed) {
  try {
    reducer.validate();
  } catch (const Error& e) {
    throw RequestError(e.what());
  }
  return mutate("embed", [&](Desired& d) {
    d.reducer = reducer;
    if (seed) d.seed = *seed;
  });
}

std::string Session::component_key(Method m, const Desired& d) const {
  std::string key(to_string(m));
  switch (m) {
    case Method::manual:
    case Method::soft:
      if (d.spec) key += ":" + geometry::canonical_json(*d.spec);
      break;
    case Method::diffusion:
    case Method::ngram:
      key += ":c=" + shortest(config_.diffusion_c);
      break;
    default:
      break;
  }
  return key;
}

std::shared_ptr<const geometry::TransformMatrix> Session::component(Method m, const Desired& d) {
  const std::string key = component_key(m, d);
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  std::shared_ptr<const geometry::TransformMatrix> built;
  if (m == Method::manual || m == Method::soft) {
    if (!d.spec) throw StageError("geometry", "no geometry spec loaded");
    if (std::holds_alternative<geometry::SoftSpec>(*d.spec) != (m == Method::soft)) {
      throw StageError("geometry", std::string("geometry spec is not a ") + std::string(to_string(m)) + " spec");
    }
    built = std::make_shared<const geometry::TransformMatrix>(build_spec_geometry(*d.spec, inputs_.docs));
  } else {
    built = std::make_shared<const geometry::TransformMatrix>(build_geometry(m, inputs_, config_.diffusion_c));
  }
  ++builds_;
  std::lock_guard lock(cache_mutex_);
  if (cache_.emplace(key, built).second) cache_order_.push_back(key);
  while (cache_order_.size() > kCacheCapacity) {
    cache_.erase(cache_order_.front());
    cache_order_.erase(cache_order_.begin());
  }
  return built;
}

std::shared_ptr<const geometry::TransformMatrix> Session::current_geometry(const Desired& d, std::string& key) {
  if (d.method != Method::combine) {
    key = component_key(d.method, d);
    return component(d.method, d);
  }
  if (d.components.empty()) throw StageError("geometry", "no combination components");
  std::vector<geometry::TransformMatrix> parts;
  key = "combine";
  for (std::size_t i = 0; i < d.components.size(); ++i) {
    parts.push_back(*component(d.components[i], d));
    key += "|" + shortest(d.weights.at(i)) + "*" + component_key(d.components[i], d);
  }
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto combined = std::make_shared<const geometry::TransformMatrix>(combine_parts(parts, d.weights));
  std::lock_guard lock(cache_mutex_);
  if (cache_.emplace(key, combined).second) cache_order_.push_back(key);
  while (cache_order_.size() > kCacheCapacity) {
    cache_.erase(cache_order_.front());
    cache_order_.erase(cache_order_.begin());
  }
  return combined;
}

std::shared_ptr<const Published> Session::compute(const Desired& d, std::uint64_t revision,
                                                  const reduce::StopCheck& stop) {
  auto p = std::make_shared<Published>();
  p->revision = revision;
  p->method = d.method;
  p->components = d.components;
  p->weights = d.weights;
  p->spec = d.spec;
  p->geometry = current_geometry(d, p->geometry_key);
  p->embedding = embed(*p->geometry, inputs_.docs.counts, d.reducer, d.seed, config_.normalization, stop);
  if (inputs_.docs.labels) {
    try {
      p->report = evaluate::evaluate_all(evaluate::LabeledEmbedding(p->embedding.coords, *inputs_.docs.labels),
                                         config_.k);
    } catch (const Error& e) {
      throw StageError("evaluate", e.what());
    }
  }
  return p;
}

evaluate::SearchResult Session::search_alpha(const evaluate::SearchConfig& config,
                                             std::optional<std::vector<Method>> components) {
  if (!inputs_.docs.labels) throw RequestError("weight search needs a labeled corpus");
  Desired d;
  {
    std::lock_guard lock(write_mutex_);
    d = desired_;
  }
  if (components) d.components = *components;
  std::vector<geometry::TransformMatrix> parts;
  for (Method m : d.components) parts.push_back(*component(m, d));
  const evaluate::Reducer reducer = [&](const reduce::PointCloud& cloud) {
    return reduce_points(cloud, d.reducer, d.seed);
  };
  evaluate::SearchConfig cfg = config;
  cfg.normalization = config_.normalization;
  try {
    return evaluate::search_convex_combination(parts, inputs_.docs.counts, *inputs_.docs.labels, reducer, cfg);
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError("search", e.what());
  }
}

std::shared_ptr<const Published> Session::published() const {
  std::lock_guard lock(publish_mutex_);
  return published_;
}

std::vector<RevisionRecord> Session::revisions() const {
  std::lock_guard lock(publish_mutex_);
  return history_;
}

// ---------------------------------------------------------------- JSON views

std::string Session::corpus_summary_json() const {
  const corpus::DocumentMatrix& docs = inputs_.docs;
  ordered_json j;
  j["documents"] = docs.counts.num_documents();
  j["vocabulary_size"] = docs.counts.vocab.size();
  j["labeled"] = docs.has_labels();
  if (docs.labels) {
    std::map<std::string, std::size_t> classes;
    for (const std::string& l : *docs.labels) ++classes[l];
    j["classes"] = classes;
  }
  j["preprocessing"] = {{"lowercase", docs.preprocessing.lowercase},
                        {"stem", docs.preprocessing.stem},
                        {"vocab_cap", docs.preprocessing.vocab_cap}};
  const std::vector<std::uint64_t> totals = docs.counts.column_totals();
  ordered_json top = ordered_json::array();
  for (std::size_t i = 0; i < totals.size() && i < 50; ++i) {
    top.push_back({{"word", docs.counts.vocab.word(static_cast<corpus::TermId>(i))}, {"count", totals[i]}});
  }
  j["top_words"] = std::move(top);
  if (inputs_.estimation) j["estimation_documents"] = inputs_.estimation->num_documents();
  j["components"] = method_names(default_components(inputs_));
  return j.dump();
}

std::string Session::matrix_summary_json() const {
  const auto p = published();
  const geometry::TransformMatrix& H = *p->geometry;
  ordered_json j;
  j["revision"] = p->revision;
  j["method"] = to_string(p->method);
  j["provenance"] = geometry::to_string(H.provenance);
  j["key"] = key_digest(p->geometry_key);
  j["rows"] = H.rows();
  j["cols"] = H.cols();
  j["storage"] = H.matrix.is_sparse() ? "sparse" : "dense";
  j["nonzeros"] = H.matrix.is_sparse() ? H.matrix.sparse().nonZeros() : (H.matrix.dense().array() != 0.0).count();
  if (p->method == Method::combine) {
    j["components"] = method_names(p->components);
    j["weights"] = p->weights;
  }
  if (p->spec) {
    if (const auto* manual = std::get_if<geometry::ManualSpec>(&*p->spec)) {
      const geometry::CompiledManual c =
          geometry::compile_manual(*manual, inputs_.docs.counts.vocab, inputs_.docs.preprocessing);
      const geometry::ClusterSummary s = geometry::summarize_clusters(
          c.clustering, geometry::build_manual_R(c.clustering, c.params), geometry::build_manual_D(c.clustering, c.params));
      ordered_json clusters = ordered_json::array();
      for (std::size_t a = 0; a < s.names.size(); ++a) {
        clusters.push_back({{"name", s.names[a]},
                            {"size", s.sizes[a]},
                            {"rho_self", c.params.rho_self[a]},
                            {"importance", s.importance[a]}});
      }
      j["clusters"] = std::move(clusters);
      j["block_mass"] = s.block_mass;
    } else {
      const auto& soft = std::get<geometry::SoftSpec>(*p->spec);
      j["cluster_names"] = soft.cluster_names;
      j["scored_words"] = soft.words.size();
    }
  }
  return j.dump();
}

std::string Session::embedding_json() const {
  const auto p = published();
  const reduce::Embedding2D& e = p->embedding;
  ordered_json j;
  j["revision"] = p->revision;
  j["reducer"] = e.info.reducer;
  j["geometry"] = e.info.geometry;
  j["seed"] = e.info.seed;
  j["config"] = ordered_json::parse(e.info.config);
  ordered_json points = ordered_json::array();
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    ordered_json pt;
    pt["id"] = e.ids[static_cast<std::size_t>(i)];
    pt["x"] = e.coords(i, 0);
    pt["y"] = e.coords(i, 1);
    if (inputs_.docs.labels) pt["label"] = (*inputs_.docs.labels)[static_cast<std::size_t>(i)];
    points.push_back(std::move(pt));
  }
  j["points"] = std::move(points);
  return j.dump();
}

std::string Session::report_json() const {
  const auto p = published();
  if (!p->report) throw StageError("evaluate", "corpus has no labels");
  ordered_json j = report_object(*p->report);
  j["geometry"] = p->embedding.info.geometry;
  j["reducer"] = p->embedding.info.reducer;
  j["seed"] = p->embedding.info.seed;
  j["revision"] = p->revision;
  return j.dump();
}

std::string Session::revisions_json() const {
  const auto p = published();
  ordered_json j;
  j["published"] = p->revision;
  j["geometry_builds"] = geometry_builds();
  ordered_json history = ordered_json::array();
  for (const RevisionRecord& r : revisions()) {
    history.push_back({{"revision", r.revision}, {"kind", r.kind}, {"published", r.published}});
  }
  j["latest"] = history.empty() ? 0 : history.back()["revision"].get<std::uint64_t>();
  j["history"] = std::move(history);
  return j.dump();
}

std::string Session::search_json(const evaluate::SearchResult& result, const std::vector<Method>& components) const {
  ordered_json j;
  j["components"] = method_names(components);
  j["weights"] = result.weights.values();
  j["objective"] = result.objective;
  j["report"] = report_object(result.report);
  ordered_json cands = ordered_json::array();
  for (const evaluate::SearchCandidate& c : result.candidates) {
    ordered_json cj;
    cj["alpha"] = c.alpha;
    if (c.report) cj["objective"] = c.objective;
    else cj["error"] = c.error;
    cands.push_back(std::move(cj));
  }
  j["candidates"] = std::move(cands);
  return j.dump();
}

}  // namespace lingeo::pipeline
