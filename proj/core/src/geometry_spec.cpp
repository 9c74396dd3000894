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

#include "lingeo/geometry_spec.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "lingeo/error.hpp"

namespace lingeo::geometry {
namespace {

using nlohmann::json;

ClusterTree parse_tree(const json& j) {
  ClusterTree t;
  t.name = j.at("name").get<std::string>();
  if (j.contains("children")) {
    for (const json& c : j.at("children")) t.children.push_back(parse_tree(c));
  }
  return t;
}

json tree_to_json(const ClusterTree& t) {
  json j;
  j["name"] = t.name;
  if (!t.children.empty()) {
    json kids = json::array();
    for (const ClusterTree& c : t.children) kids.push_back(tree_to_json(c));
    j["children"] = std::move(kids);
  }
  return j;
}

GeometrySpec parse_json(const json& j) {
  if (j.contains("cluster_names")) {
    SoftSpec s;
    s.cluster_names = j.at("cluster_names").get<std::vector<std::string>>();
    for (const json& w : j.at("words")) {
      SoftSpec::Word word;
      word.word = w.at("word").get<std::string>();
      word.scores = w.at("scores").get<std::vector<double>>();
      word.importance = w.value("importance", 1.0);
      s.words.push_back(std::move(word));
    }
    s.rho_self = j.value("rho_self", 1.0);
    s.default_importance = j.value("default_importance", 1.0);
    return s;
  }
  ManualSpec m;
  for (const json& c : j.at("clusters")) {
    ManualSpec::Cluster cl;
    cl.name = c.at("name").get<std::string>();
    cl.words = c.at("words").get<std::vector<std::string>>();
    cl.rho_self = c.value("rho_self", 1.0);
    cl.importance = c.value("importance", 1.0);
    m.clusters.push_back(std::move(cl));
  }
  if (j.contains("rho_pairs")) {
    for (const json& p : j.at("rho_pairs")) {
      m.rho_pairs.push_back({p.at("a").get<std::string>(), p.at("b").get<std::string>(), p.at("value").get<double>()});
    }
  }
  if (j.contains("tree") && !j["tree"].is_null()) m.tree = parse_tree(j["tree"]);
  m.beta = j.value("beta", 0.5);
  if (j.contains("unassigned")) {
    m.unassigned.rho_self = j["unassigned"].value("rho_self", 1.0);
    m.unassigned.importance = j["unassigned"].value("importance", 1.0);
  }
  return m;
}

json to_json(const ManualSpec& m) {
  json j;
  json clusters = json::array();
  for (const auto& c : m.clusters) {
    clusters.push_back({{"name", c.name}, {"words", c.words}, {"rho_self", c.rho_self}, {"importance", c.importance}});
  }
  j["clusters"] = std::move(clusters);
  json pairs = json::array();
  for (const auto& p : m.rho_pairs) pairs.push_back({{"a", p.a}, {"b", p.b}, {"value", p.value}});
  j["rho_pairs"] = std::move(pairs);
  if (m.tree) j["tree"] = tree_to_json(*m.tree);
  j["beta"] = m.beta;
  j["unassigned"] = {{"rho_self", m.unassigned.rho_self}, {"importance", m.unassigned.importance}};
  return j;
}

json to_json(const SoftSpec& s) {
  json j;
  j["cluster_names"] = s.cluster_names;
  json words = json::array();
  for (const auto& w : s.words) words.push_back({{"word", w.word}, {"scores", w.scores}, {"importance", w.importance}});
  j["words"] = std::move(words);
  j["rho_self"] = s.rho_self;
  j["default_importance"] = s.default_importance;
  return j;
}

}  // namespace

GeometrySpec parse_geometry_spec(std::string_view json_text) {
  try {
    return parse_json(json::parse(json_text));
  } catch (const json::exception& e) {
    throw FormatError(std::string("geometry spec: ") + e.what());
  }
}

GeometrySpec load_geometry_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open geometry spec " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_geometry_spec(ss.str());
}

std::string canonical_json(const GeometrySpec& spec) {
  return std::visit([](const auto& s) { return to_json(s).dump(); }, spec);
}

CompiledManual compile_manual(const ManualSpec& spec, const corpus::Vocabulary& vocab,
                              const corpus::PreprocessConfig& preprocessing) {
  std::vector<WordClustering::Cluster> clusters;
  GeometryParams params;
  std::vector<bool> taken(vocab.size(), false);
  for (const auto& c : spec.clusters) {
    WordClustering::Cluster cl{c.name, {}};
    for (const std::string& w : c.words) {
      auto id = vocab.find(corpus::normalize_term(w, preprocessing));
      if (!id || taken[*id]) continue;
      taken[*id] = true;
      cl.members.push_back(*id);
    }
    clusters.push_back(std::move(cl));
    params.rho_self.push_back(c.rho_self);
    params.importance.push_back(c.importance);
  }
  WordClustering::Cluster rest{std::string(kUnassignedCluster), {}};
  for (corpus::TermId i = 0; i < vocab.size(); ++i) {
    if (!taken[i]) rest.members.push_back(i);
  }
  if (!rest.members.empty()) {
    clusters.push_back(std::move(rest));
    params.rho_self.push_back(spec.unassigned.rho_self);
    params.importance.push_back(spec.unassigned.importance);
  }
  WordClustering clustering(vocab.words(), std::move(clusters));

  if (spec.tree) {
    for (const auto& [key, v] : tree_affinities(*spec.tree, clustering, spec.beta)) {
      params.set_pair(key.first, key.second, v);
    }
  }
  for (const auto& p : spec.rho_pairs) {
    auto a = clustering.find_cluster(p.a);
    auto b = clustering.find_cluster(p.b);
    if (!a || !b) throw Error("rho_pairs refers to unknown cluster '" + (a ? p.b : p.a) + "'");
    params.set_pair(*a, *b, p.value);
  }
  params.validate(clustering.num_clusters());
  return {std::move(clustering), std::move(params)};
}

SoftScoreSpec compile_soft(const SoftSpec& spec, const corpus::Vocabulary& vocab,
                           const corpus::PreprocessConfig& preprocessing) {
  SoftScoreSpec out;
  out.cluster_names = spec.cluster_names;
  out.rho_self = spec.rho_self;
  out.scores.assign(vocab.size(), std::vector<double>(spec.cluster_names.size(), 0.0));
  out.importance.assign(vocab.size(), spec.default_importance);
  std::vector<bool> taken(vocab.size(), false);
  for (const auto& w : spec.words) {
    if (w.scores.size() != spec.cluster_names.size()) {
      throw Error("soft score table: word '" + w.word + "' has " + std::to_string(w.scores.size()) +
                  " scores for " + std::to_string(spec.cluster_names.size()) + " clusters");
    }
    auto id = vocab.find(corpus::normalize_term(w.word, preprocessing));
    if (!id || taken[*id]) continue;
    taken[*id] = true;
    out.scores[*id] = w.scores;
    out.importance[*id] = w.importance;
  }
  out.validate();
  return out;
}

TransformMatrix build_from_spec(const GeometrySpec& spec, const corpus::Vocabulary& vocab,
                                const corpus::PreprocessConfig& preprocessing) {
  if (const auto* m = std::get_if<ManualSpec>(&spec)) {
    const CompiledManual c = compile_manual(*m, vocab, preprocessing);
    return compose_H(build_manual_R(c.clustering, c.params), build_manual_D(c.clustering, c.params),
                     Provenance::manual);
  }
  const SoftScoreSpec s = compile_soft(std::get<SoftSpec>(spec), vocab, preprocessing);
  return compose_H(build_soft_R(s), build_soft_D(s), Provenance::soft);
}

ClusterSummary summarize_clusters(const WordClustering& clustering, const MarkovMatrix& R,
                                  const DiagonalWeights& D) {
  const std::size_t r = clustering.num_clusters();
  ClusterSummary s;
  s.block_mass.assign(r, std::vector<double>(r, 0.0));
  for (std::size_t b = 0; b < r; ++b) {
    const auto& members = clustering.clusters()[b].members;
    s.names.push_back(clustering.clusters()[b].name);
    s.sizes.push_back(members.size());
    s.importance.push_back(members.empty() ? 0.0 : D.values()[members.front()]);
    if (members.empty()) continue;
    for (corpus::TermId j : members) {
      for (std::size_t a = 0; a < r; ++a) {
        double mass = 0.0;
        for (corpus::TermId i : clustering.clusters()[a].members) mass += R.matrix().coeff(i, j);
        s.block_mass[a][b] += mass;
      }
    }
    for (std::size_t a = 0; a < r; ++a) s.block_mass[a][b] /= static_cast<double>(members.size());
  }
  return s;
}

}  // namespace lingeo::geometry
