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

#include "lingeo/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lingeo::io {

using nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << content;
    if (!out.flush()) throw Error("write failed for '" + path.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------- corpus

std::string document_matrix_to_json(const corpus::DocumentMatrix& m) {
  ordered_json j;
  j["format"] = "lingeo-corpus v1";
  j["preprocessing"] = {{"lowercase", m.preprocessing.lowercase},
                        {"stem", m.preprocessing.stem},
                        {"stopword_file", m.preprocessing.stopword_file},
                        {"vocab_cap", m.preprocessing.vocab_cap}};
  j["vocabulary"] = m.counts.vocab.words();
  ordered_json docs = ordered_json::array();
  for (std::size_t d = 0; d < m.counts.num_documents(); ++d) {
    ordered_json doc;
    doc["id"] = d < m.counts.ids.size() ? m.counts.ids[d] : std::to_string(d);
    if (m.labels) doc["label"] = (*m.labels)[d];
    ordered_json counts = ordered_json::array();
    for (const auto& [term, count] : m.counts.rows[d].entries) counts.push_back({term, count});
    doc["counts"] = std::move(counts);
    docs.push_back(std::move(doc));
  }
  j["documents"] = std::move(docs);
  return j.dump() + "\n";
}

corpus::DocumentMatrix document_matrix_from_json(std::string_view text) {
  try {
    const ordered_json j = ordered_json::parse(text);
    if (j.at("format").get<std::string>() != "lingeo-corpus v1") throw FormatError("unknown corpus format");
    corpus::DocumentMatrix m;
    const auto& pre = j.at("preprocessing");
    m.preprocessing.lowercase = pre.at("lowercase").get<bool>();
    m.preprocessing.stem = pre.at("stem").get<bool>();
    m.preprocessing.stopword_file = pre.value("stopword_file", std::string());
    m.preprocessing.vocab_cap = pre.at("vocab_cap").get<std::size_t>();
    m.counts.vocab = corpus::Vocabulary(j.at("vocabulary").get<std::vector<std::string>>());
    const std::size_t n = m.counts.vocab.size();
    std::vector<std::string> labels;
    std::size_t labeled = 0;
    for (const auto& doc : j.at("documents")) {
      m.counts.ids.push_back(doc.at("id").get<std::string>());
      if (doc.contains("label")) {
        labels.push_back(doc.at("label").get<std::string>());
        ++labeled;
      } else {
        labels.emplace_back();
      }
      corpus::SparseCounts row;
      for (const auto& entry : doc.at("counts")) {
        const auto term = entry.at(0).get<corpus::TermId>();
        const auto count = entry.at(1).get<std::uint32_t>();
        if (term >= n) throw FormatError("term id out of range");
        if (count == 0) continue;
        if (!row.entries.empty() && row.entries.back().first >= term) throw FormatError("counts not sorted by term");
        row.entries.emplace_back(term, count);
      }
      m.counts.rows.push_back(std::move(row));
    }
    if (labeled == m.counts.rows.size() && labeled > 0) {
      m.labels = std::move(labels);
    } else if (labeled != 0) {
      throw FormatError("either every document or none must carry a label");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed document matrix: ") + e.what());
  }
}

void save_document_matrix(const std::filesystem::path& path, const corpus::DocumentMatrix& m) {
  write_file(path, document_matrix_to_json(m));
}

corpus::DocumentMatrix load_document_matrix(const std::filesystem::path& path) {
  return document_matrix_from_json(read_file(path));
}

// ---------------------------------------------------------------- geometry

void write_geometry(std::ostream& out, const geometry::TransformMatrix& H) {
  out << "lingeo-geometry v1 " << geometry::to_string(H.provenance) << '\n';
  write_matrix(out, H.matrix);
}

geometry::TransformMatrix read_geometry(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty geometry file");
  std::istringstream hs(line);
  std::string magic, version, provenance;
  hs >> magic >> version >> provenance;
  if (magic != "lingeo-geometry" || version != "v1") throw FormatError("bad geometry header '" + line + "'");
  geometry::TransformMatrix H;
  H.provenance = geometry::provenance_from_string(provenance);
  H.matrix = read_matrix(in);
  if (!H.matrix.all_finite()) throw FormatError("geometry contains non-finite values");
  return H;
}

void save_geometry(const std::filesystem::path& path, const geometry::TransformMatrix& H) {
  std::ostringstream out;
  write_geometry(out, H);
  write_file(path, out.str());
}

geometry::TransformMatrix load_geometry(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  return read_geometry(in);
}

// ---------------------------------------------------------------- embedding

namespace {

std::string format_number(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

double parse_number(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw FormatError("malformed number '" + std::string(s) + "'");
  return v;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw FormatError("unterminated quote in CSV line");
  return fields;
}

}  // namespace

std::string embedding_to_csv(const reduce::Embedding2D& e, const std::optional<std::vector<std::string>>& labels) {
  if (labels && labels->size() != static_cast<std::size_t>(e.size())) {
    throw Error("label count does not match embedding size");
  }
  std::string out;
  out += "# reducer: " + e.info.reducer + "\n";
  out += "# geometry: " + e.info.geometry + "\n";
  out += "# seed: " + std::to_string(e.info.seed) + "\n";
  out += "# config: " + e.info.config + "\n";
  out += labels ? "id,x,y,label\n" : "id,x,y\n";
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out += csv_field(idx < e.ids.size() ? e.ids[idx] : std::to_string(i));
    out += ',' + format_number(e.coords(i, 0)) + ',' + format_number(e.coords(i, 1));
    if (labels) out += ',' + csv_field((*labels)[idx]);
    out += '\n';
  }
  return out;
}

EmbeddingFile embedding_from_csv(std::string_view text) {
  EmbeddingFile f;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header_seen = false;
  bool has_label = false;
  std::vector<std::pair<double, double>> xy;
  std::vector<std::string> labels;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen && line.rfind("# ", 0) == 0) {
      const auto colon = line.find(": ");
      if (colon == std::string::npos) continue;
      const std::string key = line.substr(2, colon - 2);
      const std::string value = line.substr(colon + 2);
      if (key == "reducer") f.embedding.info.reducer = value;
      else if (key == "geometry") f.embedding.info.geometry = value;
      else if (key == "seed") f.embedding.info.seed = std::stoull(value);
      else if (key == "config") f.embedding.info.config = value;
      continue;
    }
    if (!header_seen) {
      if (line == "id,x,y,label") has_label = true;
      else if (line != "id,x,y") throw FormatError("bad embedding header '" + line + "'");
      header_seen = true;
      continue;
    }
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != (has_label ? 4u : 3u)) throw FormatError("wrong field count in embedding row '" + line + "'");
    f.embedding.ids.push_back(fields[0]);
    xy.emplace_back(parse_number(fields[1]), parse_number(fields[2]));
    if (has_label) labels.push_back(fields[3]);
  }
  if (!header_seen) throw FormatError("embedding file has no header row");
  f.embedding.coords.resize(static_cast<Eigen::Index>(xy.size()), 2);
  for (std::size_t i = 0; i < xy.size(); ++i) {
    f.embedding.coords(static_cast<Eigen::Index>(i), 0) = xy[i].first;
    f.embedding.coords(static_cast<Eigen::Index>(i), 1) = xy[i].second;
  }
  if (has_label) f.labels = std::move(labels);
  return f;
}

void save_embedding(const std::filesystem::path& path, const reduce::Embedding2D& e,
                    const std::optional<std::vector<std::string>>& labels) {
  write_file(path, embedding_to_csv(e, labels));
}

EmbeddingFile load_embedding(const std::filesystem::path& path) { return embedding_from_csv(read_file(path)); }

// ---------------------------------------------------------------- report

std::string report_to_json(const evaluate::EvaluationReport& r, const reduce::EmbeddingInfo& info) {
  ordered_json j;
  j["measure_i"] = r.intra_inter;
  j["measure_ii"] = r.davies_bouldin;
  j["measure_iii"] = {{"k", r.k}, {"accuracy", r.knn_accuracy}};
  if (r.lda_overlap) j["measure_iv"] = *r.lda_overlap;
  j["geometry"] = info.geometry;
  j["reducer"] = info.reducer;
  j["seed"] = info.seed;
  return j.dump(2) + "\n";
}

evaluate::EvaluationReport report_from_json(std::string_view text) {
  try {
    const ordered_json j = ordered_json::parse(text);
    evaluate::EvaluationReport r;
    r.intra_inter = j.at("measure_i").get<double>();
    r.davies_bouldin = j.at("measure_ii").get<double>();
    r.k = j.at("measure_iii").at("k").get<int>();
    r.knn_accuracy = j.at("measure_iii").at("accuracy").get<double>();
    if (j.contains("measure_iv")) r.lda_overlap = j.at("measure_iv").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed report: ") + e.what());
  }
}

void save_report(const std::filesystem::path& path, const evaluate::EvaluationReport& r,
                 const reduce::EmbeddingInfo& info) {
  write_file(path, report_to_json(r, info));
}

}  // namespace lingeo::io
