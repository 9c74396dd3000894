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

#include "lingeo/service.hpp"

#include <httplib.h>
#include <json.hpp>

namespace lingeo::pipeline {

using nlohmann::json;

namespace {

void send_error(httplib::Response& res, int status, const std::string& stage, const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", message}, {"stage", stage}}.dump(), "application/json");
}

json parse_body(const httplib::Request& req) {
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) throw RequestError("request body must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw RequestError(std::string("malformed JSON body: ") + e.what());
  }
}

std::string mutation_json(const MutationResult& r) {
  return json{{"revision", r.revision}, {"superseded", r.superseded}}.dump();
}

std::optional<std::vector<Method>> parse_components(const json& body) {
  if (!body.contains("components")) return std::nullopt;
  std::vector<Method> out;
  for (const auto& name : body.at("components")) out.push_back(method_from_string(name.get<std::string>()));
  return out;
}

// Runs a handler, mapping exceptions onto status codes.
template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
      if (res.status == -1) res.status = 200;
    } catch (const RequestError& e) {
      send_error(res, 400, "request", e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, "request", e.what());
    } catch (const StageError& e) {
      send_error(res, 422, e.stage(), e.what());
    } catch (const std::exception& e) {
      send_error(res, 422, "compute", e.what());
    }
  };
}

}  // namespace

struct Service::Impl {
  Session& session;
  httplib::Server server;

  explicit Impl(Session& s) : session(s) {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    auto ok_json = [](httplib::Response& res, const std::string& body) {
      res.set_content(body, "application/json");
    };

    server.Get("/corpus/summary", guarded([this, ok_json](const httplib::Request&, httplib::Response& res) {
      ok_json(res, session.corpus_summary_json());
    }));
    server.Get("/geometry/matrix/summary", guarded([this, ok_json](const httplib::Request&, httplib::Response& res) {
      ok_json(res, session.matrix_summary_json());
    }));
    server.Put("/geometry/spec", guarded([this, ok_json](const httplib::Request& req, httplib::Response& res) {
      ok_json(res, mutation_json(session.put_spec(req.body)));
    }));
    server.Put("/geometry/method", guarded([this, ok_json](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      Method m;
      try {
        m = method_from_string(body.at("method").get<std::string>());
      } catch (const Error& e) {
        throw RequestError(e.what());
      }
      if (m == Method::combine) throw RequestError("use POST /alpha to select a combination");
      ok_json(res, mutation_json(session.set_method(m)));
    }));
    server.Post("/embed", guarded([this, ok_json](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      ReducerSettings reducer;
      std::optional<std::uint64_t> seed;
      try {
        reducer = parse_reducer_settings(body.value("reducer", std::string("pca")),
                                         body.contains("config") ? body.at("config").dump() : std::string());
        if (body.contains("seed")) seed = body.at("seed").get<std::uint64_t>();
      } catch (const Error& e) {
        throw RequestError(e.what());
      }
      ok_json(res, mutation_json(session.set_reducer(reducer, seed)));
    }));
    server.Get("/embedding", guarded([this, ok_json](const httplib::Request&, httplib::Response& res) {
      ok_json(res, session.embedding_json());
    }));
    server.Get("/report", guarded([this, ok_json](const httplib::Request&, httplib::Response& res) {
      ok_json(res, session.report_json());
    }));
    server.Post("/alpha", guarded([this, ok_json](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      std::vector<double> weights;
      std::optional<std::vector<Method>> components;
      try {
        weights = body.at("weights").get<std::vector<double>>();
        components = parse_components(body);
      } catch (const Error& e) {
        throw RequestError(e.what());
      }
      ok_json(res, mutation_json(session.set_alpha(std::move(weights), std::move(components))));
    }));
    server.Post("/alpha/search", guarded([this, ok_json](const httplib::Request& req, httplib::Response& res) {
      const json body = req.body.empty() ? json::object() : parse_body(req);
      evaluate::SearchConfig cfg;
      std::optional<std::vector<Method>> components;
      try {
        cfg.grid_step = body.value("grid", 0.1);
        cfg.objective = evaluate::objective_from_string(body.value("objective", std::string("davies_bouldin")));
        cfg.k = session.config().k;
        components = parse_components(body);
      } catch (const Error& e) {
        throw RequestError(e.what());
      }
      const evaluate::SearchResult result = session.search_alpha(cfg, components);
      const auto used = components ? *components : session.published()->components;
      ok_json(res, session.search_json(result, used));
    }));
    server.Get("/revisions", guarded([this, ok_json](const httplib::Request&, httplib::Response& res) {
      ok_json(res, session.revisions_json());
    }));
  }
};

Service::Service(Session& session) : impl_(std::make_unique<Impl>(session)) {}
Service::~Service() = default;

int Service::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw Error("cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void Service::run() { impl_->server.listen_after_bind(); }

void Service::stop() { impl_->server.stop(); }

void serve(Session& session, const std::string& host, int port) {
  Service service(session);
  service.bind(host, port);
  service.run();
}

}  // namespace lingeo::pipeline
