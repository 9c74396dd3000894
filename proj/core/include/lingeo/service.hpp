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

#include <memory>
#include <string>

#include "lingeo/session.hpp"

namespace lingeo::pipeline {

// HTTP front end over a Session.
//   GET  /corpus/summary          GET  /geometry/matrix/summary
//   PUT  /geometry/spec           PUT  /geometry/method {method}
//   POST /embed {reducer, config, seed}
//   GET  /embedding               GET  /report
//   POST /alpha {weights, components}
//   POST /alpha/search {grid, objective, components}
//   GET  /revisions
// Malformed requests get 400, failed computations 422; both carry
// {"error": text, "stage": name}.
class Service {
 public:
  explicit Service(Session& session);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds and returns the port (a free one when `port` is 0).
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Convenience wrapper: bind, then serve until stopped.
void serve(Session& session, const std::string& host, int port);

}  // namespace lingeo::pipeline
