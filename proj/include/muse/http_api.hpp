// Copyright 2026 The Muse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <memory>
#include <string>

#include "muse/store.hpp"

namespace httplib {
class Server;
}

namespace muse::service {

struct ApiRequest {
  std::string method;  // "GET", "POST"
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
  std::string authorization;  // raw Authorization header
};

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// Routes:
//   GET  /api/raters/{id}/suggestions?limit=N
//   POST /api/ratings            {"idea_id", "rater_id", "rating"}
//   GET  /api/stats[?rater_id=]
//   GET  /api/export/training.csv
//   GET  /api/export/sanity.csv
// JSON bodies carry "schema": "muse.v1". Errors: 400 for malformed input,
// 404 for unknown routes, ideas and raters (and a wrong rater token).
ApiResponse handle_request(Store& store, const ApiRequest& request);

// cpp-httplib front end over handle_request.
class ApiServer {
 public:
  explicit ApiServer(Store& store);
  ~ApiServer();

  // Binds and returns the port (0 picks a free one); -1 on failure.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool listen();
  void stop();

 private:
  Store& store_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace muse::service
