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

#include "muse/http_api.hpp"

#include <charconv>
#include <regex>

#include <httplib.h>
#include <json.hpp>

#include "muse/error.hpp"

namespace muse::service {

using nlohmann::json;

namespace {

ApiResponse json_response(int status, json body) {
  body["schema"] = kSchema;
  return {status, "application/json", body.dump()};
}

ApiResponse error_response(int status, const std::string& code, const std::string& message) {
  return json_response(status, {{"error", {{"code", code}, {"message", message}}}});
}

bool token_ok(const Store& store, const std::string& rater_id, const std::string& header) {
  const std::string token = store.rater_token(rater_id);
  return token.empty() || header == "Bearer " + token;
}

json suggestion_json(const ideation::IdeaRecord& idea) {
  // Mode and concept pair stay out of the payload so raters judge blind.
  return {{"idea_id", idea.idea_id},
          {"title", idea.idea_title},
          {"body", idea.parse_failed ? idea.response : idea.idea_body},
          {"collaborator", idea.researcher_b}};
}

ApiResponse suggestions(Store& store, const std::string& rater_id, const ApiRequest& req) {
  size_t limit = store.serve_cap();
  if (auto it = req.query.find("limit"); it != req.query.end()) {
    const auto& s = it->second;
    long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || v < 0) {
      return error_response(400, "bad_request", "limit must be a non-negative integer");
    }
    limit = static_cast<size_t>(v);
  }
  if (!store.has_rater(rater_id)) return error_response(404, "not_found", "unknown rater");
  if (!token_ok(store, rater_id, req.authorization)) {
    return error_response(404, "not_found", "unknown rater");
  }
  const auto ideas = store.next_suggestions(rater_id, limit);
  json list = json::array();
  for (const auto& i : ideas) list.push_back(suggestion_json(i));
  json body = {{"rater_id", rater_id}, {"suggestions", list}};
  body["progress"] = store.stats(rater_id)["rater"];
  return json_response(200, body);
}

ApiResponse post_rating(Store& store, const ApiRequest& req) {
  json j = json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return error_response(400, "bad_request", "body must be a JSON object");
  }
  auto idea = j.find("idea_id");
  auto rater = j.find("rater_id");
  auto rating = j.find("rating");
  if (idea == j.end() || rater == j.end() || rating == j.end() || !idea->is_string() ||
      !rater->is_string() || !rating->is_number_integer()) {
    return error_response(400, "bad_request",
                          "idea_id and rater_id must be strings, rating an integer");
  }
  RatingEvent e{idea->get<std::string>(), rater->get<std::string>(), rating->get<int>(), ""};
  if (e.rating < 1 || e.rating > 5) {
    return error_response(400, "bad_request", "rating must be in 1..5");
  }
  if (store.has_rater(e.rater_id) && !token_ok(store, e.rater_id, req.authorization)) {
    return error_response(404, "not_found", "unknown rater");
  }
  const auto result = store.submit_rating(e);
  json body = {{"status", "ok"},
               {"idea_id", e.idea_id},
               {"rater_id", e.rater_id},
               {"rating", e.rating},
               {"previous", result.previous ? json(*result.previous) : json(nullptr)}};
  return json_response(200, body);
}

}  // namespace

ApiResponse handle_request(Store& store, const ApiRequest& req) {
  static const std::regex suggestions_re(R"(^/api/raters/([^/]+)/suggestions/?$)");
  try {
    std::smatch m;
    if (req.method == "GET" && std::regex_match(req.path, m, suggestions_re)) {
      return suggestions(store, m[1].str(), req);
    }
    if (req.method == "POST" && req.path == "/api/ratings") return post_rating(store, req);
    if (req.method == "GET" && req.path == "/api/stats") {
      std::optional<std::string> rater;
      if (auto it = req.query.find("rater_id"); it != req.query.end()) rater = it->second;
      return json_response(200, store.stats(rater));
    }
    if (req.method == "GET" && req.path == "/api/export/training.csv") {
      return {200, "text/csv", store.export_training_set().training_csv};
    }
    if (req.method == "GET" && req.path == "/api/export/sanity.csv") {
      return {200, "text/csv", store.export_training_set().sanity_csv};
    }
    return error_response(404, "not_found", "no route for " + req.method + " " + req.path);
  } catch (const NotFoundError& e) {
    return error_response(404, "not_found", e.what());
  } catch (const ValidationError& e) {
    return error_response(400, "bad_request", e.what());
  }
}

ApiServer::ApiServer(Store& store) : store_(store), server_(std::make_unique<httplib::Server>()) {
  auto dispatch = [this](const httplib::Request& hreq, httplib::Response& hres) {
    ApiRequest req;
    req.method = hreq.method;
    req.path = hreq.path;
    for (const auto& [k, v] : hreq.params) req.query[k] = v;
    req.body = hreq.body;
    req.authorization = hreq.get_header_value("Authorization");
    ApiResponse res;
    try {
      res = handle_request(store_, req);
    } catch (const std::exception& e) {
      res = error_response(500, "internal", e.what());
    }
    hres.status = res.status;
    hres.set_header("Access-Control-Allow-Origin", "*");
    hres.set_content(res.body, res.content_type + "; charset=utf-8");
  };
  server_->Get(".*", dispatch);
  server_->Post(".*", dispatch);
  server_->Options(".*", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type, Authorization");
    res.status = 204;
  });
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool ApiServer::listen() { return server_->listen_after_bind(); }

void ApiServer::stop() {
  if (server_) server_->stop();
}

}  // namespace muse::service
