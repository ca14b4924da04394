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

#include "muse/judge.hpp"

#include <cstdlib>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "muse/error.hpp"
#include "muse/hash.hpp"
#include "muse/text.hpp"

namespace muse::judge {

using nlohmann::json;

std::string request_hash(const std::string& prompt) { return sha256_hex(prompt); }

Transcript Transcript::load(const std::string& path) {
  return parse(read_file(path));
}

Transcript Transcript::parse(const std::string& text) {
  Transcript t;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("prompt") ||
        !j.contains("response")) {
      throw FormatError("transcript line " + std::to_string(lineno) +
                        " is not a request/response record");
    }
    std::string prompt = j["prompt"].get<std::string>();
    std::string hash = request_hash(prompt);
    if (j.contains("request_hash") && j["request_hash"].get<std::string>() != hash) {
      throw FormatError("transcript line " + std::to_string(lineno) +
                        ": request_hash does not match prompt");
    }
    t.add(prompt, j["response"].get<std::string>());
  }
  return t;
}

std::string Transcript::serialize() const {
  std::string out;
  for (const auto& e : entries_) {
    json j = {{"request_hash", e.request_hash},
              {"prompt", e.prompt},
              {"response", e.response}};
    out += j.dump() + "\n";
  }
  return out;
}

void Transcript::save(const std::string& path) const {
  write_file_atomic(path, serialize());
}

const std::string* Transcript::find(const std::string& prompt) const {
  auto it = by_hash_.find(request_hash(prompt));
  if (it == by_hash_.end()) return nullptr;
  return &entries_[it->second].response;
}

void Transcript::add(const std::string& prompt, const std::string& response) {
  std::string hash = request_hash(prompt);
  entries_.push_back({hash, prompt, response});
  by_hash_[hash] = entries_.size() - 1;
}

ReplayJudge::ReplayJudge(Transcript transcript)
    : transcript_(std::move(transcript)) {}

std::string ReplayJudge::complete(const std::string& prompt) {
  const std::string* r = transcript_.find(prompt);
  if (r == nullptr) {
    ++misses_;
    throw JudgeError("prompt not in transcript: " +
                     request_hash(prompt).substr(0, 16));
  }
  return *r;
}

RecordingJudge::RecordingJudge(std::shared_ptr<JudgeClient> inner)
    : inner_(std::move(inner)) {}

std::string RecordingJudge::complete(const std::string& prompt) {
  std::string response = inner_->complete(prompt);
  count_call();
  std::lock_guard<std::mutex> lock(mu_);
  transcript_.add(prompt, response);
  return response;
}

std::string RecordingJudge::describe() const {
  return "recording(" + inner_->describe() + ")";
}

Transcript RecordingJudge::transcript() const {
  std::lock_guard<std::mutex> lock(mu_);
  return transcript_;
}

FunctionJudge::FunctionJudge(Fn fn, std::string name)
    : fn_(std::move(fn)), name_(std::move(name)) {}

std::string FunctionJudge::complete(const std::string& prompt) {
  count_call();
  return fn_(prompt);
}

HttpJudgeConfig HttpJudgeConfig::from_env() {
  HttpJudgeConfig c;
  auto get = [](const char* name) -> std::string {
    const char* v = std::getenv(name);
    return v ? std::string(v) : std::string();
  };
  c.endpoint = get("MUSE_JUDGE_ENDPOINT");
  if (c.endpoint.empty()) {
    throw ConfigError("MUSE_JUDGE_ENDPOINT is not set");
  }
  c.api_key = get("MUSE_JUDGE_API_KEY");
  if (auto m = get("MUSE_JUDGE_MODEL"); !m.empty()) c.model = m;
  if (auto t = get("MUSE_JUDGE_TEMPERATURE"); !t.empty()) {
    c.temperature = std::stod(t);
  }
  return c;
}

HttpJudge::HttpJudge(HttpJudgeConfig config) : config_(std::move(config)) {}

std::string HttpJudge::describe() const {
  return "http(" + config_.model + ")";
}

std::string HttpJudge::build_request_body(const HttpJudgeConfig& config,
                                          const std::string& prompt) {
  json body = {{"model", config.model},
               {"temperature", config.temperature},
               {"messages", json::array({{{"role", "user"}, {"content", prompt}}})}};
  return body.dump();
}

std::string HttpJudge::parse_response_body(const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) throw JudgeError("judge returned non-JSON body");
  try {
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception&) {
    throw JudgeError("judge response has no choices[0].message.content");
  }
}

namespace {

// Splits "scheme://host[:port]/path" into the base and path parts.
void split_url(const std::string& url, std::string& base, std::string& path) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("judge endpoint must be an absolute URL: " + url);
  }
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    base = url;
    path = "/";
  } else {
    base = url.substr(0, path_start);
    path = url.substr(path_start);
  }
}

}  // namespace

std::string HttpJudge::complete(const std::string& prompt) {
  std::string base, path;
  split_url(config_.endpoint, base, path);
  httplib::Client client(base);
  client.set_connection_timeout(config_.timeout_seconds, 0);
  client.set_read_timeout(config_.timeout_seconds, 0);
  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }
  count_call();
  auto res = client.Post(path, headers, build_request_body(config_, prompt),
                         "application/json");
  if (!res) {
    throw JudgeError("judge transport failure: " +
                     httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw JudgeError("judge returned HTTP " + std::to_string(res->status));
  }
  return parse_response_body(res->body);
}

std::string complete_with_retry(JudgeClient& judge, const std::string& prompt,
                                int max_attempts) {
  if (max_attempts < 1) max_attempts = 1;
  for (int attempt = 1;; ++attempt) {
    try {
      return judge.complete(prompt);
    } catch (const JudgeError&) {
      if (attempt >= max_attempts) throw;
    }
  }
}

bool parse_bracket_list(const std::string& response,
                        std::vector<std::string>& items) {
  auto close = response.rfind(']');
  if (close == std::string::npos) return false;
  auto open = response.rfind('[', close);
  if (open == std::string::npos) return false;
  items.clear();
  std::string_view body(response.data() + open + 1, close - open - 1);
  size_t start = 0;
  while (start <= body.size()) {
    size_t comma = body.find(',', start);
    if (comma == std::string_view::npos) comma = body.size();
    std::string_view item = trim(body.substr(start, comma - start));
    while (!item.empty() && (item.front() == '"' || item.front() == '\'' ||
                             item.front() == '`')) {
      item.remove_prefix(1);
    }
    while (!item.empty() && (item.back() == '"' || item.back() == '\'' ||
                             item.back() == '`')) {
      item.remove_suffix(1);
    }
    item = trim(item);
    if (!item.empty()) items.emplace_back(item);
    start = comma + 1;
  }
  return true;
}

}  // namespace muse::judge
