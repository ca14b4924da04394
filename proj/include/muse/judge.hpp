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

#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace muse::judge {

// Key under which a prompt's response is stored in a transcript.
std::string request_hash(const std::string& prompt);

// A language-model endpoint reduced to what the pipeline needs: one prompt
// in, one completion out. Implementations throw JudgeError on transport
// failure. complete() must be safe to call from several threads.
class JudgeClient {
 public:
  virtual ~JudgeClient() = default;
  virtual std::string complete(const std::string& prompt) = 0;
  // Human-readable identity recorded next to generated artifacts.
  virtual std::string describe() const = 0;
  // Requests that reached the backend (cache or transcript hits excluded).
  size_t backend_calls() const { return calls_.load(); }

 protected:
  void count_call() { ++calls_; }

 private:
  std::atomic<size_t> calls_{0};
};

struct TranscriptEntry {
  std::string request_hash;
  std::string prompt;
  std::string response;
};

// Ordered request/response pairs, one JSON object per line:
// {"request_hash": ..., "prompt": ..., "response": ...}.
class Transcript {
 public:
  static Transcript load(const std::string& path);
  static Transcript parse(const std::string& text);
  std::string serialize() const;
  void save(const std::string& path) const;

  // Last response recorded for the prompt, nullptr when absent.
  const std::string* find(const std::string& prompt) const;
  void add(const std::string& prompt, const std::string& response);
  const std::vector<TranscriptEntry>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }

 private:
  std::vector<TranscriptEntry> entries_;
  std::map<std::string, size_t> by_hash_;
};

// Answers from a recorded transcript only; never touches the network. A
// prompt missing from the transcript is reported as a JudgeError so callers
// take their transport-failure path.
class ReplayJudge : public JudgeClient {
 public:
  explicit ReplayJudge(Transcript transcript);
  std::string complete(const std::string& prompt) override;
  std::string describe() const override { return "replay"; }
  size_t misses() const { return misses_.load(); }

 private:
  Transcript transcript_;
  std::atomic<size_t> misses_{0};
};

// Forwards to an inner judge and records every exchange.
class RecordingJudge : public JudgeClient {
 public:
  explicit RecordingJudge(std::shared_ptr<JudgeClient> inner);
  std::string complete(const std::string& prompt) override;
  std::string describe() const override;
  Transcript transcript() const;

 private:
  std::shared_ptr<JudgeClient> inner_;
  mutable std::mutex mu_;
  Transcript transcript_;
};

// Judge backed by a callable; used for scripted and oracle judges.
class FunctionJudge : public JudgeClient {
 public:
  using Fn = std::function<std::string(const std::string&)>;
  FunctionJudge(Fn fn, std::string name = "function");
  std::string complete(const std::string& prompt) override;
  std::string describe() const override { return name_; }

 private:
  Fn fn_;
  std::string name_;
};

struct HttpJudgeConfig {
  std::string endpoint;  // e.g. https://api.openai.com/v1/chat/completions
  std::string api_key;
  std::string model = "gpt-4";
  double temperature = 0.0;
  int timeout_seconds = 120;

  // MUSE_JUDGE_ENDPOINT, MUSE_JUDGE_API_KEY, MUSE_JUDGE_MODEL,
  // MUSE_JUDGE_TEMPERATURE. Throws ConfigError when the endpoint is unset.
  static HttpJudgeConfig from_env();
};

// Chat-completion style JSON over HTTP(S):
//   POST {"model", "temperature", "messages":[{"role":"user","content":...}]}
//   <- {"choices":[{"message":{"content": ...}}]}
class HttpJudge : public JudgeClient {
 public:
  explicit HttpJudge(HttpJudgeConfig config);
  std::string complete(const std::string& prompt) override;
  std::string describe() const override;

  static std::string build_request_body(const HttpJudgeConfig& config,
                                        const std::string& prompt);
  // Throws JudgeError when the body has no completion text.
  static std::string parse_response_body(const std::string& body);

 private:
  HttpJudgeConfig config_;
};

// Calls judge.complete up to max_attempts times; rethrows the last
// JudgeError when every attempt fails.
std::string complete_with_retry(JudgeClient& judge, const std::string& prompt,
                                int max_attempts = 3);

// Pulls the items of the last [...] list in a response, e.g.
// "concept list=[a, b, c]". Surrounding quotes are stripped from items.
// Returns false when the response carries no bracketed list.
bool parse_bracket_list(const std::string& response,
                        std::vector<std::string>& items);

}  // namespace muse::judge
