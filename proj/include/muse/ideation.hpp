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

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "muse/features.hpp"
#include "muse/impact.hpp"
#include "muse/judge.hpp"
#include "muse/profiles.hpp"

namespace muse::ideation {

enum class Mode { kRandomPair, kHighImpactPair, kNoPair };

// "random_pair", "high_impact_pair", "no_pair"
std::string mode_name(Mode m);
// ValidationError for unknown names.
Mode mode_from_name(const std::string& name);

using ConceptPair = std::pair<std::string, std::string>;  // (c_A, c_B)

// Uniform over a x b without identical concepts. ValidationError when no
// valid pair exists.
ConceptPair select_pair_random(const std::set<std::string>& a,
                               const std::set<std::string>& b, uint64_t seed);

using PairScorer = std::function<double(const std::string&, const std::string&)>;

// Highest score over a x b (identical concepts skipped); ties go to the
// lexicographically smallest (c_A, c_B).
ConceptPair select_pair_high_impact(const std::set<std::string>& a,
                                    const std::set<std::string>& b,
                                    const PairScorer& impact);

inline constexpr size_t kMaxTitles = 7;

// Up to seven titles of the researcher's papers, newest first (ties by id).
std::vector<std::string> prompt_titles(const profiles::ResearcherProfile& p);

// "1: title" lines joined by newlines.
std::string format_titles(const std::vector<std::string>& titles);

// Titles are expected newest first; more than seven are cut to the first
// seven. ValidationError when a researcher has no titles.
std::string build_idea_prompt(const std::optional<ConceptPair>& pair,
                              std::vector<std::string> titles_a,
                              std::vector<std::string> titles_b);

struct ParsedIdea {
  std::string title;
  std::string body;
  bool ok = false;
};

// Takes the last "title" line of the response and the objective paragraph
// that follows it.
ParsedIdea parse_idea_response(const std::string& response);

struct IdeaRecord {
  std::string idea_id;
  std::string researcher_a;
  std::string researcher_b;
  Mode mode = Mode::kNoPair;
  std::optional<ConceptPair> concept_pair;
  std::vector<std::string> titles_a;  // as shown in the prompt
  std::vector<std::string> titles_b;
  std::string prompt;
  std::string template_hash;
  std::string response;
  std::string idea_title;
  std::string idea_body;
  bool parse_failed = false;
  std::string created_at;  // ISO 8601 UTC
  std::string judge;       // JudgeClient::describe()
  std::optional<int> rating;
  std::optional<double> elo;
  std::optional<double> impact;
  // Full catalog vector for pair modes, when a graph was available.
  std::string catalog_version;
  std::vector<double> features;

  // Text shown to raters and to the ranking judge.
  std::string suggestion_text() const;
  bool operator==(const IdeaRecord&) const = default;
};

nlohmann::json idea_to_json(const IdeaRecord& r);
// FormatError on missing fields or a mode/pair mismatch.
IdeaRecord idea_from_json(const nlohmann::json& j);
std::string serialize_ideas(const std::vector<IdeaRecord>& ideas);
std::vector<IdeaRecord> parse_ideas(const std::string& text);

using Clock = std::function<std::string()>;
// Current UTC time, second resolution.
std::string utc_now();

struct IdeaRequest {
  std::string researcher_a;
  std::string researcher_b;
  Mode mode = Mode::kNoPair;
  std::optional<ConceptPair> pair;
  std::vector<std::string> titles_a;
  std::vector<std::string> titles_b;
  uint64_t nonce = 0;  // distinguishes repeated requests in a batch
};

// Builds the prompt, asks the judge (with retries) and parses the reply.
// JudgeError when every attempt fails; an unparseable reply is kept with
// parse_failed set. idea_id hashes the request and response, not the clock.
IdeaRecord generate_idea(const IdeaRequest& request, judge::JudgeClient& judge,
                         const Clock& clock = utc_now, int max_attempts = 3);

struct ModeMix {
  int random_pair = 0;
  int high_impact_pair = 0;
  int no_pair = 0;
  int total() const { return random_pair + high_impact_pair + no_pair; }
};

struct BatchOptions {
  ModeMix mix;
  uint64_t seed = 1;
  int max_attempts = 3;
};

// Graph-side inputs for pair modes. extractor and impact may be null:
// high-impact selection needs both, features need the extractor.
struct GraphContext {
  const features::FeatureExtractor* extractor = nullptr;
  const models::ImpactModel* impact = nullptr;
};

// Generates mix.total() ideas with exactly the requested mode counts, in a
// seeded order, over seeded researcher pairs (a != b). Pair modes draw c_A
// from researcher A's concepts and c_B from B's, restricted to graph
// vertices when a graph is given.
std::vector<IdeaRecord> generate_batch(
    const std::vector<profiles::ResearcherProfile>& researchers,
    const BatchOptions& options, judge::JudgeClient& judge,
    const GraphContext& graph = {}, const Clock& clock = utc_now);

}  // namespace muse::ideation
