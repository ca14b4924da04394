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
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "muse/ideation.hpp"
#include "muse/judge.hpp"

namespace muse::tournament {

inline constexpr double kInitialRating = 1400.0;
inline constexpr double kDefaultK = 32.0;

// 1 / (1 + 10^((r_b - r_a) / 400))
double elo_expected(double r_a, double r_b);

struct MatchResult {
  std::string idea_1;  // shown as Suggestion 1
  std::string idea_2;
  int winner = 1;      // 1 or 2
  std::string raw_response;
  bool seed_position_swap = false;  // order flipped relative to the draw
};

class EloTable {
 public:
  EloTable() = default;
  // ValidationError on duplicate ids.
  explicit EloTable(const std::vector<std::string>& ids, double k = kDefaultK,
                    double initial = kInitialRating);

  double k_factor() const { return k_; }
  double initial() const { return initial_; }
  // NotFoundError for unknown ids.
  double rating(const std::string& id) const;
  int matches_played(const std::string& id) const;
  const std::map<std::string, double>& ratings() const { return ratings_; }
  const std::vector<MatchResult>& history() const { return history_; }
  double rating_sum() const;

  // Winner gains K (1 - E_w), loser loses the same amount.
  void apply(const MatchResult& m);

  // Highest rating first; equal ratings by id.
  std::vector<std::pair<std::string, double>> ranking() const;

 private:
  double k_ = kDefaultK;
  double initial_ = kInitialRating;
  std::map<std::string, double> ratings_;
  std::map<std::string, int> played_;
  std::vector<MatchResult> history_;
};

void elo_update(EloTable& table, const MatchResult& match);

// Fills the zero-shot template: papers of each idea's evaluating researcher
// (A) and the idea text. ValidationError when an idea lacks researcher
// papers.
std::string build_match_prompt(const ideation::IdeaRecord& idea_1,
                               const ideation::IdeaRecord& idea_2);

// Winner named by the last "RESULT: SUGGESTION 1|2" (case-insensitive);
// nullopt when neither appears.
std::optional<int> parse_match_winner(const std::string& response);

// nullopt when the judge fails every attempt or answers without a verdict.
std::optional<MatchResult> judge_match(const ideation::IdeaRecord& idea_1,
                                       const ideation::IdeaRecord& idea_2,
                                       judge::JudgeClient& judge, int max_attempts = 3);

struct TournamentOptions {
  int n_matches = 0;
  uint64_t seed = 1;
  double k = kDefaultK;
  // Pair an idea with its nearest-rated neighbor instead of uniformly.
  bool swiss = false;
  int max_attempts = 3;
};

struct TournamentResult {
  EloTable table;
  size_t discarded = 0;  // invalid or failed judgments
};

// n_matches seeded draws of two distinct ideas (with replacement across
// matches), each shown in random order; ratings update in match order.
// ValidationError for fewer than two ideas or n_matches < 1.
TournamentResult run_tournament(const std::vector<ideation::IdeaRecord>& ideas,
                                judge::JudgeClient& judge,
                                const TournamentOptions& options);

// AUC of final ratings against binary labels.
double ranking_auc(const EloTable& table, const std::map<std::string, int>& labels);

// Replays the table's history and reports ranking AUC after each checkpoint
// (number of applied matches).
std::vector<std::pair<size_t, double>> auc_over_matches(
    const EloTable& table, const std::map<std::string, int>& labels,
    const std::vector<size_t>& checkpoints);

// One JSON object per line.
std::string serialize_matches(const std::vector<MatchResult>& matches);
std::vector<MatchResult> parse_matches(const std::string& text);

// idea_id, elo, matches_played, highest first.
std::string ranking_csv(const EloTable& table);

}  // namespace muse::tournament
