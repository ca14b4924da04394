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

#include "muse/tournament.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "muse/csv.hpp"
#include "muse/error.hpp"
#include "muse/metrics.hpp"
#include "muse/prompts.hpp"
#include "muse/text.hpp"

namespace muse::tournament {

using nlohmann::json;

double elo_expected(double r_a, double r_b) {
  return 1.0 / (1.0 + std::pow(10.0, (r_b - r_a) / 400.0));
}

EloTable::EloTable(const std::vector<std::string>& ids, double k, double initial)
    : k_(k), initial_(initial) {
  if (!(k > 0) || !std::isfinite(k)) throw ValidationError("K-factor must be positive");
  for (const auto& id : ids) {
    if (!ratings_.emplace(id, initial).second) {
      throw ValidationError("duplicate idea id in tournament: " + id);
    }
    played_[id] = 0;
  }
}

double EloTable::rating(const std::string& id) const {
  auto it = ratings_.find(id);
  if (it == ratings_.end()) throw NotFoundError("idea not in table: " + id);
  return it->second;
}

int EloTable::matches_played(const std::string& id) const {
  auto it = played_.find(id);
  if (it == played_.end()) throw NotFoundError("idea not in table: " + id);
  return it->second;
}

double EloTable::rating_sum() const {
  double s = 0.0;
  for (const auto& [_, r] : ratings_) s += r;
  return s;
}

void EloTable::apply(const MatchResult& m) {
  if (m.idea_1 == m.idea_2) throw ValidationError("an idea cannot play itself");
  if (m.winner != 1 && m.winner != 2) throw ValidationError("winner must be 1 or 2");
  auto w = ratings_.find(m.winner == 1 ? m.idea_1 : m.idea_2);
  auto l = ratings_.find(m.winner == 1 ? m.idea_2 : m.idea_1);
  if (w == ratings_.end() || l == ratings_.end()) {
    throw NotFoundError("match references an idea outside the table");
  }
  const double delta = k_ * (1.0 - elo_expected(w->second, l->second));
  w->second += delta;
  l->second -= delta;
  ++played_[m.idea_1];
  ++played_[m.idea_2];
  history_.push_back(m);
}

std::vector<std::pair<std::string, double>> EloTable::ranking() const {
  std::vector<std::pair<std::string, double>> out(ratings_.begin(), ratings_.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

void elo_update(EloTable& table, const MatchResult& match) { table.apply(match); }

std::string build_match_prompt(const ideation::IdeaRecord& idea_1,
                               const ideation::IdeaRecord& idea_2) {
  if (idea_1.titles_a.empty() || idea_2.titles_a.empty()) {
    throw ValidationError("ranking prompt needs papers of both evaluating researchers");
  }
  return prompts::render(prompts::zero_shot_ranking(),
                         {{"papers_a1", ideation::format_titles(idea_1.titles_a)},
                          {"suggestion1", idea_1.suggestion_text()},
                          {"papers_a2", ideation::format_titles(idea_2.titles_a)},
                          {"suggestion2", idea_2.suggestion_text()}});
}

std::optional<int> parse_match_winner(const std::string& response) {
  static const std::regex re(R"(result\s*:\s*suggestion\s*([12]))", std::regex::icase);
  std::optional<int> winner;
  for (auto it = std::sregex_iterator(response.begin(), response.end(), re);
       it != std::sregex_iterator(); ++it) {
    winner = (*it)[1].str() == "1" ? 1 : 2;
  }
  return winner;
}

std::optional<MatchResult> judge_match(const ideation::IdeaRecord& idea_1,
                                       const ideation::IdeaRecord& idea_2,
                                       judge::JudgeClient& judge, int max_attempts) {
  const std::string prompt = build_match_prompt(idea_1, idea_2);
  std::string response;
  try {
    response = judge::complete_with_retry(judge, prompt, max_attempts);
  } catch (const JudgeError&) {
    return std::nullopt;
  }
  auto winner = parse_match_winner(response);
  if (!winner) return std::nullopt;
  MatchResult m;
  m.idea_1 = idea_1.idea_id;
  m.idea_2 = idea_2.idea_id;
  m.winner = *winner;
  m.raw_response = std::move(response);
  return m;
}

TournamentResult run_tournament(const std::vector<ideation::IdeaRecord>& ideas,
                                judge::JudgeClient& judge,
                                const TournamentOptions& options) {
  if (ideas.size() < 2) throw ValidationError("a tournament needs at least two ideas");
  if (options.n_matches < 1) throw ValidationError("n_matches must be >= 1");
  std::vector<std::string> ids;
  for (const auto& i : ideas) ids.push_back(i.idea_id);
  TournamentResult result{EloTable(ids, options.k), 0};
  auto& table = result.table;

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<size_t> pick(0, ideas.size() - 1);
  std::uniform_int_distribution<size_t> pick_other(0, ideas.size() - 2);
  for (int m = 0; m < options.n_matches; ++m) {
    size_t a = pick(rng);
    size_t b = 0;
    if (options.swiss) {
      std::vector<size_t> order(ideas.size());
      for (size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) {
        return table.rating(ids[x]) > table.rating(ids[y]);
      });
      const size_t pos = static_cast<size_t>(std::find(order.begin(), order.end(), a) - order.begin());
      const bool up = pos + 1 == order.size() || (pos > 0 && (rng() & 1));
      b = order[up ? pos - 1 : pos + 1];
    } else {
      b = pick_other(rng);
      if (b >= a) ++b;
    }
    const bool swap = rng() & 1;
    if (swap) std::swap(a, b);
    auto match = judge_match(ideas[a], ideas[b], judge, options.max_attempts);
    if (!match) {
      ++result.discarded;
      continue;
    }
    match->seed_position_swap = swap;
    table.apply(*match);
  }
  return result;
}

double ranking_auc(const EloTable& table, const std::map<std::string, int>& labels) {
  std::vector<double> scores;
  std::vector<int> y;
  for (const auto& [id, label] : labels) {
    scores.push_back(table.rating(id));
    y.push_back(label);
  }
  return models::auc(scores, y);
}

std::vector<std::pair<size_t, double>> auc_over_matches(
    const EloTable& table, const std::map<std::string, int>& labels,
    const std::vector<size_t>& checkpoints) {
  std::vector<std::string> ids;
  for (const auto& [id, _] : table.ratings()) ids.push_back(id);
  EloTable replay(ids, table.k_factor(), table.initial());
  std::vector<size_t> marks = checkpoints;
  std::sort(marks.begin(), marks.end());
  std::vector<std::pair<size_t, double>> out;
  size_t applied = 0;
  for (size_t mark : marks) {
    while (applied < mark && applied < table.history().size()) {
      replay.apply(table.history()[applied++]);
    }
    out.emplace_back(applied, ranking_auc(replay, labels));
  }
  return out;
}

std::string serialize_matches(const std::vector<MatchResult>& matches) {
  std::string out;
  for (const auto& m : matches) {
    json j = {{"idea_1", m.idea_1},
              {"idea_2", m.idea_2},
              {"winner", m.winner},
              {"raw_response", m.raw_response},
              {"seed_position_swap", m.seed_position_swap}};
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<MatchResult> parse_matches(const std::string& text) {
  std::vector<MatchResult> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw FormatError("match log line is not JSON");
    try {
      MatchResult m;
      m.idea_1 = j.at("idea_1").get<std::string>();
      m.idea_2 = j.at("idea_2").get<std::string>();
      m.winner = j.at("winner").get<int>();
      m.raw_response = j.at("raw_response").get<std::string>();
      m.seed_position_swap = j.at("seed_position_swap").get<bool>();
      if (m.winner != 1 && m.winner != 2) throw FormatError("winner must be 1 or 2");
      out.push_back(std::move(m));
    } catch (const json::exception& e) {
      throw FormatError(std::string("malformed match record: ") + e.what());
    }
  }
  return out;
}

std::string ranking_csv(const EloTable& table) {
  csv::Table t;
  t.header = {"idea_id", "elo", "matches_played"};
  for (const auto& [id, r] : table.ranking()) {
    t.rows.push_back({id, csv::format_double(r), std::to_string(table.matches_played(id))});
  }
  return csv::write(t);
}

}  // namespace muse::tournament
