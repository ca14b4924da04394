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

#include <doctest.h>

#include <map>

#include "muse/error.hpp"
#include "muse/ideation.hpp"
#include "muse/judge.hpp"
#include "muse/prompts.hpp"
#include "muse/tournament.hpp"
#include "synth.hpp"

using namespace muse;
using namespace muse::ideation;
namespace mt = muse::testing;

namespace {

std::string fixed_clock() { return "2026-03-04T05:06:07Z"; }

IdeaRecord idea(const std::string& id, const std::string& title, const std::string& paper) {
  IdeaRecord r;
  r.idea_id = id;
  r.researcher_a = "A" + id;
  r.researcher_b = "B";
  r.titles_a = {paper};
  r.idea_title = title;
  r.idea_body = "Body of " + title;
  return r;
}

}  // namespace

TEST_CASE("mode names") {
  for (Mode m : {Mode::kRandomPair, Mode::kHighImpactPair, Mode::kNoPair}) {
    CHECK(mode_from_name(mode_name(m)) == m);
  }
  CHECK(mode_name(Mode::kHighImpactPair) == "high_impact_pair");
  CHECK_THROWS_AS(mode_from_name("other"), ValidationError);
}

TEST_CASE("random pair selection is uniform over valid pairs") {
  const std::set<std::string> a = {"x", "y", "z"};
  const std::set<std::string> b = {"y", "w"};
  std::map<ConceptPair, int> counts;
  const int draws = 25000;
  for (int s = 0; s < draws; ++s) {
    auto p = select_pair_random(a, b, static_cast<uint64_t>(s));
    CHECK(p.first != p.second);
    ++counts[p];
  }
  CHECK(counts.size() == 5);  // 3 x 2 minus (y, y)
  for (const auto& [pair, n] : counts) CHECK(std::abs(n - draws / 5) < 300);
  CHECK_THROWS_AS(select_pair_random({"q"}, {"q"}, 1), ValidationError);
  CHECK_THROWS_AS(select_pair_random({}, {"q"}, 1), ValidationError);
}

TEST_CASE("high-impact selection takes the first maximum") {
  auto p = select_pair_high_impact({"a", "b"}, {"c", "d"},
                                   [](const std::string& x, const std::string& y) {
                                     return (x == "b" || y == "d") ? 1.0 : 0.0;
                                   });
  CHECK(p == ConceptPair{"a", "d"});
  auto q = select_pair_high_impact({"a", "b"}, {"a"}, [](const auto&, const auto&) { return 0.0; });
  CHECK(q == ConceptPair{"b", "a"});
}

TEST_CASE("idea prompts") {
  std::vector<std::string> eight;
  for (int i = 1; i <= 8; ++i) eight.push_back("T" + std::to_string(i));
  auto p = build_idea_prompt(ConceptPair{"alpha", "beta"}, eight, {"U1"});
  CHECK(p.find("7: T7") != std::string::npos);
  CHECK(p.find("8: T8") == std::string::npos);
  CHECK(p.find("\"alpha\" and \"beta\"") != std::string::npos);
  auto np = build_idea_prompt(std::nullopt, {"T1"}, {"U1"});
  CHECK(np.find("{{") == std::string::npos);
  CHECK(np.find("alpha") == std::string::npos);
  CHECK(np.find("Researcher B:\n1: U1") != std::string::npos);
  CHECK_THROWS_AS(build_idea_prompt(ConceptPair{"a", "a"}, {"T"}, {"U"}), ValidationError);
  CHECK_THROWS_AS(build_idea_prompt(std::nullopt, {}, {"U"}), ValidationError);
}

TEST_CASE("prompt titles are newest first and capped") {
  profiles::ResearcherProfile p;
  for (int i = 0; i < 9; ++i) {
    corpus::PaperRecord r;
    r.paper_id = "p" + std::to_string(i);
    r.title = "Title " + std::to_string(i);
    r.year = 2010 + i;
    p.papers.push_back(r);
  }
  auto t = prompt_titles(p);
  REQUIRE(t.size() == 7);
  CHECK(t[0] == "Title 8");
  CHECK(t[6] == "Title 2");
}

TEST_CASE("template hashes and slots") {
  CHECK(prompts::idea_with_pair().hash() != prompts::idea_without_pair().hash());
  CHECK(prompts::idea_with_pair().slots() ==
        std::vector<std::string>{"concept1", "concept2", "titles_a", "titles_b"});
  CHECK_THROWS_AS(prompts::render(prompts::refine_concepts(), {{"titles", "x"}}), ValidationError);
  CHECK_THROWS_AS(prompts::render(prompts::refine_concepts(),
                                  {{"titles", "x"}, {"concepts", "y"}, {"extra", "z"}}),
                  ValidationError);
}

TEST_CASE("idea response parsing") {
  auto a = parse_idea_response(
      "Reflections...\n\n**Project Title:** Quantum Glaciers\n\n**Objective:** Map ice with light.\n"
      "More of the objective.\n\nResearch questions:\n- q1\n");
  CHECK(a.ok);
  CHECK(a.title == "Quantum Glaciers");
  CHECK(a.body == "Map ice with light. More of the objective.");
  auto b = parse_idea_response("Title:\nSoft Matter Optics\nWe probe gels with lasers.\n");
  CHECK(b.ok);
  CHECK(b.title == "Soft Matter Optics");
  CHECK(b.body == "We probe gels with lasers.");
  auto c = parse_idea_response("No structure at all.");
  CHECK_FALSE(c.ok);
}

TEST_CASE("generate_idea records provenance") {
  judge::FunctionJudge j(mt::scripted_response, "scripted");
  IdeaRequest req;
  req.researcher_a = "R1";
  req.researcher_b = "R2";
  req.mode = Mode::kRandomPair;
  req.pair = ConceptPair{"alpha beta", "gamma delta"};
  req.titles_a = {"Paper A"};
  req.titles_b = {"Paper B"};
  auto r1 = generate_idea(req, j, fixed_clock);
  auto r2 = generate_idea(req, j, fixed_clock);
  CHECK(r1 == r2);
  CHECK(r1.idea_id.size() == 16);
  CHECK_FALSE(r1.parse_failed);
  CHECK(r1.created_at == "2026-03-04T05:06:07Z");
  CHECK(r1.template_hash == prompts::idea_with_pair().hash());
  req.nonce = 1;
  CHECK(generate_idea(req, j, fixed_clock).idea_id != r1.idea_id);
  req.mode = Mode::kNoPair;
  CHECK_THROWS_AS(generate_idea(req, j, fixed_clock), ValidationError);

  judge::FunctionJudge junk([](const std::string&) { return std::string("nothing useful"); });
  req.pair.reset();
  auto f = generate_idea(req, junk, fixed_clock);
  CHECK(f.parse_failed);
  CHECK(f.suggestion_text() == "nothing useful");
}

TEST_CASE("idea JSON round trip and validation") {
  auto r = idea("i1", "T", "P");
  r.mode = Mode::kRandomPair;
  r.concept_pair = ConceptPair{"a b", "c d"};
  r.rating = 4;
  r.elo = 1416.5;
  r.impact = 0.25;
  r.features = {1.0, 0.1};
  auto back = parse_ideas(serialize_ideas({r, idea("i2", "U", "Q")}));
  REQUIRE(back.size() == 2);
  CHECK(back[0] == r);
  auto j = idea_to_json(r);
  j["concept_pair"] = nullptr;
  CHECK_THROWS_AS(idea_from_json(j), FormatError);
}

TEST_CASE("generate_batch honours the mode mix") {
  std::vector<profiles::ResearcherProfile> people(3);
  for (int i = 0; i < 3; ++i) {
    people[i].researcher_id = "R" + std::to_string(i);
    people[i].concepts = {"c" + std::to_string(i), "shared"};
    corpus::PaperRecord p;
    p.paper_id = "p" + std::to_string(i);
    p.title = "Paper " + std::to_string(i);
    p.year = 2020;
    people[i].papers = {p};
  }
  judge::FunctionJudge j(mt::scripted_response);
  BatchOptions opts;
  opts.mix = {4, 0, 3};
  auto ideas = generate_batch(people, opts, j, {}, fixed_clock);
  REQUIRE(ideas.size() == 7);
  int pairs = 0;
  std::set<std::string> ids;
  for (const auto& i : ideas) {
    pairs += i.concept_pair.has_value();
    CHECK(i.researcher_a != i.researcher_b);
    ids.insert(i.idea_id);
  }
  CHECK(pairs == 4);
  CHECK(ids.size() == 7);
  opts.mix = {0, 1, 0};
  CHECK_THROWS_AS(generate_batch(people, opts, j, {}, fixed_clock), ConfigError);
}

TEST_CASE("elo arithmetic") {
  using namespace muse::tournament;
  CHECK(elo_expected(1400, 1400) == 0.5);
  CHECK(elo_expected(1600, 1400) + elo_expected(1400, 1600) == doctest::Approx(1.0));
  EloTable t({"a", "b"});
  t.apply({"a", "b", 1, "", false});
  CHECK(t.rating("a") == 1416.0);
  CHECK(t.rating("b") == 1384.0);
  CHECK(t.rating_sum() == 2800.0);
  CHECK(t.matches_played("a") == 1);
  CHECK(t.ranking().front().first == "a");
  CHECK_THROWS_AS(t.rating("zz"), NotFoundError);
  CHECK_THROWS(t.apply({"a", "a", 1, "", false}));
}

TEST_CASE("match verdict parsing") {
  using tournament::parse_match_winner;
  CHECK(parse_match_winner("RESULT: SUGGESTION 1") == 1);
  CHECK(parse_match_winner("result :suggestion 2") == 2);
  CHECK(parse_match_winner("RESULT: SUGGESTION 1 ... on reflection RESULT: SUGGESTION 2") == 2);
  CHECK_FALSE(parse_match_winner("I prefer the second one").has_value());
  CHECK_FALSE(parse_match_winner("RESULT: SUGGESTION 3").has_value());
}

TEST_CASE("match prompts swap with the order") {
  auto x = idea("x", "Idea X", "Paper X");
  auto y = idea("y", "Idea Y", "Paper Y");
  auto xy = tournament::build_match_prompt(x, y);
  auto yx = tournament::build_match_prompt(y, x);
  CHECK(xy.find("Suggestion 1: Idea X") != std::string::npos);
  CHECK(yx.find("Suggestion 1: Idea Y") != std::string::npos);
  CHECK(yx.find("Here are a few papers of Researcher A2:\n1: Paper X") != std::string::npos);
  auto empty = x;
  empty.titles_a.clear();
  CHECK_THROWS_AS(tournament::build_match_prompt(empty, y), ValidationError);
}

TEST_CASE("tournament discards invalid judgments") {
  std::vector<IdeaRecord> ideas = {idea("a", "A", "P"), idea("b", "B", "P"), idea("c", "C", "P")};
  int n = 0;
  judge::FunctionJudge flaky([&](const std::string&) {
    return ++n % 3 == 0 ? std::string("undecided") : std::string("RESULT: SUGGESTION 1");
  });
  tournament::TournamentOptions opts;
  opts.n_matches = 30;
  opts.max_attempts = 1;
  auto r = tournament::run_tournament(ideas, flaky, opts);
  CHECK(r.discarded == 10);
  CHECK(r.table.history().size() == 20);
  CHECK(r.table.rating_sum() == doctest::Approx(4200.0));
  auto back = tournament::parse_matches(tournament::serialize_matches(r.table.history()));
  CHECK(back.size() == 20);
  opts.swiss = true;
  auto s = tournament::run_tournament(ideas, flaky, opts);
  CHECK(s.table.history().size() + s.discarded == 30);
}

TEST_CASE("ranking AUC over matches") {
  tournament::EloTable t({"good", "bad"});
  t.apply({"good", "bad", 1, "", false});
  std::map<std::string, int> labels = {{"good", 1}, {"bad", 0}};
  CHECK(tournament::ranking_auc(t, labels) == 1.0);
  auto curve = tournament::auc_over_matches(t, labels, {0, 1});
  REQUIRE(curve.size() == 2);
  CHECK(curve[0].second == 0.5);
  CHECK(curve[1].second == 1.0);
}
