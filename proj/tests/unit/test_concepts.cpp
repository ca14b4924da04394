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

#include "muse/concepts.hpp"
#include "muse/error.hpp"
#include "muse/judge.hpp"
#include "muse/text.hpp"
#include "synth.hpp"

using namespace muse;
using concepts::PhraseCandidate;

namespace {
PhraseCandidate cand(const std::string& p, int64_t df = 10) {
  return {p, 1.0, df, static_cast<int>(split_words(p).size())};
}
}  // namespace

TEST_CASE("rake merges repeated phrases within a document") {
  auto c = concepts::rake_extract("Gouy phase. Gouy phase.", {"of"});
  REQUIRE(c.size() == 1);
  CHECK(c[0].phrase == "gouy phase");
  CHECK(c[0].rake_score == doctest::Approx(4.0));
}

TEST_CASE("threshold_filter rejects bad thresholds and single words") {
  std::vector<PhraseCandidate> in = {cand("word", 100), cand("two words", 9), cand("three word phrase", 6)};
  CHECK(concepts::threshold_filter(in).size() == 2);
  CHECK_THROWS_AS(concepts::threshold_filter(in, 0, 6), ValidationError);
}

TEST_CASE("rule_cleanup charges the first matching rule") {
  auto rules = concepts::RuleSet::defaults();
  rules.blocklist = {"banned topic"};
  std::vector<PhraseCandidate> in = {
      cand("the lattice"),        cand("lattice model however"), cand("light and matter"),
      cand("show demonstrated"),  cand("12 nm sample"),          cand("banned topic"),
      cand("photonic lattice")};
  auto r = concepts::rule_cleanup(in, rules);
  REQUIRE(r.kept.size() == 1);
  CHECK(r.kept[0].phrase == "photonic lattice");
  CHECK(r.removed_count == 6);
  CHECK(r.removed_by_rule["leading_fragment"] == 1);
  CHECK(r.removed_by_rule["trailing_fragment"] == 1);
  CHECK(r.removed_by_rule["conjunction"] == 1);
  CHECK(r.removed_by_rule["verb_only"] == 1);
  CHECK(r.removed_by_rule["numeric_token"] == 1);
  CHECK(r.removed_by_rule["blocklist"] == 1);
}

TEST_CASE("rules file and unknown rule names") {
  auto rules = concepts::RuleSet::load(std::string(MUSE_DATA_DIR) + "/rules.txt");
  CHECK(rules.enabled.size() == 6);
  CHECK_THROWS_AS(concepts::rule_from_name("nope"), ConfigError);
  CHECK_THROWS_AS(concepts::RuleSet::load("/nonexistent/rules"), ConfigError);
}

TEST_CASE("llm_filter uses the cache and keeps undecided batches") {
  std::vector<PhraseCandidate> in = {cand("photonic lattice"), cand("generic approach"),
                                     cand("plasma soliton")};
  int calls = 0;
  judge::FunctionJudge j([&](const std::string& p) {
    ++calls;
    return muse::testing::scripted_response(p);
  });
  concepts::VerdictCache cache;
  auto r = concepts::llm_filter(in, j, cache);
  CHECK(r.kept.size() == 2);
  REQUIRE(r.removed.size() == 1);
  CHECK(r.removed[0].phrase == "generic approach");
  CHECK(cache.size() == 3);
  concepts::llm_filter(in, j, cache);
  CHECK(calls == 1);  // second pass answered from cache

  judge::FunctionJudge garbage([](const std::string&) { return std::string("no list here"); });
  concepts::VerdictCache empty;
  concepts::LlmFilterOptions opts;
  opts.batch_size = 2;
  auto u = concepts::llm_filter(in, garbage, empty, opts);
  CHECK(u.undecided_batches == 2);
  CHECK(u.kept.size() == 3);
  CHECK(empty.size() == 0);
}

TEST_CASE("verdict cache persists") {
  muse::testing::TempDir dir;
  concepts::VerdictCache c;
  c.put("a b", true);
  c.put("c d", false);
  c.save(dir.file("cache.jsonl"));
  auto back = concepts::VerdictCache::load(dir.file("cache.jsonl"));
  REQUIRE(back.find("c d") != nullptr);
  CHECK_FALSE(*back.find("c d"));
  CHECK(*back.find("a b"));
}

TEST_CASE("whitelist restores only removed phrases") {
  std::vector<PhraseCandidate> removed = {cand("generic framework"), cand("generic approach")};
  auto back = concepts::whitelist_restore(removed, {"generic framework", "never removed"});
  REQUIRE(back.size() == 1);
  CHECK(back[0].phrase == "generic framework");
}

TEST_CASE("finalize_lexicon rejects inconsistent stages") {
  std::vector<PhraseCandidate> rules = {cand("a b"), cand("c d")};
  CHECK_THROWS_AS(concepts::finalize_lexicon(5, 2, rules, {cand("x y")}, {}), ConsistencyError);
  CHECK_THROWS_AS(concepts::finalize_lexicon(5, 2, rules, {cand("a b")}, {cand("c d")}),
                  ConsistencyError);
  auto lex = concepts::finalize_lexicon(5, 2, rules, {cand("a b")}, {});
  CHECK(lex.concepts == std::set<std::string>{"c d"});
  CHECK(lex.stage_counts.final_count == 1);
}

TEST_CASE("build_lexicon on the synthetic corpus") {
  auto sc = muse::testing::make_corpus(300, 2, 4);
  judge::FunctionJudge j(muse::testing::scripted_response);
  concepts::VerdictCache cache;
  auto stop = read_word_list(std::string(MUSE_DATA_DIR) + "/stopwords.txt");
  auto b = concepts::build_lexicon(sc.corpus, stop, &j, &cache, {"generic framework"});
  for (const auto& c : sc.concepts) CHECK(b.lexicon.contains(c));
  CHECK(b.lexicon.contains("generic framework"));
  CHECK_FALSE(b.lexicon.contains("generic approach"));
  const auto& s = b.lexicon.stage_counts;
  CHECK(s.final_count == s.after_rules - s.removed_by_llm + s.restored_by_whitelist);
  CHECK(s.restored_by_whitelist == 1);
  CHECK(b.cleanup.removed_by_rule.count("numeric_token"));

  auto no_llm = concepts::build_lexicon(sc.corpus, stop, nullptr, nullptr, {});
  CHECK(no_llm.lexicon.stage_counts.removed_by_llm == 0);
  CHECK(no_llm.lexicon.contains("generic approach"));
}

TEST_CASE("lexicon serialization") {
  concepts::ConceptLexicon lex;
  lex.concepts = {"a b", "c d e"};
  lex.stage_counts = concepts::finalize_counts({10, 8, 3, 2, 1, 0});
  CHECK(concepts::parse_lexicon(concepts::serialize_lexicon(lex)) == lex);
  CHECK_THROWS_AS(concepts::parse_lexicon("garbage"), FormatError);
}
