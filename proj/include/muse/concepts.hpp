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
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "muse/corpus.hpp"
#include "muse/judge.hpp"

namespace muse::concepts {

struct PhraseCandidate {
  std::string phrase;  // normalized, words joined by single spaces
  double rake_score = 0.0;
  // Distinct papers containing the phrase.
  int64_t doc_frequency = 0;
  int word_count = 0;

  bool operator==(const PhraseCandidate&) const = default;
};

// RAKE over one document. Phrases are maximal runs of non-stopword tokens
// not interrupted by punctuation. For every word, freq is its number of
// occurrences in candidate phrases and deg the summed length of the phrase
// occurrences containing it; a phrase scores sum(deg/freq) over its words.
// Repeated phrases are merged (doc_frequency 1). Sorted by phrase.
std::vector<PhraseCandidate> rake_extract(std::string_view doc,
                                          const std::set<std::string>& stopwords);

// rake_extract over title+abstract of every paper; doc_frequency counts
// papers, rake_score keeps the maximum per-paper score. Sorted by phrase.
std::vector<PhraseCandidate> collect_candidates(
    const corpus::Corpus& corpus, const std::set<std::string>& stopwords);

// Keeps 2-word phrases with doc_frequency >= min_df_2word and phrases of 3
// or more words with doc_frequency >= min_df_longer. 1-word phrases go.
std::vector<PhraseCandidate> threshold_filter(
    const std::vector<PhraseCandidate>& candidates, int64_t min_df_2word = 9,
    int64_t min_df_longer = 6);

enum class Rule {
  kLeadingFragment,   // starts with a determiner/pronoun/conjunction/adverb
  kTrailingFragment,  // ends with one
  kConjunction,       // contains a conjunction anywhere
  kVerbOnly,          // every word is on the closed verb list
  kNumericToken,      // contains a token made only of digits and separators
  kBlocklist,         // listed in the human-editable blocklist
};

std::string_view rule_name(Rule rule);
Rule rule_from_name(std::string_view name);

struct RuleSet {
  // Applied in this order; a phrase is charged to the first rule it hits.
  std::vector<Rule> enabled;
  std::set<std::string> blocklist;

  static RuleSet defaults();
  // One rule name per line ('#' comments). Unknown names -> ConfigError.
  static RuleSet load(const std::string& path);
};

struct CleanupResult {
  std::vector<PhraseCandidate> kept;
  size_t removed_count = 0;
  std::map<std::string, size_t> removed_by_rule;
};

CleanupResult rule_cleanup(const std::vector<PhraseCandidate>& candidates,
                           const RuleSet& rules = RuleSet::defaults());

// Phrase -> keep verdict, persisted as JSON lines {"phrase":..,"keep":..}.
class VerdictCache {
 public:
  static VerdictCache load(const std::string& path);
  void save(const std::string& path) const;

  const bool* find(const std::string& phrase) const;
  void put(const std::string& phrase, bool keep) { verdicts_[phrase] = keep; }
  size_t size() const { return verdicts_.size(); }

 private:
  std::map<std::string, bool> verdicts_;
};

struct LlmFilterOptions {
  size_t batch_size = 50;
  int max_attempts = 3;
};

struct LlmFilterResult {
  std::vector<PhraseCandidate> kept;
  std::vector<PhraseCandidate> removed;
  // Batches kept wholesale because the judge failed or gave no list.
  size_t undecided_batches = 0;
  size_t judge_requests = 0;
};

// Sends uncached phrases to the judge in batches (lexicon_filter prompt);
// phrases listed in the reply are kept, the others removed. Verdicts land in
// the cache, so a rerun over the same phrases issues no requests.
LlmFilterResult llm_filter(const std::vector<PhraseCandidate>& candidates,
                           judge::JudgeClient& judge, VerdictCache& cache,
                           const LlmFilterOptions& options = {});

// Removed phrases whose normalized form is whitelisted, in input order.
std::vector<PhraseCandidate> whitelist_restore(
    const std::vector<PhraseCandidate>& removed,
    const std::set<std::string>& whitelist);

struct StageCounts {
  int64_t candidates = 0;
  int64_t after_threshold = 0;
  int64_t after_rules = 0;
  int64_t removed_by_llm = 0;
  int64_t restored_by_whitelist = 0;
  int64_t final_count = 0;

  std::map<std::string, int64_t> as_map() const;
  bool operator==(const StageCounts&) const = default;
};

struct ConceptLexicon {
  std::set<std::string> concepts;
  StageCounts stage_counts;

  bool contains(const std::string& c) const { return concepts.count(c) > 0; }
  size_t size() const { return concepts.size(); }
  bool operator==(const ConceptLexicon&) const = default;
};

// Checks final = after_rules - removed_by_llm + restored_by_whitelist, that
// counts are non-negative and nested. ConsistencyError on mismatch.
StageCounts verify_accounting(StageCounts counts);
// Derives final_count from the other stages, then verifies. Used for
// recorded runs where only the stage counters are known.
StageCounts finalize_counts(StageCounts counts);

// Assembles the lexicon from stage outputs: (after_rules \ removed) ∪
// restored. Throws ConsistencyError when the set algebra and the counters
// disagree, or when a restored phrase was never removed.
ConceptLexicon finalize_lexicon(int64_t candidates, int64_t after_threshold,
                                const std::vector<PhraseCandidate>& after_rules,
                                const std::vector<PhraseCandidate>& removed_by_llm,
                                const std::vector<PhraseCandidate>& restored);

struct LexiconBuildOptions {
  int64_t min_df_2word = 9;
  int64_t min_df_longer = 6;
  RuleSet rules = RuleSet::defaults();
  LlmFilterOptions llm;
};

struct LexiconBuild {
  ConceptLexicon lexicon;
  CleanupResult cleanup;
  LlmFilterResult llm;  // empty when no judge was given
  std::vector<PhraseCandidate> restored;
};

// The whole pipeline: RAKE candidates, df thresholds, rule cleanup, optional
// judge filter (skipped when judge is null), whitelist restore, accounting.
LexiconBuild build_lexicon(const corpus::Corpus& corpus,
                           const std::set<std::string>& stopwords,
                           judge::JudgeClient* judge, VerdictCache* cache,
                           const std::set<std::string>& whitelist,
                           const LexiconBuildOptions& options = {});

// Lexicon file: "muse-lexicon 1", one "stage <name> <count>" line per stage,
// "---", then one concept per line (sorted).
std::string serialize_lexicon(const ConceptLexicon& lexicon);
ConceptLexicon parse_lexicon(const std::string& text);
void write_lexicon(const ConceptLexicon& lexicon, const std::string& path);
ConceptLexicon read_lexicon(const std::string& path);

}  // namespace muse::concepts
