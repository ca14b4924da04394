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

#include "muse/concepts.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "muse/error.hpp"
#include "muse/prompts.hpp"
#include "muse/text.hpp"

namespace muse::concepts {

using nlohmann::json;

namespace {

// Words that cannot open or close a concept.
const std::set<std::string>& fragment_words() {
  static const std::set<std::string> words = {
      "a",        "about",   "above",   "across",  "after",     "again",
      "against",  "all",     "also",    "although", "among",    "an",
      "and",      "another", "any",     "are",     "as",        "at",
      "be",       "because", "been",    "before",  "being",     "between",
      "both",     "but",     "by",      "can",     "could",     "each",
      "either",   "every",   "for",     "from",    "further",   "furthermore",
      "hence",    "her",     "here",    "his",     "how",       "however",
      "if",       "in",      "into",    "is",      "it",        "its",
      "many",     "may",     "might",   "moreover", "most",     "much",
      "must",     "neither", "nor",     "not",     "of",        "on",
      "only",     "onto",    "or",      "other",   "our",       "over",
      "per",      "several", "should",  "since",   "so",        "some",
      "such",     "than",    "that",    "the",     "their",     "them",
      "then",     "there",   "therefore", "these", "they",      "this",
      "those",    "thus",    "to",      "toward",  "towards",   "under",
      "upon",     "us",      "using",   "very",    "via",       "was",
      "we",       "were",    "what",    "when",    "whereas",   "which",
      "while",    "who",     "whose",   "why",     "will",      "with",
      "within",   "without", "would",   "yet",     "you",       "your",
  };
  return words;
}

const std::set<std::string>& conjunctions() {
  static const std::set<std::string> words = {
      "and",      "or",      "but",   "nor",      "yet",     "however",
      "although", "whereas", "while", "because",  "thus",    "therefore",
      "hence",    "moreover", "furthermore", "nevertheless", "though",
  };
  return words;
}

// Closed list of common verbs (and their inflections) seen in RAKE output.
const std::set<std::string>& verbs() {
  static const std::set<std::string> words = {
      "achieve",  "achieved",  "achieves",  "allow",     "allowed",
      "allows",   "analyze",   "analyzed",  "apply",     "applied",
      "applies",  "consider",  "considered", "demonstrate", "demonstrated",
      "demonstrates", "describe", "described", "describes", "determine",
      "determined", "develop", "developed", "develops",  "enable",
      "enabled",  "enables",   "find",      "found",     "finds",
      "give",     "given",     "gives",     "improve",   "improved",
      "improves", "increase",  "increased", "increases", "investigate",
      "investigated", "investigates", "lead", "leads",   "led",
      "make",     "made",      "makes",     "observe",   "observed",
      "obtain",   "obtained",  "perform",   "performed", "present",
      "presented", "presents", "propose",   "proposed",  "proposes",
      "provide",  "provided",  "provides",  "reduce",    "reduced",
      "report",   "reported",  "reports",   "reveal",    "revealed",
      "reveals",  "show",      "showed",    "shown",     "shows",
      "study",    "studied",   "studies",   "suggest",   "suggested",
      "suggests", "use",       "used",      "uses",      "yield",
      "yields",
  };
  return words;
}

bool is_numeric_token(const std::string& w) {
  bool digit = false;
  for (char c : w) {
    if (c >= '0' && c <= '9') {
      digit = true;
    } else if (c != '.' && c != ',' && c != '-' && c != '%' && c != '/') {
      return false;
    }
  }
  return digit;
}

bool rule_hits(Rule rule, const std::vector<std::string>& words,
               const std::string& phrase, const RuleSet& rules) {
  if (words.empty()) return true;
  switch (rule) {
    case Rule::kLeadingFragment:
      return fragment_words().count(words.front()) > 0;
    case Rule::kTrailingFragment:
      return fragment_words().count(words.back()) > 0;
    case Rule::kConjunction:
      return std::any_of(words.begin(), words.end(), [](const std::string& w) {
        return conjunctions().count(w) > 0;
      });
    case Rule::kVerbOnly:
      return std::all_of(words.begin(), words.end(), [](const std::string& w) {
        return verbs().count(w) > 0;
      });
    case Rule::kNumericToken:
      return std::any_of(words.begin(), words.end(), is_numeric_token);
    case Rule::kBlocklist:
      return rules.blocklist.count(phrase) > 0;
  }
  return false;
}

}  // namespace

std::string_view rule_name(Rule rule) {
  switch (rule) {
    case Rule::kLeadingFragment: return "leading_fragment";
    case Rule::kTrailingFragment: return "trailing_fragment";
    case Rule::kConjunction: return "conjunction";
    case Rule::kVerbOnly: return "verb_only";
    case Rule::kNumericToken: return "numeric_token";
    case Rule::kBlocklist: return "blocklist";
  }
  return "unknown";
}

Rule rule_from_name(std::string_view name) {
  for (Rule r : {Rule::kLeadingFragment, Rule::kTrailingFragment,
                 Rule::kConjunction, Rule::kVerbOnly, Rule::kNumericToken,
                 Rule::kBlocklist}) {
    if (rule_name(r) == name) return r;
  }
  throw ConfigError("unknown cleanup rule: " + std::string(name));
}

RuleSet RuleSet::defaults() {
  return {{Rule::kLeadingFragment, Rule::kTrailingFragment, Rule::kConjunction,
           Rule::kVerbOnly, Rule::kNumericToken, Rule::kBlocklist},
          {}};
}

RuleSet RuleSet::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read rules file: " + path);
  RuleSet rules;
  std::string line;
  while (std::getline(in, line)) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    Rule r = rule_from_name(t);
    if (std::find(rules.enabled.begin(), rules.enabled.end(), r) ==
        rules.enabled.end()) {
      rules.enabled.push_back(r);
    }
  }
  return rules;
}

CleanupResult rule_cleanup(const std::vector<PhraseCandidate>& candidates,
                           const RuleSet& rules) {
  CleanupResult result;
  for (const auto& c : candidates) {
    auto words = split_words(c.phrase);
    bool removed = false;
    for (Rule r : rules.enabled) {
      if (rule_hits(r, words, c.phrase, rules)) {
        ++result.removed_by_rule[std::string(rule_name(r))];
        removed = true;
        break;
      }
    }
    if (removed) {
      ++result.removed_count;
    } else {
      result.kept.push_back(c);
    }
  }
  return result;
}

VerdictCache VerdictCache::load(const std::string& path) {
  VerdictCache cache;
  std::ifstream in(path);
  if (!in) return cache;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("phrase") || !j.contains("keep")) {
      throw FormatError("bad verdict cache line in " + path);
    }
    cache.put(j["phrase"].get<std::string>(), j["keep"].get<bool>());
  }
  return cache;
}

void VerdictCache::save(const std::string& path) const {
  std::string out;
  for (const auto& [phrase, keep] : verdicts_) {
    out += json{{"phrase", phrase}, {"keep", keep}}.dump() + "\n";
  }
  write_file_atomic(path, out);
}

const bool* VerdictCache::find(const std::string& phrase) const {
  auto it = verdicts_.find(phrase);
  return it == verdicts_.end() ? nullptr : &it->second;
}

LlmFilterResult llm_filter(const std::vector<PhraseCandidate>& candidates,
                           judge::JudgeClient& judge, VerdictCache& cache,
                           const LlmFilterOptions& options) {
  LlmFilterResult result;
  const size_t batch_size = std::max<size_t>(1, options.batch_size);

  std::vector<std::string> pending;
  std::set<std::string> queued;
  for (const auto& c : candidates) {
    if (cache.find(c.phrase) == nullptr && queued.insert(c.phrase).second) {
      pending.push_back(c.phrase);
    }
  }

  std::set<std::string> undecided;
  for (size_t start = 0; start < pending.size(); start += batch_size) {
    size_t end = std::min(pending.size(), start + batch_size);
    std::vector<std::string> batch(pending.begin() + start, pending.begin() + end);
    std::string listing;
    for (const auto& p : batch) {
      if (!listing.empty()) listing += ", ";
      listing += p;
    }
    std::string prompt =
        prompts::render(prompts::lexicon_filter(), {{"concepts", listing}});
    ++result.judge_requests;
    std::vector<std::string> items;
    bool decided = false;
    try {
      std::string response =
          judge::complete_with_retry(judge, prompt, options.max_attempts);
      decided = judge::parse_bracket_list(response, items);
    } catch (const JudgeError&) {
      decided = false;
    }
    if (!decided) {
      // Undecided batches are kept and not cached, so a later run retries.
      ++result.undecided_batches;
      undecided.insert(batch.begin(), batch.end());
      continue;
    }
    std::set<std::string> keep;
    for (const auto& item : items) keep.insert(normalize_text(item));
    for (const auto& p : batch) cache.put(p, keep.count(p) > 0);
  }

  for (const auto& c : candidates) {
    const bool* verdict = cache.find(c.phrase);
    if (verdict == nullptr || *verdict || undecided.count(c.phrase)) {
      result.kept.push_back(c);
    } else {
      result.removed.push_back(c);
    }
  }
  return result;
}

std::vector<PhraseCandidate> whitelist_restore(
    const std::vector<PhraseCandidate>& removed,
    const std::set<std::string>& whitelist) {
  std::vector<PhraseCandidate> restored;
  for (const auto& c : removed) {
    if (whitelist.count(normalize_text(c.phrase))) restored.push_back(c);
  }
  return restored;
}

std::map<std::string, int64_t> StageCounts::as_map() const {
  return {{"candidates", candidates},
          {"after_threshold", after_threshold},
          {"after_rules", after_rules},
          {"removed_by_llm", removed_by_llm},
          {"restored_by_whitelist", restored_by_whitelist},
          {"final", final_count}};
}

StageCounts verify_accounting(StageCounts counts) {
  for (const auto& [name, v] : counts.as_map()) {
    if (v < 0) throw ConsistencyError("negative stage count: " + name);
  }
  const int64_t expected =
      counts.after_rules - counts.removed_by_llm + counts.restored_by_whitelist;
  if (counts.final_count != expected) {
    throw ConsistencyError(
        "lexicon accounting mismatch: final " +
        std::to_string(counts.final_count) + " != after_rules " +
        std::to_string(counts.after_rules) + " - removed_by_llm " +
        std::to_string(counts.removed_by_llm) + " + restored_by_whitelist " +
        std::to_string(counts.restored_by_whitelist));
  }
  if (counts.restored_by_whitelist > counts.removed_by_llm ||
      counts.removed_by_llm > counts.after_rules) {
    throw ConsistencyError("lexicon stage counts are not nested");
  }
  return counts;
}

StageCounts finalize_counts(StageCounts counts) {
  counts.final_count =
      counts.after_rules - counts.removed_by_llm + counts.restored_by_whitelist;
  return verify_accounting(counts);
}

ConceptLexicon finalize_lexicon(int64_t candidates, int64_t after_threshold,
                                const std::vector<PhraseCandidate>& after_rules,
                                const std::vector<PhraseCandidate>& removed_by_llm,
                                const std::vector<PhraseCandidate>& restored) {
  std::set<std::string> kept;
  for (const auto& c : after_rules) kept.insert(c.phrase);
  std::set<std::string> removed;
  for (const auto& c : removed_by_llm) {
    if (!kept.count(c.phrase)) {
      throw ConsistencyError("removed phrase not in rule output: " + c.phrase);
    }
    removed.insert(c.phrase);
  }
  std::set<std::string> back;
  for (const auto& c : restored) {
    if (!removed.count(c.phrase)) {
      throw ConsistencyError("restored phrase was never removed: " + c.phrase);
    }
    back.insert(c.phrase);
  }
  ConceptLexicon lex;
  for (const auto& p : kept) {
    if (!removed.count(p) || back.count(p)) lex.concepts.insert(p);
  }
  for (const auto& p : lex.concepts) {
    if (split_words(p).size() < 2) {
      throw ConsistencyError("concept with fewer than two words: " + p);
    }
  }
  StageCounts counts;
  counts.candidates = candidates;
  counts.after_threshold = after_threshold;
  counts.after_rules = static_cast<int64_t>(kept.size());
  counts.removed_by_llm = static_cast<int64_t>(removed.size());
  counts.restored_by_whitelist = static_cast<int64_t>(back.size());
  counts.final_count = static_cast<int64_t>(lex.concepts.size());
  lex.stage_counts = verify_accounting(counts);
  return lex;
}

std::string serialize_lexicon(const ConceptLexicon& lexicon) {
  std::ostringstream out;
  out << "muse-lexicon 1\n";
  for (const auto& [name, v] : lexicon.stage_counts.as_map()) {
    out << "stage " << name << ' ' << v << '\n';
  }
  out << "---\n";
  for (const auto& c : lexicon.concepts) out << c << '\n';
  return out.str();
}

ConceptLexicon parse_lexicon(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "muse-lexicon 1") {
    throw FormatError("not a muse-lexicon v1 file");
  }
  ConceptLexicon lex;
  auto& sc = lex.stage_counts;
  std::map<std::string, int64_t*> fields = {
      {"candidates", &sc.candidates},
      {"after_threshold", &sc.after_threshold},
      {"after_rules", &sc.after_rules},
      {"removed_by_llm", &sc.removed_by_llm},
      {"restored_by_whitelist", &sc.restored_by_whitelist},
      {"final", &sc.final_count}};
  bool body = false;
  while (std::getline(in, line)) {
    if (!body) {
      if (line == "---") {
        body = true;
        continue;
      }
      std::istringstream ls(line);
      std::string tag, name;
      int64_t value = 0;
      if (!(ls >> tag >> name >> value) || tag != "stage" || !fields.count(name)) {
        throw FormatError("bad lexicon header line: " + line);
      }
      *fields[name] = value;
      continue;
    }
    if (!line.empty()) lex.concepts.insert(line);
  }
  if (!body) throw FormatError("lexicon file has no concept section");
  verify_accounting(sc);
  if (static_cast<int64_t>(lex.concepts.size()) != sc.final_count) {
    throw ConsistencyError("lexicon file lists " +
                           std::to_string(lex.concepts.size()) +
                           " concepts but records final=" +
                           std::to_string(sc.final_count));
  }
  return lex;
}

void write_lexicon(const ConceptLexicon& lexicon, const std::string& path) {
  write_file_atomic(path, serialize_lexicon(lexicon));
}

ConceptLexicon read_lexicon(const std::string& path) {
  return parse_lexicon(read_file(path));
}

LexiconBuild build_lexicon(const corpus::Corpus& corpus,
                           const std::set<std::string>& stopwords,
                           judge::JudgeClient* judge, VerdictCache* cache,
                           const std::set<std::string>& whitelist,
                           const LexiconBuildOptions& options) {
  LexiconBuild out;
  const auto candidates = collect_candidates(corpus, stopwords);
  const auto thresholded =
      threshold_filter(candidates, options.min_df_2word, options.min_df_longer);
  out.cleanup = rule_cleanup(thresholded, options.rules);
  if (judge) {
    VerdictCache scratch;
    out.llm = llm_filter(out.cleanup.kept, *judge, cache ? *cache : scratch, options.llm);
  } else {
    out.llm.kept = out.cleanup.kept;
  }
  out.restored = whitelist_restore(out.llm.removed, whitelist);
  out.lexicon = finalize_lexicon(static_cast<int64_t>(candidates.size()),
                                 static_cast<int64_t>(thresholded.size()),
                                 out.cleanup.kept, out.llm.removed, out.restored);
  return out;
}

}  // namespace muse::concepts
