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

#include <algorithm>
#include <map>
#include <unordered_map>

#include "muse/concepts.hpp"
#include "muse/error.hpp"
#include "muse/text.hpp"

namespace muse::concepts {

std::vector<PhraseCandidate> rake_extract(std::string_view doc,
                                          const std::set<std::string>& stopwords) {
  const std::string normalized = normalize_text(doc);
  const std::vector<Token> tokens = tokenize(normalized);

  // Candidate phrase occurrences, in document order.
  std::vector<std::vector<std::string>> occurrences;
  std::vector<std::string> current;
  auto close_phrase = [&] {
    if (!current.empty()) occurrences.push_back(std::move(current));
    current.clear();
  };
  for (const auto& t : tokens) {
    if (t.phrase_start) close_phrase();
    if (stopwords.count(t.text)) {
      close_phrase();
      continue;
    }
    current.push_back(t.text);
  }
  close_phrase();

  std::unordered_map<std::string, double> freq, deg;
  for (const auto& phrase : occurrences) {
    for (const auto& w : phrase) {
      freq[w] += 1.0;
      deg[w] += static_cast<double>(phrase.size());
    }
  }

  std::map<std::string, PhraseCandidate> merged;
  for (const auto& phrase : occurrences) {
    std::string key = join_words(phrase);
    if (merged.count(key)) continue;
    double score = 0.0;
    for (const auto& w : phrase) score += deg[w] / freq[w];
    merged.emplace(key, PhraseCandidate{key, score, 1,
                                        static_cast<int>(phrase.size())});
  }
  std::vector<PhraseCandidate> out;
  out.reserve(merged.size());
  for (auto& [_, c] : merged) out.push_back(std::move(c));
  return out;
}

std::vector<PhraseCandidate> collect_candidates(
    const corpus::Corpus& corpus, const std::set<std::string>& stopwords) {
  std::map<std::string, PhraseCandidate> merged;
  for (const auto& record : corpus.records()) {
    for (auto& c : rake_extract(record.document_text(), stopwords)) {
      auto [it, inserted] = merged.try_emplace(c.phrase, c);
      if (!inserted) {
        it->second.doc_frequency += 1;
        it->second.rake_score = std::max(it->second.rake_score, c.rake_score);
      }
    }
  }
  std::vector<PhraseCandidate> out;
  out.reserve(merged.size());
  for (auto& [_, c] : merged) out.push_back(std::move(c));
  return out;
}

std::vector<PhraseCandidate> threshold_filter(
    const std::vector<PhraseCandidate>& candidates, int64_t min_df_2word,
    int64_t min_df_longer) {
  if (min_df_2word < 1 || min_df_longer < 1) {
    throw ValidationError("document-frequency thresholds must be >= 1");
  }
  std::vector<PhraseCandidate> out;
  for (const auto& c : candidates) {
    if (c.word_count == 2 && c.doc_frequency >= min_df_2word) {
      out.push_back(c);
    } else if (c.word_count >= 3 && c.doc_frequency >= min_df_longer) {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace muse::concepts
