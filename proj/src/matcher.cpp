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

#include "muse/matcher.hpp"

#include "muse/error.hpp"
#include "muse/text.hpp"

namespace muse {

ConceptMatcher::ConceptMatcher(const std::set<std::string>& concepts)
    : concepts_(concepts) {
  for (const auto& c : concepts_) {
    auto words = split_words(c);
    if (words.empty()) continue;
    Node* node = &root_;
    for (const auto& w : words) {
      auto& child = node->next[w];
      if (!child) child = std::make_unique<Node>();
      node = child.get();
    }
    if (node->label == nullptr) ++concept_count_;
    node->label = &c;
  }
}

template <typename Visit>
void ConceptMatcher::scan(const std::vector<Token>& tokens, size_t start,
                          Visit&& visit) const {
  const Node* node = &root_;
  for (size_t i = start; i < tokens.size(); ++i) {
    if (i > start && tokens[i].phrase_start) break;
    auto it = node->next.find(tokens[i].text);
    if (it == node->next.end()) break;
    node = it->second.get();
    if (node->label) visit(*node->label, i + 1);
  }
}

std::set<std::string> ConceptMatcher::longest_matches(
    std::string_view normalized) const {
  std::set<std::string> found;
  auto tokens = tokenize(normalized);
  size_t i = 0;
  while (i < tokens.size()) {
    const std::string* best = nullptr;
    size_t best_end = i;
    scan(tokens, i, [&](const std::string& c, size_t end) {
      best = &c;
      best_end = end;
    });
    if (best) {
      found.insert(*best);
      i = best_end;
    } else {
      ++i;
    }
  }
  return found;
}

std::set<std::string> ConceptMatcher::all_matches(
    std::string_view normalized) const {
  std::set<std::string> found;
  auto tokens = tokenize(normalized);
  for (size_t i = 0; i < tokens.size(); ++i) {
    scan(tokens, i, [&](const std::string& c, size_t) { found.insert(c); });
  }
  return found;
}

namespace corpus {

Corpus filter_usable(const Corpus& corpus,
                     const concepts::ConceptLexicon& lexicon) {
  if (lexicon.concepts.empty()) {
    throw ValidationError("cannot filter a corpus against an empty lexicon");
  }
  ConceptMatcher matcher(lexicon.concepts);
  std::vector<PaperRecord> kept;
  for (const auto& r : corpus.records()) {
    if (matcher.all_matches(r.document_text()).size() >= 2) kept.push_back(r);
  }
  return Corpus(std::move(kept), corpus.cutoff_year(), corpus.source_label());
}

}  // namespace corpus
}  // namespace muse
