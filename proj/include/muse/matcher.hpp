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

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "muse/concepts.hpp"
#include "muse/corpus.hpp"
#include "muse/text.hpp"

namespace muse {

// Finds lexicon concepts in normalized text at word boundaries. Matches
// never cross punctuation.
class ConceptMatcher {
 public:
  explicit ConceptMatcher(const std::set<std::string>& concepts);

  // Leftmost-longest, non-overlapping scan: at each token the longest
  // concept starting there wins and the scan resumes after it, so
  // "neural network" does not also fire inside "recurrent neural network".
  std::set<std::string> longest_matches(std::string_view normalized) const;

  // Every concept that occurs anywhere (overlaps allowed).
  std::set<std::string> all_matches(std::string_view normalized) const;

  size_t size() const { return concept_count_; }

 private:
  struct Node {
    std::unordered_map<std::string, std::unique_ptr<Node>> next;
    const std::string* label = nullptr;
  };

  template <typename Visit>
  void scan(const std::vector<Token>& tokens, size_t start, Visit&& visit) const;

  Node root_;
  std::set<std::string> concepts_;
  size_t concept_count_ = 0;
};

namespace corpus {

// Keeps records whose title+abstract contains at least two distinct lexicon
// concepts (any occurrence at word boundaries). Empty lexicon ->
// ValidationError.
Corpus filter_usable(const Corpus& corpus, const concepts::ConceptLexicon& lexicon);

}  // namespace corpus
}  // namespace muse
