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

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace muse::prompts {

// A prompt template with {{slot}} placeholders. Templates are identified by
// the SHA-256 of their text so that any edit shows up as a new hash in every
// artifact generated from them.
struct PromptTemplate {
  std::string_view id;
  std::string_view text;

  std::string hash() const;
  std::vector<std::string> slots() const;
};

// Researcher concept-list refinement. Slots: titles, concepts.
const PromptTemplate& refine_concepts();
// Idea generation around a given concept pair. Slots: concept1, concept2,
// titles_a, titles_b.
const PromptTemplate& idea_with_pair();
// Idea generation where the model picks the two concepts from the titles.
// Slots: titles_a, titles_b.
const PromptTemplate& idea_without_pair();
// Pairwise interest comparison. Slots: papers_a1, suggestion1, papers_a2,
// suggestion2.
const PromptTemplate& zero_shot_ranking();
// Batch filter for lexicon candidates. Slots: concepts.
const PromptTemplate& lexicon_filter();

const std::vector<const PromptTemplate*>& all_templates();

// Substitutes every slot. Throws ValidationError on a missing or unknown
// slot value.
std::string render(const PromptTemplate& tmpl,
                   const std::map<std::string, std::string>& values);

}  // namespace muse::prompts
