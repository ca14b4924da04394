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

#include <set>
#include <string>
#include <vector>

#include "muse/concepts.hpp"
#include "muse/corpus.hpp"
#include "muse/judge.hpp"
#include "muse/kgraph.hpp"

namespace muse::profiles {

struct ResearcherProfile {
  std::string researcher_id;
  std::vector<corpus::PaperRecord> papers;
  int window_years = 2;
  std::set<std::string> raw_concepts;
  std::set<std::string> concepts;  // after refinement, subset of raw
  // Set when refinement could not run and concepts fell back to raw.
  bool refinement_fallback = false;

  // Papers inside the window, newest first (year desc, then paper_id).
  std::vector<const corpus::PaperRecord*> window_papers() const;
  // Titles of the window papers, newest first.
  std::vector<std::string> recent_titles() const;

  bool operator==(const ResearcherProfile&) const = default;
};

// Window = the window_years calendar years ending at the researcher's newest
// paper. Returns the lexicon concepts found in those papers. Empty paper
// list or window_years < 1 -> ValidationError.
std::set<std::string> extract_researcher_concepts(
    const std::vector<corpus::PaperRecord>& papers,
    const concepts::ConceptLexicon& lexicon, int window_years = 2);

// Renders the refinement prompt: titles numbered from 0, one per line, then
// the concept list.
std::string build_refinement_prompt(const std::vector<std::string>& titles,
                                    const std::set<std::string>& concepts);

struct RefineResult {
  std::set<std::string> concepts;
  bool fallback = false;
};

// Asks the judge to prune the concept list. The reply can only remove
// concepts; anything it adds is ignored. Judge failure or an unparseable
// reply falls back to the raw set with fallback = true.
RefineResult refine_profile(const std::set<std::string>& raw,
                            const std::vector<std::string>& titles,
                            judge::JudgeClient& judge, int max_attempts = 3);

// 1 - |a ∩ b| / |a ∪ b|. Empty set -> ValidationError.
double semantic_distance_concepts(const std::set<std::string>& a,
                                  const std::set<std::string>& b);

// Jaccard distance between a ∪ N(a) and b ∪ N(b), neighborhoods taken in
// the snapshot. Concepts missing from the graph -> NotFoundError.
double semantic_distance_neighborhood(const std::set<std::string>& a,
                                      const std::set<std::string>& b,
                                      const kg::GraphSnapshot& snapshot);

std::set<std::string> expand_with_neighbors(const std::set<std::string>& concepts,
                                            const kg::GraphSnapshot& snapshot);

struct ResearcherInput {
  std::string researcher_id;
  std::vector<corpus::PaperRecord> papers;
};

// JSONL, one researcher per line: {"researcher_id": .., "paper_ids": [..]}
// resolved against the corpus, and/or inline "papers": [{paper record}].
// Unknown paper ids -> NotFoundError.
std::vector<ResearcherInput> read_researchers(const std::string& text,
                                              const corpus::Corpus& corpus);

struct BuildOptions {
  int window_years = 2;
  int max_attempts = 3;
};

// extract + (optional) refine for each researcher; judge may be null to skip
// refinement. A researcher without papers -> ValidationError.
std::vector<ResearcherProfile> build_profiles(
    const std::vector<ResearcherInput>& inputs,
    const concepts::ConceptLexicon& lexicon, judge::JudgeClient* judge,
    const BuildOptions& options = {});

// Profiles file: JSONL with researcher_id, window_years, raw_concepts,
// concepts, refinement_fallback and the full paper records.
std::string serialize_profiles(const std::vector<ResearcherProfile>& profiles);
std::vector<ResearcherProfile> parse_profiles(const std::string& text);

}  // namespace muse::profiles
