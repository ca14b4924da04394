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

// Synthetic data and scripted judges shared by the unit and acceptance tests.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "muse/corpus.hpp"
#include "muse/judge.hpp"
#include "muse/kgraph.hpp"
#include "muse/training.hpp"

namespace muse::testing {

// Removes itself on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct SynthCorpus {
  corpus::Corpus corpus;
  std::vector<std::string> concepts;       // planted two-word phrases
  std::vector<std::string> generic;        // planted phrases the scripted judge rejects
  std::string researchers_jsonl;           // researcher_id + paper_ids
  std::vector<std::string> researcher_ids;
};

// Papers built from a fixed phrase vocabulary joined by stopwords.
SynthCorpus make_corpus(size_t n_papers, size_t n_researchers, uint64_t seed,
                        int first_year = 2008, int cutoff_year = 2023);

// A graph of n vertices with random edges; vertex stats are empty.
kg::KnowledgeGraph random_graph(size_t n, double edge_probability, uint64_t seed,
                                int year = 2020);

// Raw papers as concept-id sets, for graphs built from first principles.
struct RawPaper {
  std::string id;
  int year = 0;
  std::set<int> concepts;
  std::map<int, int64_t> citations;
};
std::vector<RawPaper> random_papers(size_t n_concepts, size_t n_papers, uint64_t seed,
                                    int first_year, int last_year);
std::string fixture_concept_name(int i);
corpus::Corpus raw_to_corpus(const std::vector<RawPaper>& papers, int cutoff_year);

// Judge answering every prompt family deterministically.
// Ranking prompts prefer the suggestion whose text carries the larger
// "quality=<digits>" tag, falling back to a hash of the prompt.
std::string scripted_response(const std::string& prompt);

// Examples with labels planted in the first `informative` of `dims` features.
std::vector<models::LabeledExample> planted_dataset(size_t n, size_t dims,
                                                    size_t informative, double noise,
                                                    uint64_t seed);

}  // namespace muse::testing
