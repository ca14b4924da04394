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

#include <string>
#include <unordered_set>

#include "muse/error.hpp"
#include "muse/features.hpp"

namespace muse::features {
namespace {

std::string year_label(int offset) {
  return offset == 0 ? "t" : "t" + std::to_string(offset);
}

// "@-1", "@-2:0", "@-3..0"
std::string at(int offset) { return "@" + std::to_string(offset); }
std::string window(int from, int to) {
  return "@" + std::to_string(from) + ":" + std::to_string(to);
}
std::string span(int first, int last) {
  return "@" + std::to_string(first) + ".." + std::to_string(last);
}

constexpr int kSlices[] = {0, -1, -2, -3};
constexpr int kAnnual[] = {0, -1, -2, -3, -4};
constexpr std::pair<int, int> kWindows[] = {{-1, 0}, {-2, 0}, {-3, 0}};

void add_concept_family(std::vector<FeatureSpec>& out, Side side) {
  const std::string x = side == Side::kA ? "A" : "B";
  const std::string c = side == Side::kA ? "c_A" : "c_B";
  for (int t : kSlices) {
    out.push_back({"deg_" + x + at(t),
                   "Number of neighbours for " + c + " until the year " + year_label(t),
                   Kind::kDegree, side, t, t});
  }
  for (int t : kSlices) {
    out.push_back({"pr_" + x + at(t),
                   "PageRank score for " + c + " until the year " + year_label(t),
                   Kind::kPageRank, side, t, t});
  }
  for (int t : kSlices) {
    out.push_back({"papers_" + x + at(t),
                   "Number of papers mentioning " + c + " until the year " + year_label(t),
                   Kind::kPapers, side, t, t});
  }
  for (int t : kSlices) {
    out.push_back({"cit_" + x + at(t),
                   "Total citations for " + c +
                       " from its first publication until the year " + year_label(t),
                   Kind::kCitations, side, t, t});
  }
  for (int t : kAnnual) {
    out.push_back({"annual_cit_" + x + at(t),
                   "Annual citations for " + c + " during the year " + year_label(t),
                   Kind::kAnnualCitations, side, t, t});
  }
  for (auto [f, t] : kWindows) {
    out.push_back({"new_nbrs_" + x + window(f, t),
                   "Number of new neighbors gained by " + c + " from the years " +
                       year_label(f) + " to " + year_label(t),
                   Kind::kNewNeighbors, side, f, t});
  }
  for (auto [f, t] : kWindows) {
    out.push_back({"new_papers_" + x + window(f, t),
                   "Number of new papers mentioning " + c + " from the years " +
                       year_label(f) + " to " + year_label(t),
                   Kind::kNewPapers, side, f, t});
  }
  for (auto [f, t] : kWindows) {
    out.push_back({"new_cit_" + x + window(f, t),
                   "Number of new citations for " + c + " from the years " +
                       year_label(f) + " to " + year_label(t),
                   Kind::kNewCitations, side, f, t});
  }
  out.push_back({"cit_" + x + span(-3, 0),
                 "Total citations for " + c + " from the years t-3 to t",
                 Kind::kCitationWindow, side, -3, 0});
  out.push_back({"cit_" + x + span(-4, -1),
                 "Total citations for " + c + " from the years t-4 to t-1",
                 Kind::kCitationWindow, side, -4, -1});
  for (auto [f, t] : kWindows) {
    out.push_back({"rank_new_nbrs_" + x + window(f, t),
                   "Rank of the number of new neighbors gained by " + c +
                       " from the years " + year_label(f) + " to " + year_label(t),
                   Kind::kRankNewNeighbors, side, f, t});
  }
  for (auto [f, t] : kWindows) {
    out.push_back({"rank_new_papers_" + x + window(f, t),
                   "Rank of the number of new papers mentioning " + c +
                       " from the years " + year_label(f) + " to " + year_label(t),
                   Kind::kRankNewPapers, side, f, t});
  }
  for (auto [f, t] : kWindows) {
    out.push_back({"rank_new_cit_" + x + window(f, t),
                   "Rank of the number of new citations for " + c +
                       " from the years " + year_label(f) + " to " + year_label(t),
                   Kind::kRankNewCitations, side, f, t});
  }
  out.push_back({"rank_deg_" + x + at(0),
                 "Rank of the number of neighbours for " + c + " until the year t",
                 Kind::kRankDegree, side, 0, 0});
  out.push_back({"rank_papers_" + x + at(0),
                 "Rank of the number of papers mentioning " + c + " until the year t",
                 Kind::kRankPapers, side, 0, 0});
  out.push_back({"rank_cit_" + x + at(0),
                 "Rank of the total citations for " + c + " until the year t",
                 Kind::kRankCitations, side, 0, 0});
}

void add_pair_family(std::vector<FeatureSpec>& out) {
  struct Slice {
    const char* id;
    const char* text;
    Kind kind;
  };
  const Slice slices[] = {
      {"papers_either", "Number of papers mentioning either concept c_A or c_B",
       Kind::kPapersEither},
      {"papers_both", "Number of papers mentioning both c_A and c_B",
       Kind::kPapersBoth},
      {"edge_cit", "Total citations of papers mentioning both c_A and c_B",
       Kind::kEdgeCitations},
      {"simpson", "Simpson similarity of the neighbourhoods of c_A and c_B",
       Kind::kSimpson},
      {"dice", "Sorensen-Dice coefficient of the neighbourhoods of c_A and c_B",
       Kind::kDice},
      {"jaccard", "Jaccard index of the neighbourhoods of c_A and c_B",
       Kind::kJaccard},
      {"common_nbrs", "Number of common neighbours of c_A and c_B",
       Kind::kCommonNeighbors},
      {"pref_attach", "Product of the neighbour counts of c_A and c_B",
       Kind::kPreferentialAttachment},
      {"adamic_adar", "Adamic-Adar index of c_A and c_B", Kind::kAdamicAdar},
      {"resource_alloc", "Resource allocation index of c_A and c_B",
       Kind::kResourceAllocation},
  };
  for (const auto& s : slices) {
    for (int t : kSlices) {
      out.push_back({std::string(s.id) + at(t),
                     std::string(s.text) + " until the year " + year_label(t),
                     s.kind, Side::kPair, t, t});
    }
  }
  for (auto [f, t] : kWindows) {
    out.push_back({"edge_new_papers" + window(f, t),
                   "Number of new papers mentioning both c_A and c_B from the years " +
                       year_label(f) + " to " + year_label(t),
                   Kind::kEdgeNewPapers, Side::kPair, f, t});
  }
  for (auto [f, t] : kWindows) {
    out.push_back({"edge_new_cit" + window(f, t),
                   "Number of new citations of papers mentioning both c_A and c_B "
                   "from the years " + year_label(f) + " to " + year_label(t),
                   Kind::kEdgeNewCitations, Side::kPair, f, t});
  }
  out.push_back({"deg_min@0", "Smaller neighbour count of c_A and c_B until the year t",
                 Kind::kDegreeMin, Side::kPair, 0, 0});
  out.push_back({"deg_max@0", "Larger neighbour count of c_A and c_B until the year t",
                 Kind::kDegreeMax, Side::kPair, 0, 0});
  out.push_back({"pr_min@0", "Smaller PageRank score of c_A and c_B until the year t",
                 Kind::kPageRankMin, Side::kPair, 0, 0});
  out.push_back({"pr_max@0", "Larger PageRank score of c_A and c_B until the year t",
                 Kind::kPageRankMax, Side::kPair, 0, 0});
  for (int t : {0, -1, -2}) {
    out.push_back({"edge_exists" + at(t),
                   "Whether c_A and c_B co-occur in a paper until the year " +
                       year_label(t),
                   Kind::kEdgeExists, Side::kPair, t, t});
  }
}

FeatureCatalog make_standard() {
  FeatureCatalog c;
  c.version = "muse-features/1";
  add_concept_family(c.entries, Side::kA);
  add_concept_family(c.entries, Side::kB);
  add_pair_family(c.entries);
  c.entries.push_back({"impact", "Predicted future impact of the concept pair",
                       Kind::kImpact, Side::kPair, 0, 0});
  c.entries.push_back({"dist_concepts",
                       "Semantic distance between Researchers A and B (using their "
                       "concept lists)",
                       Kind::kDistanceConcepts, Side::kPair, 0, 0});
  c.entries.push_back({"dist_neighborhood",
                       "Semantic distance between Researchers A and B (using all "
                       "neighboring concepts and all concepts from the subgraphs)",
                       Kind::kDistanceNeighborhood, Side::kPair, 0, 0});
  std::unordered_set<std::string> seen;
  for (const auto& e : c.entries) {
    if (!seen.insert(e.id).second) throw ConsistencyError("duplicate feature id " + e.id);
  }
  if (c.entries.size() != 144) throw ConsistencyError("feature catalog size");
  return c;
}

}  // namespace

size_t FeatureCatalog::index_of(const std::string& id) const {
  for (size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].id == id) return i;
  }
  throw FormatError("unknown feature id: " + id);
}

std::vector<std::string> FeatureCatalog::ids() const {
  std::vector<std::string> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.id);
  return out;
}

const FeatureCatalog& FeatureCatalog::standard() {
  static const FeatureCatalog catalog = make_standard();
  return catalog;
}

const std::vector<std::string>& top25_ids() {
  static const std::vector<std::string> ids = {
      "dist_neighborhood",
      "new_nbrs_A@-1:0",
      "rank_new_cit_A@-1:0",
      "rank_new_papers_A@-2:0",
      "papers_either@-1",
      "annual_cit_A@-3",
      "cit_A@-2",
      "pr_B@0",
      "deg_A@-1",
      "new_papers_A@-2:0",
      "rank_new_nbrs_A@-2:0",
      "cit_A@-3..0",
      "pr_B@-1",
      "rank_new_nbrs_A@-1:0",
      "annual_cit_A@-1",
      "cit_A@-4..-1",
      "deg_A@0",
      "deg_A@-2",
      "new_nbrs_B@-1:0",
      "pr_A@0",
      "cit_A@0",
      "pr_A@-1",
      "papers_either@0",
      "deg_B@-2",
      "cit_A@-1",
  };
  return ids;
}

}  // namespace muse::features
