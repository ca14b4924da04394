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
#include <tuple>
#include <vector>

#include "muse/kgraph.hpp"

namespace muse::features {

// What a catalog entry measures. Offsets are years relative to the
// extractor's reference year (0 = reference, -1 = year before, ...).
enum class Kind {
  kDegree,             // neighbors until year
  kPageRank,           // PageRank of the slice
  kPapers,             // papers mentioning the concept until year
  kCitations,          // citations accrued until year
  kAnnualCitations,    // citations received during the year
  kNewNeighbors,       // neighbors gained in (from, to]
  kNewPapers,          // papers gained in (from, to]
  kNewCitations,       // citations gained in (from, to]
  kCitationWindow,     // citations over from..to inclusive
  kRankNewNeighbors,   // dense descending rank over all vertices / N
  kRankNewPapers,
  kRankNewCitations,
  kRankDegree,
  kRankPapers,
  kRankCitations,
  kPapersEither,       // papers mentioning c_A or c_B until year
  kPapersBoth,         // papers mentioning both until year
  kEdgeCitations,      // citations of the co-occurring papers until year
  kSimpson,            // |N(A)∩N(B)| / min(|N(A)|, |N(B)|)
  kDice,               // 2|N(A)∩N(B)| / (|N(A)| + |N(B)|)
  kJaccard,            // |N(A)∩N(B)| / |N(A)∪N(B)|
  kCommonNeighbors,
  kPreferentialAttachment,  // |N(A)| * |N(B)|
  kAdamicAdar,         // sum over common z of 1 / ln |N(z)|
  kResourceAllocation, // sum over common z of 1 / |N(z)|
  kEdgeNewPapers,
  kEdgeNewCitations,
  kDegreeMin,
  kDegreeMax,
  kPageRankMin,
  kPageRankMax,
  kEdgeExists,
  kImpact,             // supplied predicted impact
  kDistanceConcepts,   // supplied researcher distance (concept sets)
  kDistanceNeighborhood,  // supplied researcher distance (neighborhoods)
};

enum class Side { kA, kB, kPair };

struct FeatureSpec {
  std::string id;
  std::string description;
  Kind kind;
  Side side;
  int from = 0;  // offset; the only offset for single-year kinds
  int to = 0;
};

struct FeatureCatalog {
  std::string version;
  std::vector<FeatureSpec> entries;

  size_t size() const { return entries.size(); }
  // FormatError for unknown ids.
  size_t index_of(const std::string& id) const;
  std::vector<std::string> ids() const;

  // The 144-entry layout "muse-features/1".
  static const FeatureCatalog& standard();
};

// The 25 interest-model inputs, in their ranked order.
const std::vector<std::string>& top25_ids();

// Deepest year offset used by the standard catalog (reference - 4).
inline constexpr int kMaxLookback = 4;

struct PairContext {
  double distance_concepts = 0.0;
  double distance_neighborhood = 0.0;
  double impact = 0.0;
};

struct FeatureVector {
  std::string c_a;  // from the evaluating researcher's concepts
  std::string c_b;  // from the collaborator's concepts
  std::vector<double> values;
  std::string catalog_version;

  // Values for the given ids, in that order.
  std::vector<double> project(const FeatureCatalog& catalog,
                              const std::vector<std::string>& ids) const;
  bool operator==(const FeatureVector&) const = default;
};

// Computes catalog features for concept pairs against one graph. Snapshots
// for reference-4 .. reference and the rank tables are built up front, so
// compute() is const and safe to call concurrently.
class FeatureExtractor {
 public:
  // ValidationError when reference_year is after the graph cutoff.
  FeatureExtractor(const kg::KnowledgeGraph& graph, int reference_year,
                   const FeatureCatalog& catalog = FeatureCatalog::standard());

  const FeatureCatalog& catalog() const { return *catalog_; }
  int reference_year() const { return reference_year_; }
  const kg::KnowledgeGraph& graph() const { return *graph_; }

  // NotFoundError for concepts missing from the graph; ValidationError for
  // c_a == c_b.
  FeatureVector compute(const std::string& c_a, const std::string& c_b,
                        const PairContext& context) const;
  // Values of the catalog entries at the given indices, in that order.
  std::vector<double> values(kg::VertexId a, kg::VertexId b,
                             const std::vector<size_t>& indices,
                             const PairContext& context) const;
  double value(const FeatureSpec& spec, kg::VertexId a, kg::VertexId b,
               const PairContext& context) const;

  const kg::GraphSnapshot& snapshot_at(int offset) const;

 private:
  struct RankTable {
    std::vector<double> distinct_desc;
  };
  double rank(Kind kind, int from, int to, double v) const;
  double vertex_metric(Kind kind, kg::VertexId v, int from, int to) const;

  const kg::KnowledgeGraph* graph_;
  const FeatureCatalog* catalog_;
  int reference_year_;
  std::vector<kg::GraphSnapshot> snapshots_;  // index = -offset
  std::map<std::tuple<Kind, int, int>, RankTable> ranks_;
};

// CSV: c_a, c_b, then one column per catalog id.
std::string feature_matrix_csv(const FeatureCatalog& catalog,
                               const std::vector<FeatureVector>& rows);
std::vector<FeatureVector> parse_feature_matrix_csv(const std::string& text,
                                                    const FeatureCatalog& catalog);

}  // namespace muse::features
