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
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "muse/concepts.hpp"
#include "muse/corpus.hpp"

namespace muse::kg {

using VertexId = uint32_t;

// Sparse per-year counts with a running total, so "until year Y" and
// "between years" queries are a binary search.
class YearSeries {
 public:
  YearSeries() = default;
  explicit YearSeries(const std::map<int, int64_t>& by_year);

  int64_t in_year(int year) const;
  // Sum of all years <= year.
  int64_t until(int year) const;
  // until(to) - until(from): contributions in (from, to].
  int64_t gained(int from, int to) const { return until(to) - until(from); }
  // Sum over first..last inclusive.
  int64_t over(int first, int last) const { return until(last) - until(first - 1); }
  int64_t total() const { return cumulative_.empty() ? 0 : cumulative_.back(); }
  // Earliest year with a non-zero count, nullopt when empty.
  std::optional<int> first_year() const;
  bool empty() const { return years_.empty(); }

  std::map<int, int64_t> to_map() const;
  bool operator==(const YearSeries&) const = default;

 private:
  std::vector<int> years_;
  std::vector<int64_t> counts_;
  std::vector<int64_t> cumulative_;
};

// Contributions of the papers mentioning a concept (or both concepts of an
// edge): papers counted by publication year, their citations by citing year.
struct SeriesStats {
  YearSeries papers;
  YearSeries citations;
  bool operator==(const SeriesStats&) const = default;
};
using VertexStats = SeriesStats;
using EdgeStats = SeriesStats;

class GraphSnapshot;

class KnowledgeGraph {
 public:
  struct Neighbor {
    VertexId id;
    int since;       // year of the first co-occurring paper
    uint32_t edge;   // index into edges
  };

  KnowledgeGraph() = default;

  // Each paper links every pair of distinct lexicon concepts found in its
  // title+abstract (leftmost-longest matching). The paper adds 1 to
  // papers[year] and its citation series to every such vertex and edge.
  static KnowledgeGraph build(const corpus::Corpus& corpus,
                              const concepts::ConceptLexicon& lexicon);

  // Assembles a graph from parts (used by the file reader and tests).
  // Vertices must be sorted and unique; edges reference vertex indices.
  static KnowledgeGraph from_parts(
      std::vector<std::string> vertices, std::vector<VertexStats> vertex_stats,
      std::vector<std::pair<VertexId, VertexId>> edge_ends,
      std::vector<EdgeStats> edge_stats, int cutoff_year);

  size_t vertex_count() const { return concepts_.size(); }
  size_t edge_count() const { return edge_ends_.size(); }
  int cutoff_year() const { return cutoff_year_; }

  const std::string& concept_name(VertexId v) const { return concepts_.at(v); }
  const std::vector<std::string>& concepts() const { return concepts_; }
  std::optional<VertexId> find(const std::string& name) const;
  // NotFoundError for unknown concepts.
  VertexId id(const std::string& name) const;

  const VertexStats& vertex_stats(VertexId v) const { return vertex_stats_.at(v); }
  // Order of the endpoints does not matter; nullptr when never linked.
  const EdgeStats* edge(VertexId a, VertexId b) const;
  std::pair<VertexId, VertexId> edge_ends(uint32_t e) const { return edge_ends_.at(e); }
  const EdgeStats& edge_stats(uint32_t e) const { return edge_stats_.at(e); }

  // Sorted by (since, id).
  std::span<const Neighbor> adjacency(VertexId v) const { return adjacency_.at(v); }

  // ValidationError when year > cutoff_year.
  GraphSnapshot snapshot(int year) const;

  bool operator==(const KnowledgeGraph& o) const;

 private:
  void index();

  std::vector<std::string> concepts_;
  std::vector<VertexStats> vertex_stats_;
  std::vector<std::pair<VertexId, VertexId>> edge_ends_;
  std::vector<EdgeStats> edge_stats_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::map<std::pair<VertexId, VertexId>, uint32_t> edge_index_;
  int cutoff_year_ = 0;
};

struct PageRankOptions {
  double damping = 0.85;
  double tolerance = 1e-10;  // L1 change between iterations
  int max_iterations = 10000;
};

// The graph as of the end of slice_year: only edges whose first
// co-occurring paper appeared by then. Cheap to create; holds a pointer to
// the graph, which must outlive it. PageRank is computed once on demand.
class GraphSnapshot {
 public:
  GraphSnapshot(const KnowledgeGraph& graph, int slice_year);

  const KnowledgeGraph& graph() const { return *graph_; }
  int year() const { return year_; }

  size_t degree(VertexId v) const;
  size_t degree(const std::string& name) const;
  // Sorted by vertex id.
  std::vector<VertexId> neighbors(VertexId v) const;
  std::set<std::string> neighbors(const std::string& name) const;
  bool has_edge(VertexId a, VertexId b) const;

  // Power iteration on the undirected graph; dangling vertices spread their
  // mass uniformly. Scores sum to 1. Cached for the default options.
  const std::vector<double>& pagerank() const;
  std::vector<double> pagerank(const PageRankOptions& options) const;
  std::map<std::string, double> pagerank_by_concept() const;

 private:
  struct Cache {
    std::once_flag once;
    std::vector<double> pagerank;
  };
  const KnowledgeGraph* graph_;
  int year_;
  std::shared_ptr<Cache> cache_;
};

// Neighbors of c present at y2 but not at y1. Requires y1 < y2 <= cutoff.
int64_t new_neighbors(const KnowledgeGraph& g, const std::string& name,
                      int y1, int y2);
int64_t new_neighbors(const KnowledgeGraph& g, VertexId v, int y1, int y2);

// Line-based export, "muse-graph 1" version tag. Lossless.
std::string serialize_graph(const KnowledgeGraph& g);
KnowledgeGraph parse_graph(const std::string& text);
void write_graph(const KnowledgeGraph& g, const std::string& path);
KnowledgeGraph read_graph(const std::string& path);

// CSV of concept, degree, pagerank, papers, citations at the slice.
std::string node_stats_csv(const GraphSnapshot& s);

}  // namespace muse::kg
