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

#include "muse/kgraph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "muse/csv.hpp"
#include "muse/error.hpp"
#include "muse/matcher.hpp"
#include "muse/text.hpp"

namespace muse::kg {

YearSeries::YearSeries(const std::map<int, int64_t>& by_year) {
  int64_t running = 0;
  for (const auto& [year, count] : by_year) {
    if (count < 0) throw ValidationError("negative count in year series");
    if (count == 0) continue;
    running += count;
    years_.push_back(year);
    counts_.push_back(count);
    cumulative_.push_back(running);
  }
}

int64_t YearSeries::in_year(int year) const {
  auto it = std::lower_bound(years_.begin(), years_.end(), year);
  if (it == years_.end() || *it != year) return 0;
  return counts_[it - years_.begin()];
}

int64_t YearSeries::until(int year) const {
  auto it = std::upper_bound(years_.begin(), years_.end(), year);
  if (it == years_.begin()) return 0;
  return cumulative_[(it - years_.begin()) - 1];
}

std::optional<int> YearSeries::first_year() const {
  if (years_.empty()) return std::nullopt;
  return years_.front();
}

std::map<int, int64_t> YearSeries::to_map() const {
  std::map<int, int64_t> out;
  for (size_t i = 0; i < years_.size(); ++i) out[years_[i]] = counts_[i];
  return out;
}

namespace {

struct SeriesAccumulator {
  std::map<int, int64_t> papers;
  std::map<int, int64_t> citations;

  void add(const corpus::PaperRecord& r) {
    papers[r.year] += 1;
    for (const auto& [y, c] : r.citations_by_year) citations[y] += c;
  }
  SeriesStats finish() const { return {YearSeries(papers), YearSeries(citations)}; }
};

}  // namespace

KnowledgeGraph KnowledgeGraph::build(const corpus::Corpus& corpus,
                                     const concepts::ConceptLexicon& lexicon) {
  if (lexicon.concepts.empty()) {
    throw ValidationError("cannot build a graph from an empty lexicon");
  }
  std::vector<std::string> vertices(lexicon.concepts.begin(),
                                    lexicon.concepts.end());
  std::map<std::string, VertexId> ids;
  for (VertexId i = 0; i < vertices.size(); ++i) ids[vertices[i]] = i;

  ConceptMatcher matcher(lexicon.concepts);
  std::vector<SeriesAccumulator> vacc(vertices.size());
  std::map<std::pair<VertexId, VertexId>, SeriesAccumulator> eacc;

  for (const auto& record : corpus.records()) {
    auto found = matcher.longest_matches(record.document_text());
    std::vector<VertexId> vs;
    vs.reserve(found.size());
    for (const auto& c : found) vs.push_back(ids.at(c));
    std::sort(vs.begin(), vs.end());
    for (size_t i = 0; i < vs.size(); ++i) {
      vacc[vs[i]].add(record);
      for (size_t j = i + 1; j < vs.size(); ++j) eacc[{vs[i], vs[j]}].add(record);
    }
  }

  std::vector<VertexStats> vstats;
  vstats.reserve(vacc.size());
  for (const auto& a : vacc) vstats.push_back(a.finish());
  std::vector<std::pair<VertexId, VertexId>> ends;
  std::vector<EdgeStats> estats;
  for (const auto& [key, a] : eacc) {
    ends.push_back(key);
    estats.push_back(a.finish());
  }
  return from_parts(std::move(vertices), std::move(vstats), std::move(ends),
                    std::move(estats), corpus.cutoff_year());
}

KnowledgeGraph KnowledgeGraph::from_parts(
    std::vector<std::string> vertices, std::vector<VertexStats> vertex_stats,
    std::vector<std::pair<VertexId, VertexId>> edge_ends,
    std::vector<EdgeStats> edge_stats, int cutoff_year) {
  if (vertices.size() != vertex_stats.size() ||
      edge_ends.size() != edge_stats.size()) {
    throw ValidationError("graph parts have mismatched sizes");
  }
  for (size_t i = 1; i < vertices.size(); ++i) {
    if (!(vertices[i - 1] < vertices[i])) {
      throw ValidationError("graph vertices must be sorted and unique");
    }
  }
  KnowledgeGraph g;
  g.concepts_ = std::move(vertices);
  g.vertex_stats_ = std::move(vertex_stats);
  g.edge_ends_ = std::move(edge_ends);
  g.edge_stats_ = std::move(edge_stats);
  g.cutoff_year_ = cutoff_year;
  g.index();
  return g;
}

void KnowledgeGraph::index() {
  adjacency_.assign(concepts_.size(), {});
  edge_index_.clear();
  for (uint32_t e = 0; e < edge_ends_.size(); ++e) {
    auto [a, b] = edge_ends_[e];
    if (a == b) throw ValidationError("self-loop edge on " + concepts_.at(a));
    if (a >= concepts_.size() || b >= concepts_.size()) {
      throw ValidationError("edge references unknown vertex");
    }
    if (a > b) std::swap(a, b);
    edge_ends_[e] = {a, b};
    if (!edge_index_.emplace(std::make_pair(a, b), e).second) {
      throw ValidationError("duplicate edge " + concepts_[a] + " -- " + concepts_[b]);
    }
    auto since = edge_stats_[e].papers.first_year();
    if (!since) throw ValidationError("edge without papers");
    adjacency_[a].push_back({b, *since, e});
    adjacency_[b].push_back({a, *since, e});
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end(), [](const Neighbor& x, const Neighbor& y) {
      return x.since != y.since ? x.since < y.since : x.id < y.id;
    });
  }
}

std::optional<VertexId> KnowledgeGraph::find(const std::string& name) const {
  auto it = std::lower_bound(concepts_.begin(), concepts_.end(), name);
  if (it == concepts_.end() || *it != name) return std::nullopt;
  return static_cast<VertexId>(it - concepts_.begin());
}

VertexId KnowledgeGraph::id(const std::string& name) const {
  auto v = find(name);
  if (!v) throw NotFoundError("name not in graph: " + name);
  return *v;
}

const EdgeStats* KnowledgeGraph::edge(VertexId a, VertexId b) const {
  if (a > b) std::swap(a, b);
  auto it = edge_index_.find({a, b});
  return it == edge_index_.end() ? nullptr : &edge_stats_[it->second];
}

GraphSnapshot KnowledgeGraph::snapshot(int year) const {
  return GraphSnapshot(*this, year);
}

bool KnowledgeGraph::operator==(const KnowledgeGraph& o) const {
  return cutoff_year_ == o.cutoff_year_ && concepts_ == o.concepts_ &&
         vertex_stats_ == o.vertex_stats_ && edge_ends_ == o.edge_ends_ &&
         edge_stats_ == o.edge_stats_;
}

GraphSnapshot::GraphSnapshot(const KnowledgeGraph& graph, int slice_year)
    : graph_(&graph), year_(slice_year), cache_(std::make_shared<Cache>()) {
  if (slice_year > graph.cutoff_year()) {
    throw ValidationError("snapshot year " + std::to_string(slice_year) +
                          " is after the graph cutoff " +
                          std::to_string(graph.cutoff_year()));
  }
}

size_t GraphSnapshot::degree(VertexId v) const {
  auto adj = graph_->adjacency(v);
  auto it = std::upper_bound(adj.begin(), adj.end(), year_,
                             [](int y, const KnowledgeGraph::Neighbor& n) {
                               return y < n.since;
                             });
  return static_cast<size_t>(it - adj.begin());
}

size_t GraphSnapshot::degree(const std::string& name) const {
  return degree(graph_->id(name));
}

std::vector<VertexId> GraphSnapshot::neighbors(VertexId v) const {
  auto adj = graph_->adjacency(v);
  size_t d = degree(v);
  std::vector<VertexId> out;
  out.reserve(d);
  for (size_t i = 0; i < d; ++i) out.push_back(adj[i].id);
  std::sort(out.begin(), out.end());
  return out;
}

std::set<std::string> GraphSnapshot::neighbors(const std::string& name) const {
  std::set<std::string> out;
  for (VertexId n : neighbors(graph_->id(name))) {
    out.insert(graph_->concept_name(n));
  }
  return out;
}

bool GraphSnapshot::has_edge(VertexId a, VertexId b) const {
  const EdgeStats* e = graph_->edge(a, b);
  return e != nullptr && e->papers.until(year_) > 0;
}

std::vector<double> GraphSnapshot::pagerank(const PageRankOptions& options) const {
  const size_t n = graph_->vertex_count();
  if (n == 0) throw ValidationError("pagerank of an empty graph");
  std::vector<size_t> deg(n);
  for (VertexId v = 0; v < n; ++v) deg[v] = degree(v);

  const double nd = static_cast<double>(n);
  std::vector<double> rank(n, 1.0 / nd), next(n);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    double dangling = 0.0;
    for (VertexId v = 0; v < n; ++v) {
      if (deg[v] == 0) dangling += rank[v];
    }
    const double base = (1.0 - options.damping) / nd + options.damping * dangling / nd;
    std::fill(next.begin(), next.end(), base);
    for (VertexId v = 0; v < n; ++v) {
      if (deg[v] == 0) continue;
      const double share = options.damping * rank[v] / static_cast<double>(deg[v]);
      auto adj = graph_->adjacency(v);
      for (size_t i = 0; i < deg[v]; ++i) next[adj[i].id] += share;
    }
    double change = 0.0;
    for (size_t i = 0; i < n; ++i) change += std::abs(next[i] - rank[i]);
    rank.swap(next);
    if (change < options.tolerance) break;
  }
  const double sum = std::accumulate(rank.begin(), rank.end(), 0.0);
  for (auto& r : rank) r /= sum;
  return rank;
}

const std::vector<double>& GraphSnapshot::pagerank() const {
  std::call_once(cache_->once, [this] { cache_->pagerank = pagerank(PageRankOptions{}); });
  return cache_->pagerank;
}

std::map<std::string, double> GraphSnapshot::pagerank_by_concept() const {
  const auto& pr = pagerank();
  std::map<std::string, double> out;
  for (VertexId v = 0; v < pr.size(); ++v) out[graph_->concept_name(v)] = pr[v];
  return out;
}

int64_t new_neighbors(const KnowledgeGraph& g, VertexId v, int y1, int y2) {
  if (!(y1 < y2) || y2 > g.cutoff_year()) {
    throw ValidationError("new_neighbors needs y1 < y2 <= cutoff");
  }
  int64_t count = 0;
  for (const auto& n : g.adjacency(v)) {
    if (n.since > y1 && n.since <= y2) ++count;
  }
  return count;
}

int64_t new_neighbors(const KnowledgeGraph& g, const std::string& name,
                      int y1, int y2) {
  return new_neighbors(g, g.id(name), y1, y2);
}

namespace {

std::string format_series(const YearSeries& s) {
  std::string out;
  for (const auto& [y, c] : s.to_map()) {
    if (!out.empty()) out += ',';
    out += std::to_string(y) + ':' + std::to_string(c);
  }
  return out.empty() ? "-" : out;
}

YearSeries parse_series(const std::string& field) {
  std::map<int, int64_t> m;
  if (field == "-") return YearSeries(m);
  std::istringstream in(field);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw FormatError("bad series item: " + item);
    try {
      m[std::stoi(item.substr(0, colon))] += std::stoll(item.substr(colon + 1));
    } catch (const std::exception&) {
      throw FormatError("bad series item: " + item);
    }
  }
  return YearSeries(m);
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

}  // namespace

std::string serialize_graph(const KnowledgeGraph& g) {
  std::ostringstream out;
  out << "muse-graph 1\n";
  out << "cutoff " << g.cutoff_year() << '\n';
  out << "vertices " << g.vertex_count() << '\n';
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const auto& s = g.vertex_stats(v);
    out << g.concept_name(v) << '\t' << format_series(s.papers) << '\t'
        << format_series(s.citations) << '\n';
  }
  out << "edges " << g.edge_count() << '\n';
  for (uint32_t e = 0; e < g.edge_count(); ++e) {
    auto [a, b] = g.edge_ends(e);
    const auto& s = g.edge_stats(e);
    out << a << '\t' << b << '\t' << format_series(s.papers) << '\t'
        << format_series(s.citations) << '\n';
  }
  return out.str();
}

KnowledgeGraph parse_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto expect = [&](const std::string& tag) -> long long {
    if (!std::getline(in, line) || line.rfind(tag + " ", 0) != 0) {
      throw FormatError("graph file: expected '" + tag + "'");
    }
    return std::stoll(line.substr(tag.size() + 1));
  };
  if (!std::getline(in, line) || line != "muse-graph 1") {
    throw FormatError("not a muse-graph v1 file");
  }
  int cutoff = static_cast<int>(expect("cutoff"));
  auto nv = static_cast<size_t>(expect("vertices"));
  std::vector<std::string> vertices;
  std::vector<VertexStats> vstats;
  for (size_t i = 0; i < nv; ++i) {
    if (!std::getline(in, line)) throw FormatError("graph file truncated");
    auto f = split_tabs(line);
    if (f.size() != 3) throw FormatError("bad vertex line: " + line);
    vertices.push_back(f[0]);
    vstats.push_back({parse_series(f[1]), parse_series(f[2])});
  }
  auto ne = static_cast<size_t>(expect("edges"));
  std::vector<std::pair<VertexId, VertexId>> ends;
  std::vector<EdgeStats> estats;
  for (size_t i = 0; i < ne; ++i) {
    if (!std::getline(in, line)) throw FormatError("graph file truncated");
    auto f = split_tabs(line);
    if (f.size() != 4) throw FormatError("bad edge line: " + line);
    ends.emplace_back(static_cast<VertexId>(std::stoul(f[0])),
                      static_cast<VertexId>(std::stoul(f[1])));
    estats.push_back({parse_series(f[2]), parse_series(f[3])});
  }
  return KnowledgeGraph::from_parts(std::move(vertices), std::move(vstats),
                                    std::move(ends), std::move(estats), cutoff);
}

void write_graph(const KnowledgeGraph& g, const std::string& path) {
  write_file_atomic(path, serialize_graph(g));
}

KnowledgeGraph read_graph(const std::string& path) {
  return parse_graph(read_file(path));
}

std::string node_stats_csv(const GraphSnapshot& s) {
  csv::Table t;
  t.header = {"concept", "degree", "pagerank", "papers", "citations"};
  const auto& pr = s.pagerank();
  const auto& g = s.graph();
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const auto& st = g.vertex_stats(v);
    t.rows.push_back({g.concept_name(v), std::to_string(s.degree(v)),
                      csv::format_double(pr[v]),
                      std::to_string(st.papers.until(s.year())),
                      std::to_string(st.citations.until(s.year()))});
  }
  return csv::write(t);
}

}  // namespace muse::kg
