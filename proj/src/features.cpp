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

#include "muse/features.hpp"

#include <algorithm>
#include <cmath>

#include "muse/csv.hpp"
#include "muse/error.hpp"

namespace muse::features {

using kg::VertexId;

std::vector<double> FeatureVector::project(
    const FeatureCatalog& catalog, const std::vector<std::string>& ids) const {
  if (values.size() != catalog.size()) {
    throw ValidationError("feature vector does not match catalog size");
  }
  std::vector<double> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(values[catalog.index_of(id)]);
  return out;
}

namespace {

bool is_rank(Kind k) {
  switch (k) {
    case Kind::kRankNewNeighbors:
    case Kind::kRankNewPapers:
    case Kind::kRankNewCitations:
    case Kind::kRankDegree:
    case Kind::kRankPapers:
    case Kind::kRankCitations:
      return true;
    default:
      return false;
  }
}

Kind underlying(Kind k) {
  switch (k) {
    case Kind::kRankNewNeighbors: return Kind::kNewNeighbors;
    case Kind::kRankNewPapers: return Kind::kNewPapers;
    case Kind::kRankNewCitations: return Kind::kNewCitations;
    case Kind::kRankDegree: return Kind::kDegree;
    case Kind::kRankPapers: return Kind::kPapers;
    case Kind::kRankCitations: return Kind::kCitations;
    default: return k;
  }
}

// |N(a) ∩ N(b)| and the common neighbors themselves; inputs sorted.
std::vector<VertexId> intersect(const std::vector<VertexId>& a,
                                const std::vector<VertexId>& b) {
  std::vector<VertexId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

}  // namespace

FeatureExtractor::FeatureExtractor(const kg::KnowledgeGraph& graph,
                                   int reference_year,
                                   const FeatureCatalog& catalog)
    : graph_(&graph), catalog_(&catalog), reference_year_(reference_year) {
  if (reference_year > graph.cutoff_year()) {
    throw ValidationError("reference year " + std::to_string(reference_year) +
                          " is after the graph cutoff " +
                          std::to_string(graph.cutoff_year()));
  }
  for (int k = 0; k <= kMaxLookback; ++k) {
    snapshots_.emplace_back(graph, reference_year - k);
  }
  for (const auto& spec : catalog.entries) {
    if (spec.from < -kMaxLookback || spec.to < -kMaxLookback || spec.from > 0 ||
        spec.to > 0) {
      throw ValidationError("feature " + spec.id + " needs a missing snapshot year");
    }
    if (!is_rank(spec.kind)) continue;
    auto key = std::make_tuple(spec.kind, spec.from, spec.to);
    if (ranks_.count(key)) continue;
    RankTable table;
    table.distinct_desc.reserve(graph.vertex_count());
    for (VertexId v = 0; v < graph.vertex_count(); ++v) {
      table.distinct_desc.push_back(
          vertex_metric(underlying(spec.kind), v, spec.from, spec.to));
    }
    std::sort(table.distinct_desc.begin(), table.distinct_desc.end(),
              std::greater<>());
    table.distinct_desc.erase(
        std::unique(table.distinct_desc.begin(), table.distinct_desc.end()),
        table.distinct_desc.end());
    ranks_.emplace(key, std::move(table));
  }
}

const kg::GraphSnapshot& FeatureExtractor::snapshot_at(int offset) const {
  if (offset > 0 || -offset > kMaxLookback) {
    throw ValidationError("no snapshot at offset " + std::to_string(offset));
  }
  return snapshots_[static_cast<size_t>(-offset)];
}

double FeatureExtractor::vertex_metric(Kind kind, VertexId v, int from,
                                       int to) const {
  const auto& stats = graph_->vertex_stats(v);
  const int y0 = reference_year_ + from;
  const int y1 = reference_year_ + to;
  switch (kind) {
    case Kind::kDegree:
      return static_cast<double>(snapshot_at(from).degree(v));
    case Kind::kPageRank:
      return snapshot_at(from).pagerank()[v];
    case Kind::kPapers:
      return static_cast<double>(stats.papers.until(y0));
    case Kind::kCitations:
      return static_cast<double>(stats.citations.until(y0));
    case Kind::kAnnualCitations:
      return static_cast<double>(stats.citations.in_year(y0));
    case Kind::kNewNeighbors:
      return static_cast<double>(kg::new_neighbors(*graph_, v, y0, y1));
    case Kind::kNewPapers:
      return static_cast<double>(stats.papers.gained(y0, y1));
    case Kind::kNewCitations:
      return static_cast<double>(stats.citations.gained(y0, y1));
    case Kind::kCitationWindow:
      return static_cast<double>(stats.citations.over(y0, y1));
    default:
      throw ValidationError("not a per-concept feature");
  }
}

double FeatureExtractor::rank(Kind kind, int from, int to, double v) const {
  const auto& table = ranks_.at(std::make_tuple(kind, from, to)).distinct_desc;
  auto it = std::lower_bound(table.begin(), table.end(), v, std::greater<>());
  const double r = static_cast<double>(it - table.begin() + 1);
  return r / static_cast<double>(graph_->vertex_count());
}

double FeatureExtractor::value(const FeatureSpec& spec, VertexId a, VertexId b,
                               const PairContext& context) const {
  if (spec.side != Side::kPair) {
    const VertexId v = spec.side == Side::kA ? a : b;
    if (is_rank(spec.kind)) {
      return rank(spec.kind, spec.from, spec.to,
                  vertex_metric(underlying(spec.kind), v, spec.from, spec.to));
    }
    return vertex_metric(spec.kind, v, spec.from, spec.to);
  }

  const int y = reference_year_ + spec.from;
  const kg::EdgeStats* edge = graph_->edge(a, b);
  const auto& snap = snapshot_at(spec.from);
  switch (spec.kind) {
    case Kind::kImpact:
      return context.impact;
    case Kind::kDistanceConcepts:
      return context.distance_concepts;
    case Kind::kDistanceNeighborhood:
      return context.distance_neighborhood;
    case Kind::kPapersBoth:
      return edge ? static_cast<double>(edge->papers.until(y)) : 0.0;
    case Kind::kPapersEither: {
      const int64_t both = edge ? edge->papers.until(y) : 0;
      return static_cast<double>(graph_->vertex_stats(a).papers.until(y) +
                                 graph_->vertex_stats(b).papers.until(y) - both);
    }
    case Kind::kEdgeCitations:
      return edge ? static_cast<double>(edge->citations.until(y)) : 0.0;
    case Kind::kEdgeNewPapers:
      return edge ? static_cast<double>(edge->papers.gained(
                        y, reference_year_ + spec.to))
                  : 0.0;
    case Kind::kEdgeNewCitations:
      return edge ? static_cast<double>(edge->citations.gained(
                        y, reference_year_ + spec.to))
                  : 0.0;
    case Kind::kEdgeExists:
      return snap.has_edge(a, b) ? 1.0 : 0.0;
    case Kind::kDegreeMin:
      return static_cast<double>(std::min(snap.degree(a), snap.degree(b)));
    case Kind::kDegreeMax:
      return static_cast<double>(std::max(snap.degree(a), snap.degree(b)));
    case Kind::kPageRankMin:
      return std::min(snap.pagerank()[a], snap.pagerank()[b]);
    case Kind::kPageRankMax:
      return std::max(snap.pagerank()[a], snap.pagerank()[b]);
    default:
      break;
  }

  const auto na = snap.neighbors(a);
  const auto nb = snap.neighbors(b);
  const auto common = intersect(na, nb);
  const double c = static_cast<double>(common.size());
  const double da = static_cast<double>(na.size());
  const double db = static_cast<double>(nb.size());
  switch (spec.kind) {
    case Kind::kSimpson:
      return std::min(da, db) == 0 ? 0.0 : c / std::min(da, db);
    case Kind::kDice:
      return da + db == 0 ? 0.0 : 2.0 * c / (da + db);
    case Kind::kJaccard: {
      const double uni = da + db - c;
      return uni == 0 ? 0.0 : c / uni;
    }
    case Kind::kCommonNeighbors:
      return c;
    case Kind::kPreferentialAttachment:
      return da * db;
    case Kind::kAdamicAdar: {
      double s = 0.0;
      for (VertexId z : common) s += 1.0 / std::log(static_cast<double>(snap.degree(z)));
      return s;
    }
    case Kind::kResourceAllocation: {
      double s = 0.0;
      for (VertexId z : common) s += 1.0 / static_cast<double>(snap.degree(z));
      return s;
    }
    default:
      throw ValidationError("unhandled feature kind for " + spec.id);
  }
}

FeatureVector FeatureExtractor::compute(const std::string& c_a,
                                        const std::string& c_b,
                                        const PairContext& context) const {
  if (c_a == c_b) throw ValidationError("concept pair needs two distinct concepts");
  const VertexId a = graph_->id(c_a);
  const VertexId b = graph_->id(c_b);
  FeatureVector fv;
  fv.c_a = c_a;
  fv.c_b = c_b;
  fv.catalog_version = catalog_->version;
  fv.values.reserve(catalog_->size());
  for (const auto& spec : catalog_->entries) {
    fv.values.push_back(value(spec, a, b, context));
  }
  return fv;
}

std::vector<double> FeatureExtractor::values(VertexId a, VertexId b,
                                             const std::vector<size_t>& indices,
                                             const PairContext& context) const {
  std::vector<double> out;
  out.reserve(indices.size());
  for (size_t i : indices) out.push_back(value(catalog_->entries.at(i), a, b, context));
  return out;
}

std::string feature_matrix_csv(const FeatureCatalog& catalog,
                               const std::vector<FeatureVector>& rows) {
  csv::Table t;
  t.header = {"c_a", "c_b"};
  for (const auto& e : catalog.entries) t.header.push_back(e.id);
  for (const auto& fv : rows) {
    if (fv.values.size() != catalog.size()) {
      throw ValidationError("feature vector does not match catalog size");
    }
    csv::Row r = {fv.c_a, fv.c_b};
    for (double v : fv.values) r.push_back(csv::format_double(v));
    t.rows.push_back(std::move(r));
  }
  return csv::write(t);
}

std::vector<FeatureVector> parse_feature_matrix_csv(const std::string& text,
                                                    const FeatureCatalog& catalog) {
  csv::Table t = csv::parse(text);
  if (t.header.size() != catalog.size() + 2 || t.header[0] != "c_a" ||
      t.header[1] != "c_b") {
    throw FormatError("feature matrix header does not match catalog");
  }
  for (size_t i = 0; i < catalog.size(); ++i) {
    if (t.header[i + 2] != catalog.entries[i].id) {
      throw FormatError("feature matrix column " + t.header[i + 2] +
                        " out of catalog order");
    }
  }
  std::vector<FeatureVector> out;
  for (const auto& r : t.rows) {
    FeatureVector fv;
    fv.c_a = r[0];
    fv.c_b = r[1];
    fv.catalog_version = catalog.version;
    for (size_t i = 2; i < r.size(); ++i) fv.values.push_back(csv::parse_double(r[i]));
    out.push_back(std::move(fv));
  }
  return out;
}

}  // namespace muse::features
