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

#include <doctest.h>

#include <numeric>

#include "muse/analysis.hpp"
#include "muse/concepts.hpp"
#include "muse/csv.hpp"
#include "muse/error.hpp"
#include "muse/features.hpp"
#include "muse/kgraph.hpp"
#include "synth.hpp"

using namespace muse;
namespace mt = muse::testing;

namespace {

// k000-k001 in 2018, k001-k002 in 2020, k000..k002 together in 2021, k003 alone.
kg::KnowledgeGraph small_graph() {
  std::vector<mt::RawPaper> papers = {
      {"p1", 2018, {0, 1}, {{2019, 2}, {2020, 1}}},
      {"p2", 2020, {1, 2}, {{2021, 4}}},
      {"p3", 2021, {0, 1, 2}, {}},
      {"p4", 2019, {3}, {{2019, 1}}},
  };
  concepts::ConceptLexicon lex;
  for (int i = 0; i < 4; ++i) lex.concepts.insert(mt::fixture_concept_name(i));
  return kg::KnowledgeGraph::build(mt::raw_to_corpus(papers, 2022), lex);
}

}  // namespace

TEST_CASE("YearSeries arithmetic") {
  kg::YearSeries s(std::map<int, int64_t>{{2010, 2}, {2012, 3}, {2015, 1}});
  CHECK(s.until(2009) == 0);
  CHECK(s.until(2011) == 2);
  CHECK(s.until(2030) == 6);
  CHECK(s.in_year(2012) == 3);
  CHECK(s.in_year(2013) == 0);
  CHECK(s.gained(2010, 2012) == 3);
  CHECK(s.over(2010, 2012) == 5);
  CHECK(s.first_year() == 2010);
  CHECK(s.to_map().size() == 3);
}

TEST_CASE("graph slices by year") {
  auto g = small_graph();
  CHECK(g.vertex_count() == 4);
  CHECK(g.edge_count() == 3);
  const auto k0 = mt::fixture_concept_name(0), k1 = mt::fixture_concept_name(1),
             k2 = mt::fixture_concept_name(2), k3 = mt::fixture_concept_name(3);
  kg::GraphSnapshot s2019(g, 2019), s2022(g, 2022);
  CHECK(s2019.degree(k1) == 1);
  CHECK(s2022.degree(k1) == 2);
  CHECK(s2022.degree(k3) == 0);
  CHECK(s2022.neighbors(k0) == std::set<std::string>{k1, k2});
  CHECK_FALSE(s2019.has_edge(g.id(k0), g.id(k2)));
  CHECK(kg::new_neighbors(g, k0, 2019, 2021) == 1);
  CHECK(kg::new_neighbors(g, k1, 2017, 2022) == 2);
  CHECK_THROWS_AS(kg::new_neighbors(g, k1, 2021, 2021), ValidationError);
  CHECK_THROWS_AS(kg::GraphSnapshot(g, 2023), ValidationError);
  CHECK_THROWS_AS(g.id("missing"), NotFoundError);
  const auto* e = g.edge(g.id(k1), g.id(k0));
  REQUIRE(e != nullptr);
  CHECK(e->papers.until(2022) == 2);
  CHECK(e->citations.until(2022) == 3);
  CHECK(g.vertex_stats(g.id(k1)).citations.until(2022) == 7);
}

TEST_CASE("pagerank is a distribution and symmetric on a star") {
  std::vector<mt::RawPaper> papers;
  for (int leaf = 1; leaf <= 5; ++leaf) papers.push_back({"s" + std::to_string(leaf), 2020, {0, leaf}, {}});
  concepts::ConceptLexicon lex;
  for (int i = 0; i < 7; ++i) lex.concepts.insert(mt::fixture_concept_name(i));
  auto g = kg::KnowledgeGraph::build(mt::raw_to_corpus(papers, 2020), lex);
  kg::GraphSnapshot s(g, 2020);
  const auto& pr = s.pagerank();
  CHECK(std::accumulate(pr.begin(), pr.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pr[0] > pr[1]);
  for (int leaf = 2; leaf <= 5; ++leaf) CHECK(pr[leaf] == doctest::Approx(pr[1]).epsilon(1e-12));
  CHECK(pr[6] < pr[1]);  // isolated vertex only gets teleport mass
}

TEST_CASE("graph serialization and node CSV") {
  auto g = small_graph();
  CHECK(kg::parse_graph(kg::serialize_graph(g)) == g);
  CHECK_THROWS_AS(kg::parse_graph("bogus\n"), FormatError);
  auto t = csv::parse(kg::node_stats_csv(kg::GraphSnapshot(g, 2022)));
  CHECK(t.rows.size() == 4);
}

TEST_CASE("feature catalog shape") {
  const auto& cat = features::FeatureCatalog::standard();
  CHECK(cat.size() == 144);
  auto ids = cat.ids();
  CHECK(std::set<std::string>(ids.begin(), ids.end()).size() == 144);
  const auto& top = features::top25_ids();
  REQUIRE(top.size() == 25);
  CHECK(top.front() == "dist_neighborhood");
  CHECK(top[1] == "new_nbrs_A@-1:0");
  CHECK(top.back() == "cit_A@-1");
  for (const auto& id : top) CHECK_NOTHROW(cat.index_of(id));
  CHECK_THROWS_AS(cat.index_of("nope"), FormatError);
  size_t a = 0, b = 0;
  for (const auto& e : cat.entries) {
    a += e.side == features::Side::kA;
    b += e.side == features::Side::kB;
  }
  CHECK(a == 44);
  CHECK(b == 44);
}

TEST_CASE("extractor values and CSV round trip") {
  auto g = small_graph();
  features::FeatureExtractor ex(g, 2022);
  const auto k0 = mt::fixture_concept_name(0), k1 = mt::fixture_concept_name(1),
             k3 = mt::fixture_concept_name(3);
  CHECK_THROWS_AS(ex.compute(k0, k0, {}), ValidationError);
  CHECK_THROWS_AS(features::FeatureExtractor(g, 2023), ValidationError);
  auto fv = ex.compute(k0, k1, {0.25, 0.5, 0.75});
  const auto& cat = ex.catalog();
  CHECK(fv.values[cat.index_of("papers_both@0")] == 2);
  CHECK(fv.values[cat.index_of("papers_either@0")] == 3);
  CHECK(fv.values[cat.index_of("edge_exists@0")] == 1);
  CHECK(fv.values[cat.index_of("deg_A@0")] == 2);
  CHECK(fv.values[cat.index_of("impact")] == 0.75);
  CHECK(fv.values[cat.index_of("dist_neighborhood")] == 0.5);
  CHECK(fv.values[cat.index_of("rank_deg_A@0")] == doctest::Approx(0.25));
  auto other = ex.compute(k3, k1, {});
  CHECK(other.values[cat.index_of("edge_exists@0")] == 0);
  CHECK(other.values[cat.index_of("simpson@0")] == 0);
  auto rows = std::vector<features::FeatureVector>{fv, other};
  CHECK(features::parse_feature_matrix_csv(features::feature_matrix_csv(cat, rows), cat) == rows);
  CHECK(fv.project(cat, features::top25_ids()).size() == 25);
}

TEST_CASE("zscore and binning") {
  CHECK_THROWS_AS(analysis::zscore({1.0}), ValidationError);
  CHECK_THROWS_AS(analysis::zscore({2.0, 2.0}), ValidationError);
  auto z = analysis::zscore({1, 2, 3});
  CHECK(z[0] == doctest::Approx(-std::sqrt(1.5)));
  std::vector<double> f(7), y(7);
  std::iota(f.begin(), f.end(), 0.0);
  std::iota(y.begin(), y.end(), 10.0);
  auto bins = analysis::bin_aggregate(f, y, 3);
  REQUIRE(bins.size() == 3);
  CHECK(bins[0].count == 3);
  CHECK(bins[1].count == 2);
  CHECK(bins[0].mean_interest == doctest::Approx(11.0));
  CHECK(bins[2].mean_feature == doctest::Approx(5.5));
  CHECK(bins[2].std_interest == doctest::Approx(0.5));
}

TEST_CASE("top-impact filter keeps ties") {
  auto keep = analysis::filter_top_impact({1, 5, 3, 5, 2, 4, 0, 6}, 0.25);
  CHECK(keep == std::vector<size_t>{1, 3, 7});
  CHECK(analysis::filter_top_impact({1, 2, 3, 4}, 0.5) == std::vector<size_t>{2, 3});
}

TEST_CASE("interest curves skip constant subsets") {
  std::vector<double> impact(100), interest(100);
  std::vector<std::vector<double>> cols(2, std::vector<double>(100));
  for (int i = 0; i < 100; ++i) {
    impact[i] = i;
    interest[i] = 1 + i % 5;
    cols[0][i] = i * 0.1;
    cols[1][i] = 7.0;
  }
  auto curves = analysis::interest_curves({"x", "flat"}, cols, interest, impact, 10);
  REQUIRE(curves.size() == 3);
  CHECK(curves[0].subset == "all");
  CHECK(curves[2].subset == "top25");
  CHECK(curves[2].bins.size() == 10);
  CHECK(csv::parse(analysis::interest_curves_csv(curves)).rows.size() == 30);
}
