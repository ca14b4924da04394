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

#include <random>

#include "muse/error.hpp"
#include "muse/features.hpp"
#include "muse/impact.hpp"
#include "muse/metrics.hpp"
#include "muse/network.hpp"
#include "muse/training.hpp"
#include "synth.hpp"

using namespace muse;
using namespace muse::models;
namespace mt = muse::testing;

TEST_CASE("auc basics") {
  CHECK(auc({0.9, 0.8, 0.1, 0.2}, {1, 1, 0, 0}) == 1.0);
  CHECK(auc({0.1, 0.2, 0.9, 0.8}, {1, 1, 0, 0}) == 0.0);
  CHECK(auc({0.5, 0.5}, {1, 0}) == 0.5);
  CHECK_THROWS_AS(auc({0.5, 0.4}, {1, 1}), ValidationError);
  CHECK_THROWS_AS(auc({0.5}, {1, 0}), ValidationError);
  CHECK_THROWS_AS(auc({0.5, 0.1}, {2, 0}), ValidationError);
}

TEST_CASE("roc curve endpoints") {
  auto roc = roc_curve({0.9, 0.4, 0.4, 0.1}, {1, 0, 1, 0});
  CHECK(roc.front().fpr == 0.0);
  CHECK(roc.front().tpr == 0.0);
  CHECK(roc.back().fpr == 1.0);
  CHECK(roc.back().tpr == 1.0);
  CHECK(roc.size() == 4);  // tied scores share one point
}

TEST_CASE("top-N helpers") {
  std::vector<double> s = {0.9, 0.8, 0.7, 0.6};
  std::vector<int> l = {0, 1, 1, 0};
  CHECK(topn_precision(s, l, 1) == 0.0);
  CHECK(topn_precision(s, l, 3) == doctest::Approx(2.0 / 3.0));
  CHECK(topn_hit(s, l, 1) == 0.0);
  CHECK(topn_hit(s, l, 2) == 1.0);
  CHECK_THROWS_AS(topn_precision(s, l, 5), ValidationError);
  CHECK(hypergeometric_hit_probability(4, 2, 1) == doctest::Approx(0.5));
  CHECK(hypergeometric_hit_probability(4, 2, 3) == 1.0);
  CHECK(hypergeometric_hit_probability(4, 0, 2) == 0.0);
  auto hp = topn_hit_probability(s, l, 1, 50, 3);
  CHECK(hp.random >= 0.0);
  CHECK(hp.random <= 1.0);
}

TEST_CASE("network serialization and flatten order") {
  auto net = Network::initialized(4, 3, 9);
  CHECK(net.parameter_count() == 4 * 3 + 3 + 3 + 1);
  auto p = net.flatten();
  CHECK(p[1] == net.w1(0, 1));  // row-major w1 first
  Network copy(4, 3);
  copy.mean = net.mean;
  copy.scale = net.scale;
  copy.unflatten(p);
  CHECK(copy == net);
  CHECK(Network::from_json(net.to_json()) == net);
  CHECK_THROWS(copy.unflatten({1.0}));
  const double limit = 1.0 / std::sqrt(4.0);
  for (Eigen::Index i = 0; i < net.w1.size(); ++i) CHECK(std::abs(net.w1.data()[i]) <= limit);
}

TEST_CASE("training is deterministic and learns a planted signal") {
  auto data = mt::planted_dataset(400, 25, 5, 0.3, 1);
  std::vector<std::string> ids;
  for (int i = 0; i < 25; ++i) ids.push_back("f" + std::to_string(i));
  TrainConfig cfg;
  auto m1 = train_interest_model(data, ids, "v", cfg, 5);
  auto m2 = train_interest_model(data, ids, "v", cfg, 5);
  CHECK(serialize_model(m1) == serialize_model(m2));
  std::vector<double> s;
  std::vector<int> l;
  for (const auto& e : data) {
    s.push_back(m1.predict(e.features));
    l.push_back(e.label());
  }
  CHECK(auc(s, l) > 0.9);
  auto back = parse_model(serialize_model(m1));
  CHECK(back.feature_ids == ids);
  CHECK(back.predict(data[0].features) == m1.predict(data[0].features));
  CHECK_THROWS_AS(parse_model("{\"format\":\"other\"}"), FormatError);
  CHECK_THROWS_AS(m1.predict(std::vector<double>(3, 0.0)), ValidationError);
}

TEST_CASE("training input validation") {
  std::vector<std::string> ids = {"a", "b"};
  std::vector<LabeledExample> few;
  for (int i = 0; i < 10; ++i) few.push_back(make_example("e", {0.0, 1.0}, 1 + i % 5));
  CHECK_THROWS_AS(train_interest_model(few, ids, "v", {}, 1), ValidationError);
  std::vector<LabeledExample> one_class;
  for (int i = 0; i < 60; ++i) one_class.push_back(make_example("e", {0.0 + i, 1.0}, 2));
  CHECK_THROWS_AS(train_interest_model(one_class, ids, "v", {}, 1), ValidationError);
  CHECK_THROWS_AS(make_example("e", {0.0}, 6), ValidationError);
  CHECK(make_example("e", {0.0}, 4).label() == 1);
  CHECK(make_example("e", {0.0}, 3).label() == 0);
}

TEST_CASE("train config json") {
  TrainConfig c;
  c.epochs = 7;
  c.dropout = 0.5;
  auto back = TrainConfig::from_json(c.to_json());
  CHECK(back.epochs == 7);
  CHECK(back.dropout == 0.5);
  CHECK(back.learning_rate == 0.003);
  CHECK(back.weight_decay == 0.0007);
}

TEST_CASE("cross-validation respects the iteration bounds") {
  auto data = mt::planted_dataset(300, 25, 5, 0.5, 2);
  CvConfig cfg;
  cfg.train.epochs = 20;
  cfg.max_iterations = 12;
  cfg.target_sem = 1e-9;  // unreachable
  auto r = mc_cross_validate(data, cfg);
  CHECK(r.iterations == 12);
  CHECK_FALSE(r.converged);
  CHECK(r.aucs.size() == 12);
  CHECK(r.topn_precision.size() == 20);
  CHECK(r.pooled_scores.size() == r.pooled_labels.size());
  auto again = mc_cross_validate(data, cfg);
  CHECK(again.aucs == r.aucs);
}

TEST_CASE("feature selection ranks informative features first") {
  auto data = mt::planted_dataset(500, 6, 2, 0.2, 3);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (const auto& e : data) {
    rows.push_back(e.features);
    labels.push_back(e.label());
  }
  auto top = select_top_features(rows, labels, {"a", "b", "c", "d", "e", "f"}, 2);
  REQUIRE(top.size() == 2);
  CHECK(((top[0].id == "a" && top[1].id == "b") || (top[0].id == "b" && top[1].id == "a")));
}

TEST_CASE("mix_seed separates streams") {
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  CHECK(mix_seed(1, 0) != mix_seed(2, 0));
  CHECK(mix_seed(5, 5) == mix_seed(5, 5));
}

TEST_CASE("impact proxy trains, scores symmetrically and round trips") {
  auto sc = mt::make_corpus(400, 2, 8);
  concepts::ConceptLexicon lex;
  lex.concepts.insert(sc.concepts.begin(), sc.concepts.end());
  auto g = kg::KnowledgeGraph::build(sc.corpus, lex);
  ImpactOptions opts;
  opts.train.epochs = 50;
  auto m = train_impact_proxy(g, opts);
  CHECK(m.horizon_years == 3);
  CHECK(m.target_scale > 0);
  CHECK(ImpactModel::feature_ids().size() == 25);
  features::FeatureExtractor ex(g, g.cutoff_year());
  const double ab = m.score(ex, sc.concepts[0], sc.concepts[1]);
  CHECK(ab == m.score(ex, sc.concepts[1], sc.concepts[0]));
  CHECK(ab > 0.0);
  CHECK(ab < 1.0);
  CHECK(m.expected_gain(0.0) == 0.0);
  auto back = parse_impact_model(serialize_impact_model(m));
  CHECK(back.score(ex, sc.concepts[0], sc.concepts[1]) == ab);
  opts.horizon_years = 0;
  CHECK_THROWS_AS(train_impact_proxy(g, opts), ValidationError);
}
