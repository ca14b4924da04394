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

#include "muse/impact.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "muse/error.hpp"

namespace muse::models {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using kg::VertexId;

const std::vector<std::string>& ImpactModel::feature_ids() {
  static const std::vector<std::string> ids = {
      "deg_A@0",          "deg_B@0",          "pr_A@0",
      "pr_B@0",           "papers_A@0",       "papers_B@0",
      "cit_A@0",          "cit_B@0",          "new_cit_A@-1:0",
      "new_cit_B@-1:0",   "new_papers_A@-1:0", "new_papers_B@-1:0",
      "new_nbrs_A@-1:0",  "new_nbrs_B@-1:0",  "annual_cit_A@0",
      "annual_cit_B@0",   "papers_either@0",  "papers_both@0",
      "edge_cit@0",       "simpson@0",        "dice@0",
      "jaccard@0",        "common_nbrs@0",    "pref_attach@0",
      "adamic_adar@0",
  };
  return ids;
}

namespace {

std::vector<size_t> feature_indices(const features::FeatureCatalog& catalog) {
  std::vector<size_t> out;
  for (const auto& id : ImpactModel::feature_ids()) out.push_back(catalog.index_of(id));
  return out;
}

}  // namespace

double ImpactModel::score(const features::FeatureExtractor& extractor,
                          const std::string& a, const std::string& b) const {
  if (a == b) throw ValidationError("impact needs two distinct concepts");
  const auto& g = extractor.graph();
  const VertexId va = g.id(a);
  const VertexId vb = g.id(b);
  const auto idx = feature_indices(extractor.catalog());
  const auto ab = extractor.values(va, vb, idx, {});
  const auto ba = extractor.values(vb, va, idx, {});
  return (network.predict(ab) + network.predict(ba)) / 2.0;
}

ImpactModel train_impact_proxy(const kg::KnowledgeGraph& g, const ImpactOptions& options) {
  if (options.horizon_years < 1) throw ValidationError("impact horizon must be >= 1 year");
  const int reference = g.cutoff_year() - options.horizon_years;
  const int future = g.cutoff_year();
  std::mt19937_64 rng(options.seed);

  std::vector<std::pair<VertexId, VertexId>> pairs;
  std::set<std::pair<VertexId, VertexId>> seen;
  for (uint32_t e = 0; e < g.edge_count(); ++e) {
    const auto& s = g.edge_stats(e);
    if (s.papers.until(reference) > 0) {
      pairs.push_back(g.edge_ends(e));
      seen.insert(g.edge_ends(e));
    }
  }
  if (pairs.empty()) {
    throw ValidationError("graph has no edges " + std::to_string(options.horizon_years) +
                          " years before the cutoff");
  }
  const size_t n_vertices = g.vertex_count();
  const size_t wanted_negative = pairs.size();
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n_vertices - 1));
  for (size_t tries = 0; tries < 20 * wanted_negative && pairs.size() < 2 * wanted_negative;
       ++tries) {
    VertexId a = pick(rng), b = pick(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) continue;
    pairs.emplace_back(a, b);
  }
  std::shuffle(pairs.begin(), pairs.end(), rng);
  if (pairs.size() > options.max_samples) pairs.resize(options.max_samples);

  std::vector<double> gains;
  for (auto [a, b] : pairs) {
    const auto* e = g.edge(a, b);
    gains.push_back(e ? static_cast<double>(e->citations.gained(reference, future)) : 0.0);
  }
  const double max_gain = *std::max_element(gains.begin(), gains.end());
  if (max_gain <= 0) throw ValidationError("no citation growth after the training slice");

  ImpactModel model;
  model.horizon_years = options.horizon_years;
  model.target_scale = std::log1p(max_gain);

  const features::FeatureExtractor past(g, reference);
  const auto idx = feature_indices(past.catalog());
  MatrixXd x(static_cast<Eigen::Index>(pairs.size()), static_cast<Eigen::Index>(idx.size()));
  VectorXd y(static_cast<Eigen::Index>(pairs.size()));
  for (size_t r = 0; r < pairs.size(); ++r) {
    // Random orientation so the model sees both sides.
    auto [a, b] = pairs[r];
    if (rng() & 1) std::swap(a, b);
    const auto v = past.values(a, b, idx, {});
    for (size_t c = 0; c < v.size(); ++c) {
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v[c];
    }
    y(static_cast<Eigen::Index>(r)) = std::log1p(gains[r]) / model.target_scale;
  }
  model.network =
      train_network(x, y, nullptr, nullptr, options.train, mix_seed(options.seed, 99)).network;
  return model;
}

std::string serialize_impact_model(const ImpactModel& m) {
  nlohmann::json j = {{"format", "muse-impact-model/1"},
                      {"feature_ids", ImpactModel::feature_ids()},
                      {"horizon_years", m.horizon_years},
                      {"target_scale", m.target_scale},
                      {"weights", m.network.to_json()}};
  return j.dump(1) + "\n";
}

ImpactModel parse_impact_model(const std::string& text) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || j.value("format", "") != "muse-impact-model/1") {
    throw FormatError("not an impact model file");
  }
  try {
    if (j.at("feature_ids").get<std::vector<std::string>>() != ImpactModel::feature_ids()) {
      throw FormatError("impact model feature layout differs");
    }
    ImpactModel m;
    m.network = Network::from_json(j.at("weights"));
    m.horizon_years = j.at("horizon_years").get<int>();
    m.target_scale = j.at("target_scale").get<double>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed impact model: ") + e.what());
  }
}

}  // namespace muse::models
