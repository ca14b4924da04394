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

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "muse/features.hpp"
#include "muse/kgraph.hpp"
#include "muse/network.hpp"
#include "muse/training.hpp"

namespace muse::models {

struct ImpactOptions {
  int horizon_years = 3;
  size_t max_samples = 4000;
  uint64_t seed = 7;
  TrainConfig train;
};

// Stand-in for a citation forecaster: the interest network's architecture
// regressing log1p of an edge's citation gain over the horizon, scaled to
// [0,1] by the largest gain seen in training.
struct ImpactModel {
  Network network;
  int horizon_years = 0;
  double target_scale = 1.0;  // log1p(max gain)

  // The graph-only catalog features the proxy reads.
  static const std::vector<std::string>& feature_ids();

  // Symmetric in (a, b): mean of both orientations. Features are taken at
  // the extractor's reference year.
  double score(const features::FeatureExtractor& extractor, const std::string& a,
               const std::string& b) const;
  // The score mapped back to an expected citation gain.
  double expected_gain(double score) const { return std::expm1(score * target_scale); }
};

// Trains on pairs observed at cutoff - horizon: every edge present then plus
// as many non-adjacent pairs, capped at max_samples. ValidationError for a
// horizon < 1 or when the earlier slice has no edges or no later growth.
ImpactModel train_impact_proxy(const kg::KnowledgeGraph& g, const ImpactOptions& options);

std::string serialize_impact_model(const ImpactModel& m);
ImpactModel parse_impact_model(const std::string& text);

}  // namespace muse::models
