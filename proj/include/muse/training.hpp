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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "muse/network.hpp"

namespace muse::models {

struct TrainConfig {
  double learning_rate = 0.003;
  double weight_decay = 0.0007;  // L2 term added to the gradient
  double dropout = 0.20;
  int epochs = 200;              // full-batch Adam steps
  int hidden = 50;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& j);
};

struct LabeledExample {
  std::string id;
  std::vector<double> features;
  int rating = 0;  // 1..5

  // 1 iff rating is 4 or 5.
  int label() const { return rating >= 4 ? 1 : 0; }
};

// ValidationError for ratings outside 1..5 or non-finite features.
LabeledExample make_example(std::string id, std::vector<double> features, int rating);

struct TrainResult {
  Network network;
  std::vector<double> train_loss;  // per epoch, with dropout active
  int selected_epoch = 0;          // 0 = initialization
  std::optional<double> validation_auc;
};

// Trains on rows of x against targets in [0,1]. When validation data is
// given, the weights from the epoch with the best validation AUC are kept
// (earliest on ties); otherwise the last epoch's. Deterministic per seed.
// Error when the loss becomes NaN.
TrainResult train_network(const Eigen::MatrixXd& x, const Eigen::VectorXd& targets,
                          const Eigen::MatrixXd* val_x, const std::vector<int>* val_labels,
                          const TrainConfig& config, uint64_t seed);

struct InterestModel {
  Network network;
  std::vector<std::string> feature_ids;
  std::string catalog_version;
  TrainConfig config;
  uint64_t seed = 0;

  // Dropout off. ValidationError on wrong length or non-finite input.
  double predict(std::span<const double> features) const;
};

// Needs at least 50 examples of both classes.
InterestModel train_interest_model(const std::vector<LabeledExample>& data,
                                   std::vector<std::string> feature_ids,
                                   std::string catalog_version,
                                   const TrainConfig& config, uint64_t seed);

// "muse-model/1" JSON document: header fields plus weights.
std::string serialize_model(const InterestModel& m);
InterestModel parse_model(const std::string& text);
void write_model(const InterestModel& m, const std::string& path);
InterestModel read_model(const std::string& path);

struct CvConfig {
  double train_fraction = 0.75;
  double validation_fraction = 0.15;
  double test_fraction = 0.10;
  double target_sem = 0.01 / 3.0;
  int min_iterations = 10;
  int max_iterations = 1000;
  int max_top_n = 20;
  uint64_t seed = 1;
  TrainConfig train;
};

struct CvReport {
  std::vector<double> aucs;  // test AUC per iteration
  double mean_auc = 0.0;
  double std_of_mean = 0.0;  // sample std / sqrt(iterations)
  int iterations = 0;
  bool converged = false;
  // Averages over iterations, index n-1 for top-n.
  std::vector<double> topn_precision;
  std::vector<double> topn_hit_model;
  std::vector<double> topn_hit_random;
  // Test-set predictions of every iteration, concatenated.
  std::vector<double> pooled_scores;
  std::vector<int> pooled_labels;
};

// Repeated stratified train/validation/test re-splits. Stops once at least
// min_iterations ran and std_of_mean < target_sem, or at max_iterations
// (converged = false). ConfigError when fractions do not sum to 1;
// ValidationError when a class is too small to appear in every part.
CvReport mc_cross_validate(const std::vector<LabeledExample>& data,
                           const CvConfig& config);

struct FeatureScore {
  std::string id;
  double score;  // max(AUC, 1 - AUC); 0.5 for constant features
};

// rows[i] holds all features of example i (ids order). Best k, ties in ids
// order.
std::vector<FeatureScore> select_top_features(
    const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
    const std::vector<std::string>& ids, size_t k = 25);

// Deterministic 64-bit mix used to derive per-iteration seeds.
uint64_t mix_seed(uint64_t seed, uint64_t stream);

}  // namespace muse::models
