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

#include "muse/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "muse/error.hpp"
#include "muse/metrics.hpp"
#include "muse/text.hpp"

namespace muse::models {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using nlohmann::json;

namespace {

constexpr const char* kModelFormat = "muse-model/1";
constexpr const char* kArchitecture = "dense relu hidden, dropout, logistic output, mse";

MatrixXd to_matrix(const std::vector<LabeledExample>& data,
                   const std::vector<size_t>& idx) {
  const size_t cols = data.at(idx.front()).features.size();
  MatrixXd x(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(cols));
  for (size_t r = 0; r < idx.size(); ++r) {
    const auto& f = data[idx[r]].features;
    if (f.size() != cols) throw ValidationError("examples differ in feature count");
    for (size_t c = 0; c < cols; ++c) {
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = f[c];
    }
  }
  return x;
}

std::vector<int> labels_of(const std::vector<LabeledExample>& data,
                           const std::vector<size_t>& idx) {
  std::vector<int> out;
  for (size_t i : idx) out.push_back(data[i].label());
  return out;
}

VectorXd as_targets(const std::vector<int>& labels) {
  VectorXd y(static_cast<Eigen::Index>(labels.size()));
  for (size_t i = 0; i < labels.size(); ++i) y(static_cast<Eigen::Index>(i)) = labels[i];
  return y;
}

std::vector<double> to_std(const VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

uint64_t mix_seed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

json TrainConfig::to_json() const {
  return {{"learning_rate", learning_rate}, {"weight_decay", weight_decay},
          {"dropout", dropout},             {"epochs", epochs},
          {"hidden", hidden},               {"beta1", beta1},
          {"beta2", beta2},                 {"epsilon", epsilon}};
}

TrainConfig TrainConfig::from_json(const json& j) {
  TrainConfig c;
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.weight_decay = j.value("weight_decay", c.weight_decay);
  c.dropout = j.value("dropout", c.dropout);
  c.epochs = j.value("epochs", c.epochs);
  c.hidden = j.value("hidden", c.hidden);
  c.beta1 = j.value("beta1", c.beta1);
  c.beta2 = j.value("beta2", c.beta2);
  c.epsilon = j.value("epsilon", c.epsilon);
  return c;
}

LabeledExample make_example(std::string id, std::vector<double> features, int rating) {
  if (rating < 1 || rating > 5) {
    throw ValidationError("rating must be in 1..5, got " + std::to_string(rating));
  }
  for (double v : features) {
    if (!std::isfinite(v)) throw ValidationError("non-finite feature in example " + id);
  }
  return {std::move(id), std::move(features), rating};
}

TrainResult train_network(const MatrixXd& x, const VectorXd& targets,
                          const MatrixXd* val_x, const std::vector<int>* val_labels,
                          const TrainConfig& config, uint64_t seed) {
  if (x.rows() == 0 || x.rows() != targets.size()) {
    throw ValidationError("training data and targets differ in length");
  }
  if (config.dropout < 0.0 || config.dropout >= 1.0) {
    throw ConfigError("dropout must be in [0, 1)");
  }
  if (config.epochs < 0 || config.hidden <= 0 || config.learning_rate <= 0) {
    throw ConfigError("invalid training configuration");
  }
  const int inputs = static_cast<int>(x.cols());
  TrainResult result;
  Network net = Network::initialized(inputs, config.hidden, mix_seed(seed, 0));
  net.mean = x.colwise().mean().transpose();
  for (int j = 0; j < inputs; ++j) {
    const double var = (x.col(j).array() - net.mean(j)).square().mean();
    net.scale(j) = var > 0 ? std::sqrt(var) : 1.0;
  }
  const MatrixXd z = net.standardize(x);

  std::mt19937_64 rng(mix_seed(seed, 1));
  std::vector<double> params = net.flatten();
  std::vector<double> m(params.size(), 0.0), v(params.size(), 0.0);
  Network best = net;
  std::optional<double> best_auc;
  auto score_validation = [&](const Network& n) -> std::optional<double> {
    if (!val_x || !val_labels) return std::nullopt;
    return auc(to_std(n.predict_batch(*val_x)), *val_labels);
  };
  best_auc = score_validation(net);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    MatrixXd mask;
    const MatrixXd* mask_ptr = nullptr;
    if (config.dropout > 0.0) {
      mask = dropout_mask(z.rows(), config.hidden, config.dropout, rng);
      mask_ptr = &mask;
    }
    Gradient g;
    const double loss = loss_and_gradient(net, z, targets, mask_ptr, &g);
    if (!std::isfinite(loss)) {
      throw Error("training diverged: loss " + std::to_string(loss) + " at epoch " +
                  std::to_string(epoch) + " (lr " + std::to_string(config.learning_rate) +
                  ")");
    }
    result.train_loss.push_back(loss);
    const auto grad = g.flatten();
    const double c1 = 1.0 - std::pow(config.beta1, epoch);
    const double c2 = 1.0 - std::pow(config.beta2, epoch);
    for (size_t i = 0; i < params.size(); ++i) {
      const double gi = grad[i] + config.weight_decay * params[i];
      m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * gi;
      v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * gi * gi;
      params[i] -= config.learning_rate * (m[i] / c1) /
                   (std::sqrt(v[i] / c2) + config.epsilon);
    }
    net.unflatten(params);
    if (auto a = score_validation(net); a && (!best_auc || *a > *best_auc)) {
      best_auc = a;
      best = net;
      result.selected_epoch = epoch;
    }
  }
  if (val_x && val_labels) {
    result.network = std::move(best);
    result.validation_auc = best_auc;
  } else {
    result.network = std::move(net);
    result.selected_epoch = config.epochs;
  }
  return result;
}

double InterestModel::predict(std::span<const double> features) const {
  return network.predict(features);
}

InterestModel train_interest_model(const std::vector<LabeledExample>& data,
                                   std::vector<std::string> feature_ids,
                                   std::string catalog_version,
                                   const TrainConfig& config, uint64_t seed) {
  if (data.size() < 50) throw ValidationError("need at least 50 labeled examples");
  std::vector<size_t> all(data.size());
  std::iota(all.begin(), all.end(), 0);
  const auto labels = labels_of(data, all);
  const auto pos = std::count(labels.begin(), labels.end(), 1);
  if (pos == 0 || pos == static_cast<long>(labels.size())) {
    throw ValidationError("training data holds a single class");
  }
  const MatrixXd x = to_matrix(data, all);
  if (!feature_ids.empty() && feature_ids.size() != static_cast<size_t>(x.cols())) {
    throw ValidationError("feature id count differs from feature width");
  }
  auto r = train_network(x, as_targets(labels), nullptr, nullptr, config, seed);
  return {std::move(r.network), std::move(feature_ids), std::move(catalog_version),
          config, seed};
}

std::string serialize_model(const InterestModel& m) {
  json j = {{"format", kModelFormat},
            {"architecture", std::to_string(m.network.inputs()) + "-" +
                                 std::to_string(m.network.hidden()) + "-1"},
            {"activation", kArchitecture},
            {"catalog_version", m.catalog_version},
            {"feature_ids", m.feature_ids},
            {"seed", m.seed},
            {"config", m.config.to_json()},
            {"weights", m.network.to_json()}};
  return j.dump(1) + "\n";
}

InterestModel parse_model(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw FormatError("model file is not JSON");
  if (j.value("format", "") != kModelFormat) {
    throw FormatError("unsupported model format: " + j.value("format", ""));
  }
  try {
    InterestModel m;
    m.network = Network::from_json(j.at("weights"));
    m.feature_ids = j.at("feature_ids").get<std::vector<std::string>>();
    m.catalog_version = j.at("catalog_version").get<std::string>();
    m.seed = j.at("seed").get<uint64_t>();
    m.config = TrainConfig::from_json(j.at("config"));
    if (!m.feature_ids.empty() &&
        static_cast<int>(m.feature_ids.size()) != m.network.inputs()) {
      throw FormatError("feature id count differs from network inputs");
    }
    return m;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed model file: ") + e.what());
  }
}

void write_model(const InterestModel& m, const std::string& path) {
  write_file_atomic(path, serialize_model(m));
}

InterestModel read_model(const std::string& path) { return parse_model(read_file(path)); }

CvReport mc_cross_validate(const std::vector<LabeledExample>& data,
                           const CvConfig& config) {
  const double sum =
      config.train_fraction + config.validation_fraction + config.test_fraction;
  if (std::abs(sum - 1.0) > 1e-9 || config.train_fraction <= 0 ||
      config.validation_fraction <= 0 || config.test_fraction <= 0) {
    throw ConfigError("split fractions must be positive and sum to 1");
  }
  if (config.min_iterations < 2 || config.max_iterations < config.min_iterations) {
    throw ConfigError("need 2 <= min_iterations <= max_iterations");
  }
  std::vector<size_t> by_class[2];
  for (size_t i = 0; i < data.size(); ++i) by_class[data[i].label()].push_back(i);
  struct Counts {
    size_t val, test;
  };
  Counts counts[2];
  for (int c = 0; c < 2; ++c) {
    const double n = static_cast<double>(by_class[c].size());
    counts[c].test = std::max<size_t>(1, static_cast<size_t>(std::llround(n * config.test_fraction)));
    counts[c].val = std::max<size_t>(
        1, static_cast<size_t>(std::llround(n * config.validation_fraction)));
    if (counts[c].test + counts[c].val >= by_class[c].size()) {
      throw ValidationError("too few examples of class " + std::to_string(c) +
                            " for stratified splits");
    }
  }

  CvReport report;
  const size_t max_n = static_cast<size_t>(std::max(0, config.max_top_n));
  report.topn_precision.assign(max_n, 0.0);
  report.topn_hit_model.assign(max_n, 0.0);
  report.topn_hit_random.assign(max_n, 0.0);
  std::vector<int> topn_count(max_n, 0);

  double mean = 0.0, m2 = 0.0;
  for (int it = 0; it < config.max_iterations; ++it) {
    std::mt19937_64 rng(mix_seed(config.seed, 2 * static_cast<uint64_t>(it)));
    std::vector<size_t> train, val, test;
    for (int c = 0; c < 2; ++c) {
      auto idx = by_class[c];
      std::shuffle(idx.begin(), idx.end(), rng);
      test.insert(test.end(), idx.begin(), idx.begin() + static_cast<long>(counts[c].test));
      val.insert(val.end(), idx.begin() + static_cast<long>(counts[c].test),
                 idx.begin() + static_cast<long>(counts[c].test + counts[c].val));
      train.insert(train.end(), idx.begin() + static_cast<long>(counts[c].test + counts[c].val),
                   idx.end());
    }
    std::sort(train.begin(), train.end());
    std::sort(val.begin(), val.end());
    std::sort(test.begin(), test.end());

    const MatrixXd val_x = to_matrix(data, val);
    const auto val_labels = labels_of(data, val);
    auto r = train_network(to_matrix(data, train), as_targets(labels_of(data, train)),
                           &val_x, &val_labels, config.train,
                           mix_seed(config.seed, 2 * static_cast<uint64_t>(it) + 1));
    const auto scores = to_std(r.network.predict_batch(to_matrix(data, test)));
    const auto labels = labels_of(data, test);
    const double a = auc(scores, labels);
    report.aucs.push_back(a);
    report.pooled_scores.insert(report.pooled_scores.end(), scores.begin(), scores.end());
    report.pooled_labels.insert(report.pooled_labels.end(), labels.begin(), labels.end());
    const auto positives = std::count(labels.begin(), labels.end(), 1);
    for (size_t n = 1; n <= max_n && n <= scores.size(); ++n) {
      report.topn_precision[n - 1] += topn_precision(scores, labels, static_cast<int>(n));
      report.topn_hit_model[n - 1] += topn_hit(scores, labels, static_cast<int>(n));
      report.topn_hit_random[n - 1] += hypergeometric_hit_probability(
          static_cast<int64_t>(scores.size()), positives, static_cast<int64_t>(n));
      ++topn_count[n - 1];
    }

    // Welford update
    const int k = it + 1;
    const double delta = a - mean;
    mean += delta / k;
    m2 += delta * (a - mean);
    report.iterations = k;
    report.mean_auc = mean;
    report.std_of_mean = k > 1 ? std::sqrt(m2 / (k - 1)) / std::sqrt(static_cast<double>(k)) : 0.0;
    if (k >= config.min_iterations && report.std_of_mean < config.target_sem) {
      report.converged = true;
      break;
    }
  }
  for (size_t n = 0; n < max_n; ++n) {
    if (topn_count[n] == 0) continue;
    report.topn_precision[n] /= topn_count[n];
    report.topn_hit_model[n] /= topn_count[n];
    report.topn_hit_random[n] /= topn_count[n];
  }
  return report;
}

std::vector<FeatureScore> select_top_features(
    const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
    const std::vector<std::string>& ids, size_t k) {
  if (rows.size() != labels.size()) throw ValidationError("rows and labels differ");
  std::vector<FeatureScore> scores;
  for (size_t f = 0; f < ids.size(); ++f) {
    std::vector<double> col;
    col.reserve(rows.size());
    for (const auto& r : rows) {
      if (r.size() != ids.size()) throw ValidationError("row width differs from ids");
      col.push_back(r[f]);
    }
    const double a = auc(col, labels);
    scores.push_back({ids[f], std::max(a, 1.0 - a)});
  }
  std::stable_sort(scores.begin(), scores.end(),
                   [](const FeatureScore& a, const FeatureScore& b) {
                     return a.score > b.score;
                   });
  if (scores.size() > k) scores.resize(k);
  return scores;
}

}  // namespace muse::models
