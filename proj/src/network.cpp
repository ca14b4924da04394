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

#include "muse/network.hpp"

#include <cmath>
#include <random>

#include "muse/error.hpp"

namespace muse::models {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

double sigmoid(double v) {
  if (v >= 0) return 1.0 / (1.0 + std::exp(-v));
  const double e = std::exp(v);
  return e / (1.0 + e);
}

double uniform(std::mt19937_64& rng, double bound) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return (2.0 * u - 1.0) * bound;
}

std::vector<double> to_vec(const VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

VectorXd from_vec(const std::vector<double>& v) {
  VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

}  // namespace

Network::Network(int inputs, int hidden)
    : w1(MatrixXd::Zero(hidden, inputs)),
      b1(VectorXd::Zero(hidden)),
      w2(VectorXd::Zero(hidden)),
      mean(VectorXd::Zero(inputs)),
      scale(VectorXd::Ones(inputs)) {
  if (inputs <= 0 || hidden <= 0) throw ValidationError("empty network layer");
}

Network Network::initialized(int inputs, int hidden, uint64_t seed) {
  Network n(inputs, hidden);
  std::mt19937_64 rng(seed);
  const double bound1 = 1.0 / std::sqrt(static_cast<double>(inputs));
  const double bound2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (int i = 0; i < hidden; ++i) {
    for (int j = 0; j < inputs; ++j) n.w1(i, j) = uniform(rng, bound1);
  }
  for (int i = 0; i < hidden; ++i) n.b1(i) = uniform(rng, bound1);
  for (int i = 0; i < hidden; ++i) n.w2(i) = uniform(rng, bound2);
  n.b2 = uniform(rng, bound2);
  return n;
}

MatrixXd Network::standardize(const MatrixXd& x) const {
  if (x.cols() != inputs()) {
    throw ValidationError("expected " + std::to_string(inputs()) + " features, got " +
                          std::to_string(x.cols()));
  }
  return (x.rowwise() - mean.transpose()).array().rowwise() /
         scale.transpose().array();
}

VectorXd Network::predict_batch(const MatrixXd& x) const {
  if (!x.allFinite()) throw ValidationError("non-finite feature value");
  const MatrixXd z = standardize(x);
  MatrixXd h = ((z * w1.transpose()).rowwise() + b1.transpose()).cwiseMax(0.0);
  VectorXd logits = (h * w2).array() + b2;
  return logits.unaryExpr([](double v) { return sigmoid(v); });
}

double Network::predict(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != inputs()) {
    throw ValidationError("expected " + std::to_string(inputs()) + " features, got " +
                          std::to_string(x.size()));
  }
  MatrixXd row(1, inputs());
  for (int j = 0; j < inputs(); ++j) row(0, j) = x[static_cast<size_t>(j)];
  return predict_batch(row)(0);
}

size_t Network::parameter_count() const {
  return static_cast<size_t>(w1.size() + b1.size() + w2.size() + 1);
}

std::vector<double> Network::flatten() const {
  std::vector<double> p;
  p.reserve(parameter_count());
  for (int i = 0; i < hidden(); ++i) {
    for (int j = 0; j < inputs(); ++j) p.push_back(w1(i, j));
  }
  for (int i = 0; i < hidden(); ++i) p.push_back(b1(i));
  for (int i = 0; i < hidden(); ++i) p.push_back(w2(i));
  p.push_back(b2);
  return p;
}

void Network::unflatten(const std::vector<double>& p) {
  if (p.size() != parameter_count()) throw ValidationError("parameter count mismatch");
  size_t k = 0;
  for (int i = 0; i < hidden(); ++i) {
    for (int j = 0; j < inputs(); ++j) w1(i, j) = p[k++];
  }
  for (int i = 0; i < hidden(); ++i) b1(i) = p[k++];
  for (int i = 0; i < hidden(); ++i) w2(i) = p[k++];
  b2 = p[k];
}

std::vector<double> Gradient::flatten() const {
  std::vector<double> p;
  for (Eigen::Index i = 0; i < w1.rows(); ++i) {
    for (Eigen::Index j = 0; j < w1.cols(); ++j) p.push_back(w1(i, j));
  }
  for (Eigen::Index i = 0; i < b1.size(); ++i) p.push_back(b1(i));
  for (Eigen::Index i = 0; i < w2.size(); ++i) p.push_back(w2(i));
  p.push_back(b2);
  return p;
}

nlohmann::json Network::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < hidden(); ++i) rows.push_back(to_vec(w1.row(i).transpose()));
  return {{"inputs", inputs()},       {"hidden", hidden()},
          {"w1", rows},               {"b1", to_vec(b1)},
          {"w2", to_vec(w2)},         {"b2", b2},
          {"input_mean", to_vec(mean)}, {"input_scale", to_vec(scale)}};
}

Network Network::from_json(const nlohmann::json& j) {
  try {
    Network n(j.at("inputs").get<int>(), j.at("hidden").get<int>());
    const auto& rows = j.at("w1");
    if (static_cast<int>(rows.size()) != n.hidden()) throw FormatError("w1 rows");
    for (int i = 0; i < n.hidden(); ++i) {
      auto r = rows[static_cast<size_t>(i)].get<std::vector<double>>();
      if (static_cast<int>(r.size()) != n.inputs()) throw FormatError("w1 columns");
      for (int k = 0; k < n.inputs(); ++k) n.w1(i, k) = r[static_cast<size_t>(k)];
    }
    n.b1 = from_vec(j.at("b1").get<std::vector<double>>());
    n.w2 = from_vec(j.at("w2").get<std::vector<double>>());
    n.b2 = j.at("b2").get<double>();
    n.mean = from_vec(j.at("input_mean").get<std::vector<double>>());
    n.scale = from_vec(j.at("input_scale").get<std::vector<double>>());
    if (n.b1.size() != n.hidden() || n.w2.size() != n.hidden() ||
        n.mean.size() != n.inputs() || n.scale.size() != n.inputs()) {
      throw FormatError("network vector sizes do not match the architecture");
    }
    return n;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed network weights: ") + e.what());
  }
}

bool Network::operator==(const Network& o) const {
  return w1 == o.w1 && b1 == o.b1 && w2 == o.w2 && b2 == o.b2 && mean == o.mean &&
         scale == o.scale;
}

double loss_and_gradient(const Network& net, const MatrixXd& z,
                         const VectorXd& targets, const MatrixXd* hidden_mask,
                         Gradient* grad) {
  const double n = static_cast<double>(z.rows());
  const MatrixXd pre = (z * net.w1.transpose()).rowwise() + net.b1.transpose();
  const MatrixXd relu = pre.cwiseMax(0.0);
  const MatrixXd h = hidden_mask ? MatrixXd(relu.cwiseProduct(*hidden_mask)) : relu;
  const VectorXd logits = (h * net.w2).array() + net.b2;
  const VectorXd out = logits.unaryExpr([](double v) { return sigmoid(v); });
  const VectorXd err = out - targets;
  const double loss = err.squaredNorm() / n;
  if (grad == nullptr) return loss;

  // dL/dlogit = 2 (y - t) y (1 - y) / n
  const VectorXd d_logit =
      (2.0 / n) * err.cwiseProduct(out).cwiseProduct(VectorXd::Ones(out.size()) - out);
  grad->w2 = h.transpose() * d_logit;
  grad->b2 = d_logit.sum();
  MatrixXd d_h = d_logit * net.w2.transpose();
  if (hidden_mask) d_h = d_h.cwiseProduct(*hidden_mask);
  const MatrixXd d_pre = d_h.cwiseProduct((pre.array() > 0.0).cast<double>().matrix());
  grad->w1 = d_pre.transpose() * z;
  grad->b1 = d_pre.colwise().sum().transpose();
  return loss;
}

}  // namespace muse::models
