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
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace muse::models {

// One hidden layer of rectified-linear units and a logistic output:
//   y = sigmoid(w2 . dropout(relu(W1 z + b1)) + b2),  z = (x - mean) / scale
// Inputs are standardized with statistics frozen at training time.
class Network {
 public:
  Network() = default;
  // All weights zero, identity standardization.
  Network(int inputs, int hidden);
  // Weights and biases uniform in +-1/sqrt(fan_in).
  static Network initialized(int inputs, int hidden, uint64_t seed);

  int inputs() const { return static_cast<int>(w1.cols()); }
  int hidden() const { return static_cast<int>(w1.rows()); }

  // Raw (unstandardized) input; ValidationError on wrong length or
  // non-finite values.
  double predict(std::span<const double> x) const;
  // Rows are examples, raw inputs.
  Eigen::VectorXd predict_batch(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd standardize(const Eigen::MatrixXd& x) const;

  // Flat parameter view in the order w1 (row-major), b1, w2, b2.
  size_t parameter_count() const;
  std::vector<double> flatten() const;
  void unflatten(const std::vector<double>& p);

  nlohmann::json to_json() const;
  static Network from_json(const nlohmann::json& j);

  bool operator==(const Network& o) const;

  Eigen::MatrixXd w1;  // hidden x inputs
  Eigen::VectorXd b1;
  Eigen::VectorXd w2;
  double b2 = 0.0;
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;
};

struct Gradient {
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::VectorXd w2;
  double b2 = 0.0;

  std::vector<double> flatten() const;
};

// Mean squared error between sigmoid outputs and targets on standardized
// inputs z (rows are examples). hidden_mask, when given, multiplies the
// hidden activations elementwise (examples x hidden); it is how dropout
// enters. Fills grad when non-null.
double loss_and_gradient(const Network& net, const Eigen::MatrixXd& z,
                         const Eigen::VectorXd& targets,
                         const Eigen::MatrixXd* hidden_mask, Gradient* grad);

// Inverted dropout mask: entries 0 with probability rate, else 1/(1-rate).
template <typename Rng>
Eigen::MatrixXd dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate,
                             Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  const double keep = 1.0 / (1.0 - rate);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      // 53-bit uniform in [0,1), independent of the standard library's
      // distribution implementation.
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      m(i, j) = u < rate ? 0.0 : keep;
    }
  }
  return m;
}

}  // namespace muse::models
