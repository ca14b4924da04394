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

#include <string>
#include <vector>

namespace muse::analysis {

// (x - mean) / population std. ValidationError for fewer than two values or
// zero variance.
std::vector<double> zscore(const std::vector<double>& values);

struct Bin {
  size_t count = 0;
  double mean_feature = 0.0;
  double mean_interest = 0.0;
  double std_interest = 0.0;  // population std
};

// Sorts by feature (stable) and cuts into n_bins contiguous groups whose
// sizes differ by at most one, larger groups first.
std::vector<Bin> bin_aggregate(const std::vector<double>& feature,
                               const std::vector<double>& interest,
                               size_t n_bins = 50);

// Indices of items whose impact is >= the (1 - quantile) empirical quantile
// (lower order statistic). Ties at the threshold are kept. Order preserved.
std::vector<size_t> filter_top_impact(const std::vector<double>& impact,
                                      double quantile);

template <typename T>
std::vector<T> select(const std::vector<T>& items, const std::vector<size_t>& idx) {
  std::vector<T> out;
  out.reserve(idx.size());
  for (size_t i : idx) out.push_back(items.at(i));
  return out;
}

struct InterestCurve {
  std::string feature_id;
  std::string subset;  // "all", "top50", "top25"
  std::vector<Bin> bins;
};

// Rows of feature_id, subset, bin, count, bin_mean_feature,
// bin_mean_interest, bin_std.
std::string interest_curves_csv(const std::vector<InterestCurve>& curves);

// z-scored curves of each feature against interest for the three impact
// subsets. feature_columns[i] holds feature i over all items.
std::vector<InterestCurve> interest_curves(
    const std::vector<std::string>& feature_ids,
    const std::vector<std::vector<double>>& feature_columns,
    const std::vector<double>& interest, const std::vector<double>& impact,
    size_t n_bins = 50);

}  // namespace muse::analysis
