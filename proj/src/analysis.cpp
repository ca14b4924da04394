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

#include "muse/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "muse/csv.hpp"
#include "muse/error.hpp"

namespace muse::analysis {
namespace {

double mean(const double* b, const double* e) {
  return std::accumulate(b, e, 0.0) / static_cast<double>(e - b);
}

double pop_std(const double* b, const double* e, double m) {
  double s = 0.0;
  for (const double* p = b; p != e; ++p) s += (*p - m) * (*p - m);
  return std::sqrt(s / static_cast<double>(e - b));
}

}  // namespace

std::vector<double> zscore(const std::vector<double>& values) {
  if (values.size() < 2) throw ValidationError("zscore needs at least two values");
  const double* b = values.data();
  const double* e = b + values.size();
  const double m = mean(b, e);
  const double sd = pop_std(b, e, m);
  if (!(sd > 0.0) || !std::isfinite(sd)) {
    throw ValidationError("zscore of a zero-variance feature");
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back((v - m) / sd);
  return out;
}

std::vector<Bin> bin_aggregate(const std::vector<double>& feature,
                               const std::vector<double>& interest,
                               size_t n_bins) {
  if (feature.size() != interest.size()) {
    throw ValidationError("feature and interest lengths differ");
  }
  if (n_bins == 0 || feature.size() < n_bins) {
    throw ValidationError("fewer values than bins");
  }
  std::vector<size_t> order(feature.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t x, size_t y) { return feature[x] < feature[y]; });
  std::vector<double> f, in;
  for (size_t i : order) {
    f.push_back(feature[i]);
    in.push_back(interest[i]);
  }
  const size_t base = feature.size() / n_bins;
  const size_t extra = feature.size() % n_bins;
  std::vector<Bin> bins;
  size_t pos = 0;
  for (size_t k = 0; k < n_bins; ++k) {
    const size_t n = base + (k < extra ? 1 : 0);
    Bin bin;
    bin.count = n;
    bin.mean_feature = mean(&f[pos], &f[pos] + n);
    bin.mean_interest = mean(&in[pos], &in[pos] + n);
    bin.std_interest = pop_std(&in[pos], &in[pos] + n, bin.mean_interest);
    bins.push_back(bin);
    pos += n;
  }
  return bins;
}

std::vector<size_t> filter_top_impact(const std::vector<double>& impact,
                                      double quantile) {
  if (impact.empty()) throw ValidationError("filter_top_impact on empty input");
  if (!(quantile > 0.0 && quantile <= 1.0)) {
    throw ValidationError("quantile must be in (0, 1]");
  }
  std::vector<double> sorted = impact;
  std::sort(sorted.begin(), sorted.end());
  // Keep ceil(q * n) items (plus ties): threshold is the item at n - ceil(q n).
  const size_t n = sorted.size();
  const size_t keep = static_cast<size_t>(std::ceil(quantile * static_cast<double>(n) - 1e-9));
  const double threshold = sorted[n - std::max<size_t>(keep, 1)];
  std::vector<size_t> out;
  for (size_t i = 0; i < n; ++i) {
    if (impact[i] >= threshold) out.push_back(i);
  }
  return out;
}

std::string interest_curves_csv(const std::vector<InterestCurve>& curves) {
  csv::Table t;
  t.header = {"feature_id", "subset", "bin", "count", "bin_mean_feature",
              "bin_mean_interest", "bin_std"};
  for (const auto& c : curves) {
    for (size_t k = 0; k < c.bins.size(); ++k) {
      const auto& b = c.bins[k];
      t.rows.push_back({c.feature_id, c.subset, std::to_string(k),
                        std::to_string(b.count), csv::format_double(b.mean_feature),
                        csv::format_double(b.mean_interest),
                        csv::format_double(b.std_interest)});
    }
  }
  return csv::write(t);
}

std::vector<InterestCurve> interest_curves(
    const std::vector<std::string>& feature_ids,
    const std::vector<std::vector<double>>& feature_columns,
    const std::vector<double>& interest, const std::vector<double>& impact,
    size_t n_bins) {
  if (feature_ids.size() != feature_columns.size()) {
    throw ValidationError("feature id and column counts differ");
  }
  struct Subset {
    const char* name;
    double quantile;
  };
  const Subset subsets[] = {{"all", 1.0}, {"top50", 0.5}, {"top25", 0.25}};
  std::vector<InterestCurve> out;
  for (const auto& s : subsets) {
    const auto idx = filter_top_impact(impact, s.quantile);
    const auto sub_interest = select(interest, idx);
    const size_t bins = std::min(n_bins, idx.size());
    for (size_t f = 0; f < feature_ids.size(); ++f) {
      const auto col = select(feature_columns[f], idx);
      std::vector<double> z;
      try {
        z = zscore(col);
      } catch (const ValidationError&) {
        continue;  // constant within the subset
      }
      out.push_back({feature_ids[f], s.name, bin_aggregate(z, sub_interest, bins)});
    }
  }
  return out;
}

}  // namespace muse::analysis
