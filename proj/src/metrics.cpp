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

#include "muse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "muse/error.hpp"

namespace muse::models {
namespace {

void check_inputs(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) {
    throw ValidationError("scores and labels differ in length");
  }
  for (int l : labels) {
    if (l != 0 && l != 1) throw ValidationError("labels must be 0 or 1");
  }
  for (double s : scores) {
    if (!std::isfinite(s)) throw ValidationError("non-finite score");
  }
}

void check_both_classes(const std::vector<int>& labels) {
  const auto pos = std::count(labels.begin(), labels.end(), 1);
  if (pos == 0 || pos == static_cast<long>(labels.size())) {
    throw ValidationError("AUC needs both classes");
  }
}

// Indices by descending score, ties in input order.
std::vector<size_t> ranking(const std::vector<double>& scores) {
  std::vector<size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });
  return idx;
}

}  // namespace

double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  check_inputs(scores, labels);
  check_both_classes(labels);
  const size_t n = scores.size();
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  double positives = 0.0;
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j < n && scores[idx[j]] == scores[idx[i]]) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (size_t k = i; k < j; ++k) {
      if (labels[idx[k]] == 1) {
        rank_sum += avg_rank;
        positives += 1.0;
      }
    }
    i = j;
  }
  const double negatives = static_cast<double>(n) - positives;
  return (rank_sum - positives * (positives + 1.0) / 2.0) / (positives * negatives);
}

std::vector<RocPoint> roc_curve(const std::vector<double>& scores,
                                const std::vector<int>& labels) {
  check_inputs(scores, labels);
  check_both_classes(labels);
  const auto idx = ranking(scores);
  const double p = static_cast<double>(std::count(labels.begin(), labels.end(), 1));
  const double q = static_cast<double>(labels.size()) - p;
  std::vector<RocPoint> curve;
  curve.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  double tp = 0, fp = 0;
  for (size_t i = 0; i < idx.size();) {
    const double s = scores[idx[i]];
    while (i < idx.size() && scores[idx[i]] == s) {
      (labels[idx[i]] == 1 ? tp : fp) += 1.0;
      ++i;
    }
    curve.push_back({fp / q, tp / p, s});
  }
  return curve;
}

double trapezoid_area(const std::vector<RocPoint>& curve) {
  double area = 0.0;
  for (size_t i = 1; i < curve.size(); ++i) {
    area += (curve[i].fpr - curve[i - 1].fpr) * (curve[i].tpr + curve[i - 1].tpr) / 2.0;
  }
  return area;
}

double topn_precision(const std::vector<double>& scores,
                      const std::vector<int>& labels, int n) {
  check_inputs(scores, labels);
  if (n <= 0 || static_cast<size_t>(n) > scores.size()) {
    throw ValidationError("top-N needs 1 <= n <= number of items");
  }
  const auto idx = ranking(scores);
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += labels[idx[static_cast<size_t>(i)]];
  return static_cast<double>(hits) / n;
}

double topn_hit(const std::vector<double>& scores, const std::vector<int>& labels,
                int n) {
  return topn_precision(scores, labels, n) > 0.0 ? 1.0 : 0.0;
}

double hypergeometric_hit_probability(int64_t total, int64_t positives, int64_t n) {
  if (n <= 0 || n > total || positives < 0 || positives > total) {
    throw ValidationError("invalid hypergeometric arguments");
  }
  // C(N-P, n) / C(N, n) = prod_{i<n} (N-P-i) / (N-i)
  double miss = 1.0;
  for (int64_t i = 0; i < n; ++i) {
    const double num = static_cast<double>(total - positives - i);
    if (num <= 0) {
      miss = 0.0;
      break;
    }
    miss *= num / static_cast<double>(total - i);
  }
  return 1.0 - miss;
}

HitProbability topn_hit_probability(const std::vector<double>& scores,
                                    const std::vector<int>& labels, int n,
                                    int trials, uint64_t seed, size_t subset_size) {
  check_inputs(scores, labels);
  if (n <= 0 || static_cast<size_t>(n) > scores.size()) {
    throw ValidationError("top-N needs 1 <= n <= number of items");
  }
  if (trials <= 0) throw ValidationError("trials must be positive");
  const size_t total = scores.size();
  size_t m = subset_size == 0 ? std::max<size_t>(static_cast<size_t>(n), total / 10)
                              : subset_size;
  m = std::clamp<size_t>(m, static_cast<size_t>(n), total);
  std::mt19937_64 rng(seed);
  std::vector<size_t> idx(total);
  std::iota(idx.begin(), idx.end(), 0);
  HitProbability out;
  for (int t = 0; t < trials; ++t) {
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<size_t> pick(idx.begin(), idx.begin() + static_cast<long>(m));
    std::sort(pick.begin(), pick.end());
    std::vector<double> s;
    std::vector<int> l;
    for (size_t i : pick) {
      s.push_back(scores[i]);
      l.push_back(labels[i]);
    }
    out.model += topn_hit(s, l, n);
    out.random += hypergeometric_hit_probability(
        static_cast<int64_t>(m), std::count(l.begin(), l.end(), 1), n);
  }
  out.model /= trials;
  out.random /= trials;
  return out;
}

}  // namespace muse::models
