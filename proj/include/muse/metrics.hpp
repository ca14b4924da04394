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
#include <vector>

namespace muse::models {

// Mann-Whitney AUC via average ranks: P(s+ > s-) + P(tie) / 2.
// ValidationError unless both classes are present.
double auc(const std::vector<double>& scores, const std::vector<int>& labels);

struct RocPoint {
  double fpr;
  double tpr;
  double threshold;  // scores >= threshold are called positive
};

// Threshold sweep from (0,0) to (1,1); tied scores form one step.
std::vector<RocPoint> roc_curve(const std::vector<double>& scores,
                                const std::vector<int>& labels);
double trapezoid_area(const std::vector<RocPoint>& curve);

// Fraction of positives among the n best-scored items. Ties keep input
// order. ValidationError for n outside 1..N.
double topn_precision(const std::vector<double>& scores,
                      const std::vector<int>& labels, int n);

// 1 when the n best-scored items hold at least one positive.
double topn_hit(const std::vector<double>& scores, const std::vector<int>& labels,
                int n);

// Chance that n items drawn without replacement from total items, of which
// positives are positive, include at least one: 1 - C(N-P, n) / C(N, n).
double hypergeometric_hit_probability(int64_t total, int64_t positives, int64_t n);

struct HitProbability {
  double model = 0.0;
  double random = 0.0;
};

// Averages topn_hit over trials random evaluation subsets of subset_size
// items (0 picks max(n, N / 10)); the random baseline is the hypergeometric
// probability for each drawn subset, averaged the same way.
HitProbability topn_hit_probability(const std::vector<double>& scores,
                                    const std::vector<int>& labels, int n,
                                    int trials, uint64_t seed,
                                    size_t subset_size = 0);

}  // namespace muse::models
