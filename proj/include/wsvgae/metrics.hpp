/*
 * Copyright 2026 The wsvgae Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef WSVGAE_METRICS_HPP_
#define WSVGAE_METRICS_HPP_

#include <span>
#include <vector>

#include "wsvgae/ndmath.hpp"

namespace wsvgae {

/// Scores with parallel binary labels (1 = true edge).
struct ScoredPairs {
  std::vector<double> scores;
  std::vector<int> labels;

  static ScoredPairs from(std::span<const double> positive,
                          std::span<const double> negative);
};

/// Probability that a random positive outranks a random negative, ties
/// counted one half (Mann-Whitney with mid-ranks).
double roc_auc(const ScoredPairs& sp);

/// Step-interpolated average precision over the descending ranking. Equal
/// scores are ordered by their index in `sp` (stable).
double average_precision(const ScoredPairs& sp);

struct Clustering {
  std::vector<Index> assignments;
  Index k = 0;
  double inertia = 0.0;
  /// Inertia after each Lloyd iteration of the winning restart.
  std::vector<double> inertia_history;
};

struct KMeansOptions {
  Index restarts = 10;
  Index max_iter = 300;
  double tolerance = 0.0;  // stop when inertia improves by <= tolerance
};

/// Lloyd's algorithm with k-means++ seeding; best inertia over restarts.
/// Empty clusters are re-seeded with the point farthest from its centroid.
Clustering kmeans(const DenseMatrix& points, Index k, KMeansOptions options,
                  RngStream& rng);

/// Adjusted mutual information with arithmetic-mean normalization and the
/// expected MI of the permutation (hypergeometric) model.
double ami(std::span<const Index> a, std::span<const Index> b);

/// Adjusted Rand index.
double ari(std::span<const Index> a, std::span<const Index> b);

}  // namespace wsvgae

#endif  // WSVGAE_METRICS_HPP_
