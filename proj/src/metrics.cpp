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

#include "wsvgae/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wsvgae/error.hpp"

namespace wsvgae {

ScoredPairs ScoredPairs::from(std::span<const double> positive,
                              std::span<const double> negative) {
  ScoredPairs sp;
  sp.scores.assign(positive.begin(), positive.end());
  sp.scores.insert(sp.scores.end(), negative.begin(), negative.end());
  sp.labels.assign(positive.size(), 1);
  sp.labels.insert(sp.labels.end(), negative.size(), 0);
  return sp;
}

namespace {

struct ClassCounts {
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

ClassCounts validate(const ScoredPairs& sp) {
  if (sp.scores.size() != sp.labels.size()) {
    throw InvalidArgument("scores and labels differ in length");
  }
  ClassCounts c;
  for (std::size_t i = 0; i < sp.scores.size(); ++i) {
    if (std::isnan(sp.scores[i])) throw InvalidArgument("NaN score");
    if (sp.labels[i] == 1) {
      ++c.positives;
    } else if (sp.labels[i] == 0) {
      ++c.negatives;
    } else {
      throw InvalidArgument("labels must be 0 or 1");
    }
  }
  return c;
}

}  // namespace

double roc_auc(const ScoredPairs& sp) {
  const ClassCounts c = validate(sp);
  if (c.positives == 0 || c.negatives == 0) {
    throw InvalidArgument("roc_auc: need at least one positive and one negative");
  }
  const std::size_t n = sp.scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return sp.scores[a] < sp.scores[b]; });
  // Sum of mid-ranks (1-based) of the positives.
  double rank_sum = 0.0;
  for (std::size_t lo = 0; lo < n;) {
    std::size_t hi = lo + 1;
    while (hi < n && sp.scores[order[hi]] == sp.scores[order[lo]]) ++hi;
    const double mid_rank = 0.5 * static_cast<double>(lo + 1 + hi);
    for (std::size_t k = lo; k < hi; ++k) {
      if (sp.labels[order[k]] == 1) rank_sum += mid_rank;
    }
    lo = hi;
  }
  const double p = static_cast<double>(c.positives);
  const double q = static_cast<double>(c.negatives);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * q);
}

double average_precision(const ScoredPairs& sp) {
  const ClassCounts c = validate(sp);
  if (c.positives == 0) throw InvalidArgument("average_precision: no positives");
  std::vector<std::size_t> order(sp.scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sp.scores[a] > sp.scores[b];
  });
  double hits = 0.0;
  double sum = 0.0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (sp.labels[order[r]] == 1) {
      hits += 1.0;
      sum += hits / static_cast<double>(r + 1);
    }
  }
  return sum / static_cast<double>(c.positives);
}

namespace {

double squared_distance(const DenseMatrix& a, Index i, const DenseMatrix& b, Index j) {
  return (a.row(i) - b.row(j)).squaredNorm();
}

DenseMatrix kmeanspp_seed(const DenseMatrix& x, Index k, RngStream& rng) {
  const Index n = x.rows();
  DenseMatrix centers(k, x.cols());
  centers.row(0) = x.row(static_cast<Index>(rng.uniform_index(n)));
  std::vector<double> d2(n);
  for (Index i = 0; i < n; ++i) d2[i] = squared_distance(x, i, centers, 0);
  for (Index c = 1; c < k; ++c) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    Index pick = n - 1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (Index i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Index>(rng.uniform_index(n));
    }
    centers.row(c) = x.row(pick);
    for (Index i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(x, i, centers, c));
    }
  }
  return centers;
}

Clustering lloyd(const DenseMatrix& x, Index k, const KMeansOptions& options,
                 RngStream& rng) {
  const Index n = x.rows();
  DenseMatrix centers = kmeanspp_seed(x, k, rng);
  Clustering out;
  out.k = k;
  out.assignments.assign(n, -1);
  std::vector<double> dist(n);

  for (Index iter = 0; iter < options.max_iter; ++iter) {
    bool changed = false;
    double inertia = 0.0;
    for (Index i = 0; i < n; ++i) {
      Index best = 0;
      double best_d = squared_distance(x, i, centers, 0);
      for (Index c = 1; c < k; ++c) {
        const double d = squared_distance(x, i, centers, c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      changed |= out.assignments[i] != best;
      out.assignments[i] = best;
      dist[i] = best_d;
      inertia += best_d;
    }
    const double previous =
        out.inertia_history.empty() ? std::numeric_limits<double>::infinity()
                                    : out.inertia_history.back();
    out.inertia_history.push_back(inertia);
    out.inertia = inertia;
    if (!changed) break;
    if (options.tolerance > 0.0 && previous - inertia <= options.tolerance) break;

    // Centroid update.
    DenseMatrix sums = DenseMatrix::Zero(k, x.cols());
    std::vector<Index> counts(k, 0);
    for (Index i = 0; i < n; ++i) {
      sums.row(out.assignments[i]) += x.row(i);
      ++counts[out.assignments[i]];
    }
    std::vector<char> taken(n, 0);
    for (Index c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centers.row(c) = sums.row(c) / static_cast<double>(counts[c]);
        continue;
      }
      // Empty cluster: move it onto the point farthest from its center.
      Index far = -1;
      for (Index i = 0; i < n; ++i) {
        if (!taken[i] && (far < 0 || dist[i] > dist[far])) far = i;
      }
      if (far >= 0 && dist[far] > 0.0) {
        centers.row(c) = x.row(far);
        taken[far] = 1;
        dist[far] = 0.0;
      }
    }
  }
  return out;
}

}  // namespace

Clustering kmeans(const DenseMatrix& points, Index k, KMeansOptions options,
                  RngStream& rng) {
  if (k < 2) throw InvalidArgument("kmeans: k must be at least 2");
  if (k > points.rows()) {
    throw InvalidArgument("kmeans: k = " + std::to_string(k) + " exceeds " +
                          std::to_string(points.rows()) + " points");
  }
  if (options.restarts < 1 || options.max_iter < 1) {
    throw InvalidArgument("kmeans: restarts and max_iter must be positive");
  }
  // Per-restart substreams so results do not depend on execution order.
  std::vector<std::uint64_t> seeds(options.restarts);
  for (auto& s : seeds) s = rng.next_u64();
  Clustering best;
  for (Index r = 0; r < options.restarts; ++r) {
    RngStream sub(seeds[r]);
    Clustering c = lloyd(points, k, options, sub);
    if (r == 0 || c.inertia < best.inertia) best = std::move(c);
  }
  return best;
}

namespace {

struct Contingency {
  std::vector<double> row_sums;
  std::vector<double> col_sums;
  std::vector<std::vector<double>> cells;  // dense rows x cols
  double n = 0.0;
};

std::vector<Index> dense_ids(std::span<const Index> labels, Index& classes) {
  std::vector<Index> sorted(labels.begin(), labels.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  classes = static_cast<Index>(sorted.size());
  std::vector<Index> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out[i] = std::lower_bound(sorted.begin(), sorted.end(), labels[i]) - sorted.begin();
  }
  return out;
}

Contingency contingency(std::span<const Index> a, std::span<const Index> b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("labelings differ in length (" + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()) + ")");
  }
  if (a.empty()) throw InvalidArgument("labelings are empty");
  Index ka = 0, kb = 0;
  const auto da = dense_ids(a, ka);
  const auto db = dense_ids(b, kb);
  Contingency c;
  c.row_sums.assign(ka, 0.0);
  c.col_sums.assign(kb, 0.0);
  c.cells.assign(ka, std::vector<double>(kb, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    c.cells[da[i]][db[i]] += 1.0;
    c.row_sums[da[i]] += 1.0;
    c.col_sums[db[i]] += 1.0;
  }
  c.n = static_cast<double>(a.size());
  return c;
}

double entropy(const std::vector<double>& counts, double n) {
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) h -= (c / n) * std::log(c / n);
  }
  return h;
}

double choose2(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace

double ami(std::span<const Index> a, std::span<const Index> b) {
  const Contingency c = contingency(a, b);
  const std::size_t ka = c.row_sums.size();
  const std::size_t kb = c.col_sums.size();
  if (ka == kb && (ka == 1 || ka == static_cast<std::size_t>(c.n))) return 1.0;

  const double n = c.n;
  double mi = 0.0;
  for (std::size_t i = 0; i < ka; ++i) {
    for (std::size_t j = 0; j < kb; ++j) {
      const double nij = c.cells[i][j];
      if (nij > 0.0) {
        mi += (nij / n) * std::log(n * nij / (c.row_sums[i] * c.col_sums[j]));
      }
    }
  }

  // Expected MI under random permutations with fixed marginals.
  const double lg_n = std::lgamma(n + 1.0);
  double emi = 0.0;
  for (std::size_t i = 0; i < ka; ++i) {
    const double ai = c.row_sums[i];
    for (std::size_t j = 0; j < kb; ++j) {
      const double bj = c.col_sums[j];
      const double lo = std::max(1.0, ai + bj - n);
      const double hi = std::min(ai, bj);
      const double fixed = std::lgamma(ai + 1.0) + std::lgamma(bj + 1.0) +
                           std::lgamma(n - ai + 1.0) + std::lgamma(n - bj + 1.0) - lg_n;
      for (double nij = lo; nij <= hi; nij += 1.0) {
        const double log_p = fixed - std::lgamma(nij + 1.0) - std::lgamma(ai - nij + 1.0) -
                             std::lgamma(bj - nij + 1.0) -
                             std::lgamma(n - ai - bj + nij + 1.0);
        emi += (nij / n) * std::log(n * nij / (ai * bj)) * std::exp(log_p);
      }
    }
  }

  const double normalizer = 0.5 * (entropy(c.row_sums, n) + entropy(c.col_sums, n));
  double denominator = normalizer - emi;
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  denominator = denominator < 0.0 ? std::min(denominator, -kEps) : std::max(denominator, kEps);
  return (mi - emi) / denominator;
}

double ari(std::span<const Index> a, std::span<const Index> b) {
  const Contingency c = contingency(a, b);
  double index = 0.0;
  for (const auto& row : c.cells) {
    for (double nij : row) index += choose2(nij);
  }
  double sum_a = 0.0, sum_b = 0.0;
  for (double x : c.row_sums) sum_a += choose2(x);
  for (double x : c.col_sums) sum_b += choose2(x);
  const double total = choose2(c.n);
  const double expected = total > 0.0 ? sum_a * sum_b / total : 0.0;
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

}  // namespace wsvgae
