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

#include "wsvgae/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

#include "wsvgae/error.hpp"

namespace wsvgae {

SparseGraph SparseGraph::from_edges(Index n, std::span<const NodePair> edges,
                                    std::span<const double> weights) {
  if (n < 0) throw InvalidArgument("from_edges: negative node count");
  const bool weighted = !weights.empty();
  if (weighted && weights.size() != edges.size()) {
    throw InvalidArgument("from_edges: weights/edges length mismatch");
  }

  struct Entry {
    Index row;
    Index col;
    std::size_t order;
  };
  std::vector<Entry> entries;
  entries.reserve(edges.size() * 2);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [u, v] = edges[e];
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw InvalidArgument("from_edges: node index out of range");
    }
    if (u == v) continue;
    if (weighted) {
      if (!(weights[e] >= 0.0) || !std::isfinite(weights[e])) {
        throw InvalidArgument("from_edges: weights must be finite and >= 0");
      }
      if (weights[e] == 0.0) continue;
    }
    entries.push_back({u, v, e});
    entries.push_back({v, u, e});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.row != b.row) return a.row < b.row;
    if (a.col != b.col) return a.col < b.col;
    return a.order < b.order;
  });

  SparseGraph g;
  g.n_ = n;
  g.row_offsets_.assign(n + 1, 0);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (k > 0 && entries[k].row == entries[k - 1].row &&
        entries[k].col == entries[k - 1].col) {
      continue;
    }
    g.col_indices_.push_back(entries[k].col);
    if (weighted) g.weights_.push_back(weights[entries[k].order]);
    ++g.row_offsets_[entries[k].row + 1];
  }
  std::partial_sum(g.row_offsets_.begin(), g.row_offsets_.end(),
                   g.row_offsets_.begin());
  return g;
}

std::span<const Index> SparseGraph::neighbors(Index i) const {
  return {col_indices_.data() + row_offsets_[i],
          static_cast<std::size_t>(degree(i))};
}

std::span<const double> SparseGraph::neighbor_weights(Index i) const {
  if (!weighted()) return {};
  return {weights_.data() + row_offsets_[i],
          static_cast<std::size_t>(degree(i))};
}

double SparseGraph::weighted_degree(Index i) const {
  if (!weighted()) return static_cast<double>(degree(i));
  double sum = 0.0;
  for (double w : neighbor_weights(i)) sum += w;
  return sum;
}

bool SparseGraph::has_edge(Index i, Index j) const {
  const auto row = neighbors(i);
  return std::binary_search(row.begin(), row.end(), j);
}

std::vector<NodePair> SparseGraph::edges() const {
  std::vector<NodePair> out;
  out.reserve(m());
  for (Index i = 0; i < n_; ++i) {
    for (Index j : neighbors(i)) {
      if (i < j) out.push_back({i, j});
    }
  }
  return out;
}

std::vector<double> SparseGraph::edge_weights() const {
  std::vector<double> out;
  if (!weighted()) return out;
  out.reserve(m());
  for (Index i = 0; i < n_; ++i) {
    const auto row = neighbors(i);
    const auto w = neighbor_weights(i);
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (i < row[k]) out.push_back(w[k]);
    }
  }
  return out;
}

FeatureMatrix FeatureMatrix::identity(Index n) {
  FeatureMatrix f;
  f.n_ = n;
  f.is_identity_ = true;
  return f;
}

FeatureMatrix FeatureMatrix::dense(DenseMatrix values) {
  if (!all_finite(values)) {
    throw InvalidArgument("FeatureMatrix: values must be finite");
  }
  FeatureMatrix f;
  f.n_ = values.rows();
  f.is_identity_ = false;
  f.values_ = std::move(values);
  return f;
}

NormalizedAdjacency normalize(const SparseGraph& graph) {
  const Index n = graph.n();
  std::vector<double> inv_sqrt(n);
  for (Index i = 0; i < n; ++i) {
    inv_sqrt[i] = 1.0 / std::sqrt(graph.weighted_degree(i) + 1.0);
  }

  CsrMatrix a;
  a.n = n;
  a.row_offsets.assign(n + 1, 0);
  a.col_indices.reserve(graph.col_indices().size() + n);
  a.values.reserve(graph.col_indices().size() + n);
  for (Index i = 0; i < n; ++i) {
    const auto row = graph.neighbors(i);
    const auto w = graph.neighbor_weights(i);
    bool diagonal_done = false;
    auto emit_diagonal = [&] {
      a.col_indices.push_back(i);
      a.values.push_back(inv_sqrt[i] * inv_sqrt[i]);
      diagonal_done = true;
    };
    for (std::size_t k = 0; k < row.size(); ++k) {
      const Index j = row[k];
      if (!diagonal_done && j > i) emit_diagonal();
      const double weight = w.empty() ? 1.0 : w[k];
      a.col_indices.push_back(j);
      a.values.push_back(inv_sqrt[i] * weight * inv_sqrt[j]);
    }
    if (!diagonal_done) emit_diagonal();
    a.row_offsets[i + 1] = static_cast<Index>(a.col_indices.size());
  }
  return NormalizedAdjacency(std::move(a));
}

namespace {

std::uint64_t pair_key(Index i, Index j, Index n) {
  return static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n) +
         static_cast<std::uint64_t>(j);
}

Index rounded_count(Index m, double frac) {
  return static_cast<Index>(std::llround(static_cast<double>(m) * frac));
}

}  // namespace

EdgeSplit split_edges(const SparseGraph& graph, double val_frac,
                      double test_frac, std::uint64_t seed) {
  if (!(val_frac >= 0.0 && val_frac < 1.0) ||
      !(test_frac >= 0.0 && test_frac < 1.0) || val_frac + test_frac >= 1.0) {
    throw InvalidArgument(
        "split_edges: fractions must be in [0, 1) with val + test < 1");
  }
  const Index m = graph.m();
  const Index n_val = rounded_count(m, val_frac);
  const Index n_test = rounded_count(m, test_frac);
  if ((val_frac > 0.0 && n_val == 0) || (test_frac > 0.0 && n_test == 0)) {
    throw InvalidArgument("split_edges: graph has too few edges (m = " +
                          std::to_string(m) + ") for the requested fractions");
  }
  if (n_val + n_test > m) {
    throw InvalidArgument("split_edges: fractions exceed the edge count");
  }

  const Index n = graph.n();
  const Index needed = n_val + n_test;
  const Index non_edges = n * (n - 1) / 2 - m;
  if (needed > non_edges) {
    throw InvalidArgument("split_edges: graph has " + std::to_string(non_edges) +
                          " non-edges, cannot supply " + std::to_string(needed) +
                          " negative pairs");
  }

  RngStream rng(seed);
  std::vector<NodePair> edges = graph.edges();
  std::vector<double> weights = graph.edge_weights();
  std::vector<Index> order(edges.size());
  std::iota(order.begin(), order.end(), Index{0});
  // Partial Fisher-Yates: the first n_val + n_test slots are a uniform sample
  // without replacement.
  for (Index k = 0; k < needed; ++k) {
    const Index pick =
        k + static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(m - k)));
    std::swap(order[k], order[pick]);
  }

  EdgeSplit split;
  split.seed = seed;
  split.val_pos.reserve(n_val);
  split.test_pos.reserve(n_test);
  for (Index k = 0; k < n_val; ++k) split.val_pos.push_back(edges[order[k]]);
  for (Index k = n_val; k < needed; ++k) split.test_pos.push_back(edges[order[k]]);

  std::vector<char> masked(edges.size(), 0);
  for (Index k = 0; k < needed; ++k) masked[order[k]] = 1;
  std::vector<NodePair> train_edges;
  std::vector<double> train_weights;
  train_edges.reserve(m - needed);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (masked[e]) continue;
    train_edges.push_back(edges[e]);
    if (!weights.empty()) train_weights.push_back(weights[e]);
  }
  split.train_graph = SparseGraph::from_edges(n, train_edges, train_weights);

  // Rejection sampling of non-edges of the original graph.
  std::unordered_set<std::uint64_t> taken;
  taken.reserve(static_cast<std::size_t>(needed) * 2);
  const Index max_attempts = 10000 + 100 * needed;
  Index attempts = 0;
  auto draw_negative = [&]() -> NodePair {
    while (attempts++ < max_attempts) {
      Index i = static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
      Index j = static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
      if (i == j) continue;
      if (i > j) std::swap(i, j);
      if (graph.has_edge(i, j)) continue;
      if (!taken.insert(pair_key(i, j, n)).second) continue;
      return {i, j};
    }
    throw InvalidArgument("split_edges: graph too dense, gave up sampling "
                          "negative pairs after " +
                          std::to_string(max_attempts) + " attempts");
  };
  split.val_neg.reserve(n_val);
  split.test_neg.reserve(n_test);
  for (Index k = 0; k < n_val; ++k) split.val_neg.push_back(draw_negative());
  for (Index k = 0; k < n_test; ++k) split.test_neg.push_back(draw_negative());
  return split;
}

std::vector<Index> degree_sample(const SparseGraph& graph, Index sample_size,
                                 double alpha, std::uint64_t seed) {
  const Index n = graph.n();
  if (sample_size < 1 || sample_size > n) {
    throw InvalidArgument("degree_sample: sample size " +
                          std::to_string(sample_size) + " not in [1, " +
                          std::to_string(n) + "]");
  }
  if (!(alpha >= 0.0)) throw InvalidArgument("degree_sample: alpha must be >= 0");

  std::vector<double> weight(n);
  double min_positive = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double deg = graph.weighted_degree(i);
    weight[i] = deg > 0.0 ? std::pow(deg, alpha) : 0.0;
    if (weight[i] > 0.0 && (min_positive == 0.0 || weight[i] < min_positive)) {
      min_positive = weight[i];
    }
  }
  if (min_positive == 0.0) min_positive = 1.0;
  for (double& w : weight) {
    if (w == 0.0) w = min_positive;
  }

  std::vector<Index> all(n);
  std::iota(all.begin(), all.end(), Index{0});
  if (sample_size == n) return all;

  // Efraimidis-Spirakis: the n_s largest keys log(u)/w form a weighted
  // sample without replacement.
  RngStream rng(seed);
  std::vector<double> key(n);
  for (Index i = 0; i < n; ++i) key[i] = std::log(rng.uniform_open()) / weight[i];
  auto by_key = [&](Index a, Index b) {
    if (key[a] != key[b]) return key[a] > key[b];
    return a < b;
  };
  std::nth_element(all.begin(), all.begin() + (sample_size - 1), all.end(), by_key);
  all.resize(sample_size);
  std::sort(all.begin(), all.end());
  return all;
}

InducedSubgraph induced_subgraph(const SparseGraph& graph,
                                 std::span<const Index> nodes) {
  InducedSubgraph sub;
  sub.old_to_new.assign(graph.n(), -1);
  sub.new_to_old.assign(nodes.begin(), nodes.end());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const Index v = nodes[k];
    if (v < 0 || v >= graph.n()) {
      throw InvalidArgument("induced_subgraph: node " + std::to_string(v) +
                            " out of range");
    }
    if (sub.old_to_new[v] != -1) {
      throw InvalidArgument("induced_subgraph: duplicate node " +
                            std::to_string(v));
    }
    sub.old_to_new[v] = static_cast<Index>(k);
  }
  std::vector<NodePair> edges;
  std::vector<double> weights;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const Index v = nodes[k];
    const auto row = graph.neighbors(v);
    const auto w = graph.neighbor_weights(v);
    for (std::size_t e = 0; e < row.size(); ++e) {
      const Index u = sub.old_to_new[row[e]];
      if (u < 0 || u <= static_cast<Index>(k)) continue;
      edges.push_back({static_cast<Index>(k), u});
      if (!w.empty()) weights.push_back(w[e]);
    }
  }
  sub.graph = SparseGraph::from_edges(static_cast<Index>(nodes.size()), edges,
                                      weights);
  return sub;
}

CommunityLabels::CommunityLabels(std::vector<Index> labels)
    : labels_(std::move(labels)) {
  Index max_label = -1;
  for (Index l : labels_) {
    if (l < 0) throw InvalidArgument("CommunityLabels: negative label");
    max_label = std::max(max_label, l);
  }
  k_ = max_label + 1;
  if (k_ < 2) {
    throw InvalidArgument("CommunityLabels: need at least two communities");
  }
}

namespace {

// Visits the pairs (row, col) with col in [col_begin(row), col_end) for rows
// [row_begin, row_end), keeping each with probability p. Geometric skipping
// makes the cost proportional to the number of kept pairs plus rows.
template <typename ColBegin, typename Emit>
void bernoulli_pairs(Index row_begin, Index row_end, ColBegin col_begin,
                     Index col_end, double p, RngStream& rng, Emit emit) {
  if (p <= 0.0) return;
  const double log_q = std::log1p(-p);
  auto gap = [&]() -> Index {
    if (p >= 1.0) return 0;
    const double g = std::floor(std::log(rng.uniform_open()) / log_q);
    return g > 1e15 ? Index{1'000'000'000'000'000} : static_cast<Index>(g);
  };
  Index row = row_begin;
  Index col = col_begin(row) - 1;
  while (row < row_end) {
    Index skip = gap() + 1;
    // Advance `skip` positions through the ragged row layout.
    while (row < row_end) {
      const Index remaining = col_end - col - 1;
      if (skip <= remaining) {
        col += skip;
        break;
      }
      skip -= remaining;
      ++row;
      if (row < row_end) col = col_begin(row) - 1;
    }
    if (row < row_end) emit(row, col);
  }
}

}  // namespace

SbmGraph sbm_generate(std::span<const Index> block_sizes, double p_in,
                      double p_out, std::uint64_t seed) {
  if (!(p_out >= 0.0 && p_out <= p_in && p_in <= 1.0)) {
    throw InvalidArgument("sbm_generate: need 0 <= p_out <= p_in <= 1");
  }
  if (block_sizes.size() < 2) {
    throw InvalidArgument("sbm_generate: need at least two blocks");
  }
  std::vector<Index> start{0};
  for (Index s : block_sizes) {
    if (s <= 0) throw InvalidArgument("sbm_generate: block sizes must be positive");
    start.push_back(start.back() + s);
  }
  const Index n = start.back();

  std::vector<Index> labels(n);
  for (std::size_t b = 0; b < block_sizes.size(); ++b) {
    std::fill(labels.begin() + start[b], labels.begin() + start[b + 1],
              static_cast<Index>(b));
  }

  RngStream rng(seed);
  std::vector<NodePair> edges;
  auto emit = [&](Index i, Index j) { edges.push_back({i, j}); };
  for (std::size_t a = 0; a < block_sizes.size(); ++a) {
    // Intra-block upper triangle.
    bernoulli_pairs(
        start[a], start[a + 1], [](Index row) { return row + 1; },
        start[a + 1], p_in, rng, emit);
    for (std::size_t b = a + 1; b < block_sizes.size(); ++b) {
      const Index first_col = start[b];
      bernoulli_pairs(
          start[a], start[a + 1], [first_col](Index) { return first_col; },
          start[b + 1], p_out, rng, emit);
    }
  }
  return {SparseGraph::from_edges(n, edges), CommunityLabels(std::move(labels))};
}

}  // namespace wsvgae
