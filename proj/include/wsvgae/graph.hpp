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

#ifndef WSVGAE_GRAPH_HPP_
#define WSVGAE_GRAPH_HPP_

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "wsvgae/ndmath.hpp"

namespace wsvgae {

/// Undirected node pair, stored with first < second.
struct NodePair {
  Index first = 0;
  Index second = 0;

  friend bool operator==(const NodePair&, const NodePair&) = default;
  friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

/// Immutable undirected graph over nodes [0, n), stored as a symmetric CSR
/// adjacency without self-loops or duplicate entries. `weights` is empty for
/// binary graphs.
class SparseGraph {
 public:
  SparseGraph() = default;

  /// Builds a graph from arbitrary (possibly directed, duplicated or looped)
  /// edges. Pairs are symmetrized, self-loops dropped and duplicates merged
  /// (first occurrence wins for weights). Zero-weight edges are dropped.
  static SparseGraph from_edges(Index n, std::span<const NodePair> edges,
                                std::span<const double> weights = {});

  Index n() const { return n_; }
  Index m() const { return static_cast<Index>(col_indices_.size()) / 2; }
  bool weighted() const { return !weights_.empty(); }

  const std::vector<Index>& row_offsets() const { return row_offsets_; }
  const std::vector<Index>& col_indices() const { return col_indices_; }
  const std::vector<double>& weights() const { return weights_; }

  std::span<const Index> neighbors(Index i) const;
  std::span<const double> neighbor_weights(Index i) const;
  Index degree(Index i) const { return row_offsets_[i + 1] - row_offsets_[i]; }
  /// Row sum of A (equals degree() on binary graphs).
  double weighted_degree(Index i) const;
  bool has_edge(Index i, Index j) const;

  /// Every undirected edge once, as (i < j), in row-major order.
  std::vector<NodePair> edges() const;
  std::vector<double> edge_weights() const;

 private:
  Index n_ = 0;
  std::vector<Index> row_offsets_{0};
  std::vector<Index> col_indices_;
  std::vector<double> weights_;
};

/// Node features. The featureless case (X = I_n) is flagged and never
/// materialized.
class FeatureMatrix {
 public:
  static FeatureMatrix identity(Index n);
  static FeatureMatrix dense(DenseMatrix values);

  Index n() const { return n_; }
  Index dim() const { return is_identity_ ? n_ : values_.cols(); }
  bool is_identity() const { return is_identity_; }
  /// Only valid when !is_identity().
  const DenseMatrix& values() const { return values_; }

 private:
  Index n_ = 0;
  bool is_identity_ = true;
  DenseMatrix values_;
};

/// Ã = (D+I)^(-1/2) (A+I) (D+I)^(-1/2), diagonal included.
class NormalizedAdjacency {
 public:
  explicit NormalizedAdjacency(CsrMatrix matrix) : matrix_(std::move(matrix)) {}

  Index n() const { return matrix_.n; }
  const CsrMatrix& matrix() const { return matrix_; }

 private:
  CsrMatrix matrix_;
};

NormalizedAdjacency normalize(const SparseGraph& graph);

/// Masked link-prediction split. Positive pairs come from the original
/// graph; negative pairs are non-edges of the original graph.
struct EdgeSplit {
  SparseGraph train_graph;
  std::vector<NodePair> val_pos;
  std::vector<NodePair> val_neg;
  std::vector<NodePair> test_pos;
  std::vector<NodePair> test_neg;
  std::uint64_t seed = 0;
};

EdgeSplit split_edges(const SparseGraph& graph, double val_frac,
                      double test_frac, std::uint64_t seed);

/// Samples `sample_size` distinct nodes with probability proportional to
/// degree^alpha, without replacement. Isolated nodes get the smallest
/// positive weight. Returned indices are sorted.
std::vector<Index> degree_sample(const SparseGraph& graph, Index sample_size,
                                 double alpha, std::uint64_t seed);

struct InducedSubgraph {
  SparseGraph graph;
  /// Old node id for each new id (the input node list).
  std::vector<Index> new_to_old;
  /// New id for each old node, -1 when not selected.
  std::vector<Index> old_to_new;
};

InducedSubgraph induced_subgraph(const SparseGraph& graph,
                                 std::span<const Index> nodes);

/// Ground-truth communities: labels in [0, k), k >= 2.
class CommunityLabels {
 public:
  CommunityLabels() = default;
  explicit CommunityLabels(std::vector<Index> labels);

  Index n() const { return static_cast<Index>(labels_.size()); }
  Index k() const { return k_; }
  const std::vector<Index>& labels() const { return labels_; }

 private:
  std::vector<Index> labels_;
  Index k_ = 0;
};

struct SbmGraph {
  SparseGraph graph;
  CommunityLabels labels;
};

/// Stochastic block model: intra-block pairs are edges with probability
/// p_in, inter-block pairs with p_out, independently.
SbmGraph sbm_generate(std::span<const Index> block_sizes, double p_in,
                      double p_out, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Text formats

enum class EdgeListFormat { kTsvPairs, kTsvWeighted };

struct LoadedGraph {
  SparseGraph graph;
  /// File node id of each dense node index, in order of first appearance.
  std::vector<std::int64_t> original_ids;
};

/// Whitespace-separated "u v" (or "u v w") lines, '#' comments.
LoadedGraph load_edge_list(std::istream& in, EdgeListFormat format);

/// "node_id label_id" per line; every node must be labelled. Label ids are
/// re-indexed densely in increasing order.
CommunityLabels load_labels(std::istream& in,
                            std::span<const std::int64_t> original_ids);

/// "node_id dim value" sparse triplets. `dim_hint` fixes the feature
/// dimension (0 = max dim + 1). Nodes without entries get zero rows.
FeatureMatrix load_features(std::istream& in,
                            std::span<const std::int64_t> original_ids,
                            Index dim_hint = 0);

}  // namespace wsvgae

#endif  // WSVGAE_GRAPH_HPP_
