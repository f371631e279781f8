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

// Variational graph autoencoder with GCN encoders and an inner-product
// decoder.
//
// Two encoder towers produce the posterior mean and log-variance:
//
//   H_0 = X,  H_{l+1} = ReLU(Ã H_l W_l)        (hidden layers)
//   mu = (Ã H_{L-1}) W_out_mu,  logvar = (Ã H_{L-1}) W_out_sigma
//
// With weight sharing (ws) the towers use the same hidden matrices, so the
// hidden stack is evaluated once and both outputs are linear maps of the same
// basis B = Ã H_{L-1}. Without ws each tower has its own hidden matrices.
//
// Training minimizes  norm * recon + kl_scale * kl  where recon is the
// pos_weight-weighted binary cross-entropy averaged over every entry of the
// reconstructed adjacency, and kl is the per-node average of
// KL(N(mu_i, diag(exp(logvar_i))) || N(0, I)).

#ifndef WSVGAE_MODEL_HPP_
#define WSVGAE_MODEL_HPP_

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wsvgae/graph.hpp"
#include "wsvgae/ndmath.hpp"

namespace wsvgae {

/// Encoder weights for both towers. When ws() is true the hidden matrices
/// exist once and hidden_sigma(l) aliases hidden_mu(l).
class EncoderParams {
 public:
  EncoderParams() = default;

  /// Glorot-initialized parameters. `hidden_dims` has one entry per hidden
  /// layer (L - 1 entries for an L-layer encoder).
  static EncoderParams init(Index input_dim, std::vector<Index> hidden_dims,
                            Index latent_dim, bool ws, RngStream& rng);
  /// Same layout, all zeros. Used as the gradient container.
  static EncoderParams zeros_like(const EncoderParams& other);

  bool ws() const { return ws_; }
  /// Number of GCN layers L (hidden layers + output layer).
  Index layers() const { return static_cast<Index>(hidden_mu_.size()) + 1; }
  Index hidden_layers() const { return static_cast<Index>(hidden_mu_.size()); }
  /// [input_dim, hidden..., latent_dim]
  const std::vector<Index>& dims() const { return dims_; }
  Index input_dim() const { return dims_.front(); }
  Index latent_dim() const { return dims_.back(); }

  DenseMatrix& hidden_mu(Index l) { return hidden_mu_[l]; }
  const DenseMatrix& hidden_mu(Index l) const { return hidden_mu_[l]; }
  DenseMatrix& hidden_sigma(Index l) { return ws_ ? hidden_mu_[l] : hidden_sigma_[l]; }
  const DenseMatrix& hidden_sigma(Index l) const {
    return ws_ ? hidden_mu_[l] : hidden_sigma_[l];
  }
  DenseMatrix& out_mu() { return out_mu_; }
  const DenseMatrix& out_mu() const { return out_mu_; }
  DenseMatrix& out_sigma() { return out_sigma_; }
  const DenseMatrix& out_sigma() const { return out_sigma_; }

  /// A no-ws copy whose two towers both hold this model's hidden weights.
  EncoderParams untied() const;

  struct Tensor {
    std::string name;
    DenseMatrix* value;
  };
  struct ConstTensor {
    std::string name;
    const DenseMatrix* value;
  };
  /// Every distinct weight matrix with its stable name (w_hidden_<l> or
  /// w_hidden_mu_<l> / w_hidden_sigma_<l>, then w_out_mu, w_out_sigma).
  std::vector<Tensor> tensors();
  std::vector<ConstTensor> tensors() const;

 private:
  friend EncoderParams make_params(bool ws, std::vector<Index> dims);

  bool ws_ = true;
  std::vector<Index> dims_;
  std::vector<DenseMatrix> hidden_mu_;
  std::vector<DenseMatrix> hidden_sigma_;  // empty when ws_
  DenseMatrix out_mu_;
  DenseMatrix out_sigma_;
};

/// Distinct scalar weights; shared matrices are counted once.
Index param_count(const EncoderParams& params);

struct Posterior {
  DenseMatrix mu;
  DenseMatrix logvar;  // log sigma^2
};

struct EmbeddingSample {
  DenseMatrix z;
  DenseMatrix eps;
};

/// Inverted-dropout masks applied to hidden activations H_1..H_{L-1}, one
/// list per tower (only `mu` is used when ws). Entries are 0 or 1/(1-rate).
struct DropoutMasks {
  std::vector<DenseMatrix> mu;
  std::vector<DenseMatrix> sigma;
};

DropoutMasks draw_dropout_masks(const EncoderParams& params, Index n,
                                double rate, RngStream& rng);

/// Forward intermediates kept for the backward pass.
struct EncoderCache {
  struct Tower {
    std::vector<DenseMatrix> inputs;  // H_l (after dropout), l = 0 is unused for X
    std::vector<DenseMatrix> pre;     // Ã H_l W_l before ReLU
    DenseMatrix basis;                // Ã H_{L-1}
  };
  Tower mu;
  Tower sigma;  // empty when ws
  Posterior posterior;
};

EncoderCache encode_with_cache(const EncoderParams& params,
                               const NormalizedAdjacency& a_norm,
                               const FeatureMatrix& x,
                               const DropoutMasks* masks = nullptr);

Posterior encode(const EncoderParams& params, const NormalizedAdjacency& a_norm,
                 const FeatureMatrix& x);

/// The shared basis B = Ã ReLU(... Ã X W_0 ...) of a ws model; mu and logvar
/// are B * out_mu and B * out_sigma. Throws for no-ws parameters.
DenseMatrix shared_basis(const EncoderParams& params,
                         const NormalizedAdjacency& a_norm,
                         const FeatureMatrix& x);

/// z = mu + exp(logvar / 2) * eps with eps ~ N(0, I).
EmbeddingSample reparameterize(const Posterior& post, RngStream& rng);
DenseMatrix sample_with(const Posterior& post, const DenseMatrix& eps);

inline constexpr Index kDefaultDecodeNodeLimit = 20000;

/// Full n x n logit matrix z_i . z_j (exactly symmetric). Refused above
/// `node_limit` nodes.
DenseMatrix decode_logits(const DenseMatrix& z,
                          Index node_limit = kDefaultDecodeNodeLimit);
/// Logits for the given pairs only.
std::vector<double> decode_logits(const DenseMatrix& z,
                                  std::span<const NodePair> pairs);

struct ClassWeights {
  double norm = 1.0;
  double pos_weight = 1.0;
};

/// pos_weight = (N - s) / s and norm = N / (2 (N - s)) with N = n^2 target
/// entries of which s are positive.
ClassWeights class_weights(Index n, Index positives);

/// Reconstruction target: the binary adjacency of `graph` (plus the identity
/// when self_loops), restricted to `nodes` when a subset is decoded.
class ReconTarget {
 public:
  static ReconTarget full(const SparseGraph& graph, bool self_loops = true);
  static ReconTarget subset(const SparseGraph& graph, std::span<const Index> nodes,
                            bool self_loops = true);

  const SparseGraph& graph() const { return graph_; }
  /// Empty when every node is decoded; otherwise the decoded node ids.
  const std::vector<Index>& nodes() const { return nodes_; }
  bool self_loops() const { return self_loops_; }
  Index size() const { return graph_.n(); }
  Index positives() const;
  ClassWeights weights() const { return class_weights(size(), positives()); }

 private:
  SparseGraph graph_;
  std::vector<Index> nodes_;
  bool self_loops_ = true;
};

struct LossOptions {
  double kl_scale = 1.0;
};

struct LossBreakdown {
  double total = 0.0;
  double recon = 0.0;
  double kl = 0.0;
  double norm = 1.0;
  double pos_weight = 1.0;
  double kl_scale = 1.0;
};

/// Loss for a full-graph logit matrix (n x n) against `target`.
LossBreakdown elbo_loss(const DenseMatrix& logits, const ReconTarget& target,
                        const Posterior& post, ClassWeights weights,
                        LossOptions options = {});

/// Per-node mean KL divergence to the unit Gaussian prior.
double kl_divergence(const Posterior& post);

struct Gradients {
  LossBreakdown loss;
  EncoderParams grads;  // same layout as the parameters
};

/// Loss and analytic gradients for one training step with a frozen eps.
/// For ws models the shared hidden matrices receive the sum of both towers'
/// contributions.
Gradients backward(const EncoderParams& params, const NormalizedAdjacency& a_norm,
                   const FeatureMatrix& x, const ReconTarget& target,
                   const DenseMatrix& eps, LossOptions options = {},
                   const DropoutMasks* masks = nullptr);

/// Text checkpoint; doubles are written in shortest round-trip form so a
/// reload reproduces encode() exactly.
void save_checkpoint(std::ostream& out, const EncoderParams& params);
EncoderParams load_checkpoint(std::istream& in);

}  // namespace wsvgae

#endif  // WSVGAE_MODEL_HPP_
