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

#include "wsvgae/model.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "wsvgae/error.hpp"

namespace wsvgae {

EncoderParams make_params(bool ws, std::vector<Index> dims) {
  EncoderParams p;
  p.ws_ = ws;
  p.dims_ = std::move(dims);
  return p;
}

EncoderParams EncoderParams::init(Index input_dim, std::vector<Index> hidden_dims,
                                  Index latent_dim, bool ws, RngStream& rng) {
  if (hidden_dims.empty()) {
    throw InvalidArgument("EncoderParams: at least one hidden layer is required");
  }
  std::vector<Index> dims{input_dim};
  dims.insert(dims.end(), hidden_dims.begin(), hidden_dims.end());
  dims.push_back(latent_dim);
  for (Index d : dims) {
    if (d <= 0) throw InvalidArgument("EncoderParams: dimensions must be positive");
  }

  EncoderParams p = make_params(ws, dims);
  const std::size_t hidden = hidden_dims.size();
  for (std::size_t l = 0; l < hidden; ++l) {
    p.hidden_mu_.push_back(glorot_init(dims[l], dims[l + 1], rng));
  }
  if (!ws) {
    for (std::size_t l = 0; l < hidden; ++l) {
      p.hidden_sigma_.push_back(glorot_init(dims[l], dims[l + 1], rng));
    }
  }
  p.out_mu_ = glorot_init(dims[hidden], latent_dim, rng);
  p.out_sigma_ = glorot_init(dims[hidden], latent_dim, rng);
  return p;
}

EncoderParams EncoderParams::zeros_like(const EncoderParams& other) {
  EncoderParams p = other;
  for (auto& t : p.tensors()) t.value->setZero();
  return p;
}

EncoderParams EncoderParams::untied() const {
  EncoderParams p = *this;
  if (ws_) {
    p.ws_ = false;
    p.hidden_sigma_ = hidden_mu_;
  }
  return p;
}

std::vector<EncoderParams::Tensor> EncoderParams::tensors() {
  std::vector<Tensor> out;
  for (std::size_t l = 0; l < hidden_mu_.size(); ++l) {
    out.push_back({(ws_ ? "w_hidden_" : "w_hidden_mu_") + std::to_string(l),
                   &hidden_mu_[l]});
  }
  for (std::size_t l = 0; l < hidden_sigma_.size(); ++l) {
    out.push_back({"w_hidden_sigma_" + std::to_string(l), &hidden_sigma_[l]});
  }
  out.push_back({"w_out_mu", &out_mu_});
  out.push_back({"w_out_sigma", &out_sigma_});
  return out;
}

std::vector<EncoderParams::ConstTensor> EncoderParams::tensors() const {
  std::vector<ConstTensor> out;
  for (auto& t : const_cast<EncoderParams*>(this)->tensors()) {
    out.push_back({t.name, t.value});
  }
  return out;
}

Index param_count(const EncoderParams& params) {
  Index total = 0;
  for (const auto& t : params.tensors()) total += t.value->size();
  return total;
}

DropoutMasks draw_dropout_masks(const EncoderParams& params, Index n,
                                double rate, RngStream& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw InvalidArgument("dropout rate must be in [0, 1)");
  }
  const double keep_scale = 1.0 / (1.0 - rate);
  auto draw = [&](std::vector<DenseMatrix>& out) {
    for (Index l = 1; l < params.layers(); ++l) {
      DenseMatrix m(n, params.dims()[l]);
      for (Index k = 0; k < m.size(); ++k) {
        m.data()[k] = rng.uniform() < rate ? 0.0 : keep_scale;
      }
      out.push_back(std::move(m));
    }
  };
  DropoutMasks masks;
  draw(masks.mu);
  if (!params.ws()) draw(masks.sigma);
  return masks;
}

namespace {

void check_shapes(const EncoderParams& params, const NormalizedAdjacency& a_norm,
                  const FeatureMatrix& x) {
  if (x.n() != a_norm.n()) {
    throw InvalidArgument("encode: features have " + std::to_string(x.n()) +
                          " rows, graph has " + std::to_string(a_norm.n()) +
                          " nodes");
  }
  if (x.dim() != params.input_dim()) {
    throw InvalidArgument("encode: feature dimension " + std::to_string(x.dim()) +
                          " does not match model input " +
                          std::to_string(params.input_dim()));
  }
}

// One tower's hidden stack and basis. `hidden(l)` yields W_l.
template <typename HiddenWeight>
EncoderCache::Tower forward_tower(const EncoderParams& params, HiddenWeight hidden,
                                  const NormalizedAdjacency& a_norm,
                                  const FeatureMatrix& x,
                                  const std::vector<DenseMatrix>* masks) {
  const Index hidden_layers = params.hidden_layers();
  EncoderCache::Tower tower;
  tower.inputs.resize(hidden_layers + 1);
  tower.pre.resize(hidden_layers);
  for (Index l = 0; l < hidden_layers; ++l) {
    const DenseMatrix& w = hidden(l);
    DenseMatrix xw;
    if (l == 0) {
      xw = x.is_identity() ? w : DenseMatrix(x.values() * w);
    } else {
      xw = tower.inputs[l] * w;
    }
    tower.pre[l] = spmm(a_norm.matrix(), xw);
    DenseMatrix act = relu(tower.pre[l]);
    if (masks != nullptr) act.array() *= (*masks)[l].array();
    tower.inputs[l + 1] = std::move(act);
  }
  tower.basis = spmm(a_norm.matrix(), tower.inputs[hidden_layers]);
  return tower;
}

// Backward through one tower's hidden stack, from the gradient w.r.t. the
// last hidden activation (before dropout) to the hidden weight gradients.
template <typename HiddenWeight, typename HiddenGrad>
void backward_hidden(const EncoderParams& params, HiddenWeight hidden,
                     HiddenGrad hidden_grad, const EncoderCache::Tower& tower,
                     const NormalizedAdjacency& a_norm, const FeatureMatrix& x,
                     const std::vector<DenseMatrix>* masks, DenseMatrix g_act) {
  for (Index l = params.hidden_layers() - 1; l >= 0; --l) {
    const DenseMatrix g_pre = relu_backward(tower.pre[l], g_act);
    const DenseMatrix g_xw = spmm(a_norm.matrix(), g_pre);
    if (l == 0) {
      hidden_grad(0) += x.is_identity() ? g_xw
                                        : DenseMatrix(x.values().transpose() * g_xw);
    } else {
      hidden_grad(l) += tower.inputs[l].transpose() * g_xw;
      g_act = g_xw * hidden(l).transpose();
      if (masks != nullptr) g_act.array() *= (*masks)[l - 1].array();
    }
  }
}

}  // namespace

EncoderCache encode_with_cache(const EncoderParams& params,
                               const NormalizedAdjacency& a_norm,
                               const FeatureMatrix& x, const DropoutMasks* masks) {
  check_shapes(params, a_norm, x);
  EncoderCache cache;
  cache.mu = forward_tower(
      params, [&](Index l) -> const DenseMatrix& { return params.hidden_mu(l); },
      a_norm, x, masks ? &masks->mu : nullptr);
  cache.posterior.mu = cache.mu.basis * params.out_mu();
  if (params.ws()) {
    cache.posterior.logvar = cache.mu.basis * params.out_sigma();
  } else {
    cache.sigma = forward_tower(
        params, [&](Index l) -> const DenseMatrix& { return params.hidden_sigma(l); },
        a_norm, x, masks ? &masks->sigma : nullptr);
    cache.posterior.logvar = cache.sigma.basis * params.out_sigma();
  }
  return cache;
}

Posterior encode(const EncoderParams& params, const NormalizedAdjacency& a_norm,
                 const FeatureMatrix& x) {
  return encode_with_cache(params, a_norm, x).posterior;
}

DenseMatrix shared_basis(const EncoderParams& params,
                         const NormalizedAdjacency& a_norm, const FeatureMatrix& x) {
  if (!params.ws()) {
    throw InvalidArgument("shared_basis: model does not share hidden weights");
  }
  check_shapes(params, a_norm, x);
  return forward_tower(
             params,
             [&](Index l) -> const DenseMatrix& { return params.hidden_mu(l); },
             a_norm, x, nullptr)
      .basis;
}

DenseMatrix sample_with(const Posterior& post, const DenseMatrix& eps) {
  if (eps.rows() != post.mu.rows() || eps.cols() != post.mu.cols()) {
    throw InvalidArgument("sample_with: eps shape does not match posterior");
  }
  return post.mu.array() + (0.5 * post.logvar.array()).exp() * eps.array();
}

EmbeddingSample reparameterize(const Posterior& post, RngStream& rng) {
  EmbeddingSample s;
  s.eps = gaussian_sample(post.mu.rows(), post.mu.cols(), rng);
  s.z = sample_with(post, s.eps);
  return s;
}

namespace {

// z z^T into the lower triangle of a fresh matrix.
DenseMatrix gram_lower(const DenseMatrix& z) {
  DenseMatrix s = DenseMatrix::Zero(z.rows(), z.rows());
  s.selfadjointView<Eigen::Lower>().rankUpdate(z);
  return s;
}

}  // namespace

DenseMatrix decode_logits(const DenseMatrix& z, Index node_limit) {
  if (z.rows() > node_limit) {
    throw InvalidArgument("decode_logits: " + std::to_string(z.rows()) +
                          " nodes exceeds the full-decoding limit of " +
                          std::to_string(node_limit) +
                          "; decode sampled subgraphs instead");
  }
  DenseMatrix s = gram_lower(z);
  s.triangularView<Eigen::StrictlyUpper>() = s.transpose();
  return s;
}

std::vector<double> decode_logits(const DenseMatrix& z,
                                  std::span<const NodePair> pairs) {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    if (p.first < 0 || p.second < 0 || p.first >= z.rows() || p.second >= z.rows()) {
      throw InvalidArgument("decode_logits: pair index out of range");
    }
    out.push_back(z.row(p.first).dot(z.row(p.second)));
  }
  return out;
}

ClassWeights class_weights(Index n, Index positives) {
  const double total = static_cast<double>(n) * static_cast<double>(n);
  const double s = static_cast<double>(positives);
  // Degenerate all-negative or all-positive targets fall back to unit weights.
  if (positives <= 0 || s >= total) return {1.0, 1.0};
  return {total / (2.0 * (total - s)), (total - s) / s};
}

ReconTarget ReconTarget::full(const SparseGraph& graph, bool self_loops) {
  ReconTarget t;
  t.graph_ = graph;
  t.self_loops_ = self_loops;
  return t;
}

ReconTarget ReconTarget::subset(const SparseGraph& graph,
                                std::span<const Index> nodes, bool self_loops) {
  ReconTarget t;
  t.graph_ = induced_subgraph(graph, nodes).graph;
  t.nodes_.assign(nodes.begin(), nodes.end());
  t.self_loops_ = self_loops;
  return t;
}

Index ReconTarget::positives() const {
  return 2 * graph_.m() + (self_loops_ ? graph_.n() : 0);
}

namespace {

struct EntryTerms {
  double loss;
  double grad;  // d loss / d logit
};

// Weighted binary cross-entropy on a logit, sharing one exp between the
// loss and the gradient.
inline EntryTerms bce_terms(double x, bool positive, double pos_weight) {
  const double e = std::exp(-std::abs(x));
  const double log_term = std::log1p(e);
  if (positive) {
    const double one_minus_sig = x >= 0.0 ? e / (1.0 + e) : 1.0 / (1.0 + e);
    return {pos_weight * (std::max(-x, 0.0) + log_term), -pos_weight * one_minus_sig};
  }
  const double sig = x >= 0.0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
  return {std::max(x, 0.0) + log_term, sig};
}

constexpr Index kTile = 256;

struct ReconTerms {
  double sum = 0.0;    // weighted BCE summed over all ns^2 entries
  DenseMatrix grad_z;  // grad_scale * d sum / d z
};

struct TileEntry {
  Index row;
  Index col;
  double logit;
};

// Reconstruction loss over every entry of z z^T and its gradient w.r.t. z,
// with d loss / d logit scaled by `grad_scale`. Works tile by tile so the
// ns x ns logit matrix is never stored; tiles on or below the diagonal are
// visited, off-diagonal tiles standing in for their mirror image too.
ReconTerms recon_terms(const DenseMatrix& z, const ReconTarget& target,
                       ClassWeights weights, double grad_scale) {
  const Index ns = z.rows();
  // |z_i . z_j| <= max(|z_i|^2, |z_j|^2), so finite z and a finite diagonal
  // bound every logit.
  if (!all_finite(z) || !z.rowwise().squaredNorm().allFinite()) {
    throw NonFiniteError("backward: non-finite logits");
  }

  ReconTerms out;
  out.grad_z = DenseMatrix::Zero(ns, z.cols());
  const SparseGraph& g = target.graph();
  DenseMatrix x;
  Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> e, r;
  std::vector<TileEntry> pos;
  for (Index bi = 0; bi < ns; bi += kTile) {
    const Index ti = std::min(kTile, ns - bi);
    const auto zi = z.middleRows(bi, ti);
    for (Index bj = 0; bj <= bi; bj += kTile) {
      const Index tj = std::min(kTile, ns - bj);
      const auto zj = z.middleRows(bj, tj);
      const bool diagonal = bi == bj;
      x.noalias() = zi * zj.transpose();

      // Every entry as a negative first.
      auto xa = x.array();
      e = (-xa.abs()).exp();
      r = (1.0 + e).inverse();
      double tile_sum = (xa.max(0.0) - r.log()).sum();

      // Positives: edges inside the tile, plus the diagonal with self-loops.
      pos.clear();
      for (Index r = 0; r < ti; ++r) {
        const auto nbrs = g.neighbors(bi + r);
        for (auto it = std::lower_bound(nbrs.begin(), nbrs.end(), bj);
             it != nbrs.end() && *it < bj + tj; ++it) {
          pos.push_back({r, *it - bj, 0.0});
        }
        if (diagonal && target.self_loops()) pos.push_back({r, r, 0.0});
      }
      for (auto& p : pos) p.logit = x(p.row, p.col);
      xa = (xa >= 0.0).select(r, e * r);
      for (const auto& p : pos) {
        const EntryTerms t = bce_terms(p.logit, true, weights.pos_weight);
        tile_sum += t.loss - bce_terms(p.logit, false, weights.pos_weight).loss;
        x(p.row, p.col) = t.grad;
      }
      x *= grad_scale;

      // Gradient of sum_{ij} loss(z_i . z_j) is 2 * G z for symmetric G.
      if (diagonal) {
        out.sum += tile_sum;
        out.grad_z.middleRows(bi, ti).noalias() += 2.0 * (x * zj);
      } else {
        out.sum += 2.0 * tile_sum;
        out.grad_z.middleRows(bi, ti).noalias() += 2.0 * (x * zj);
        out.grad_z.middleRows(bj, tj).noalias() += 2.0 * (x.transpose() * zi);
      }
    }
  }
  return out;
}

}  // namespace

double kl_divergence(const Posterior& post) {
  const Index n = post.mu.rows();
  if (n == 0) return 0.0;
  const auto lv = post.logvar.array();
  const double sum =
      0.5 * (lv.exp() + post.mu.array().square() - 1.0 - lv).sum();
  return sum / static_cast<double>(n);
}

LossBreakdown elbo_loss(const DenseMatrix& logits, const ReconTarget& target,
                        const Posterior& post, ClassWeights weights,
                        LossOptions options) {
  const Index n = target.size();
  if (logits.rows() != n || logits.cols() != n) {
    throw InvalidArgument("elbo_loss: logits must be n x n for the target");
  }
  if (!all_finite(logits)) throw NonFiniteError("elbo_loss: non-finite logits");
  const SparseGraph& g = target.graph();
  double sum = 0.0;
  for (Index i = 0; i < n; ++i) {
    const auto row = g.neighbors(i);
    std::size_t k = 0;
    for (Index j = 0; j < n; ++j) {
      while (k < row.size() && row[k] < j) ++k;
      const bool positive =
          (k < row.size() && row[k] == j) || (i == j && target.self_loops());
      sum += bce_terms(logits(i, j), positive, weights.pos_weight).loss;
    }
  }
  LossBreakdown out;
  out.recon = sum / (static_cast<double>(n) * static_cast<double>(n));
  out.kl = kl_divergence(post);
  out.norm = weights.norm;
  out.pos_weight = weights.pos_weight;
  out.kl_scale = options.kl_scale;
  out.total = out.norm * out.recon + out.kl_scale * out.kl;
  return out;
}

Gradients backward(const EncoderParams& params, const NormalizedAdjacency& a_norm,
                   const FeatureMatrix& x, const ReconTarget& target,
                   const DenseMatrix& eps, LossOptions options,
                   const DropoutMasks* masks) {
  const EncoderCache cache = encode_with_cache(params, a_norm, x, masks);
  const Posterior& post = cache.posterior;
  const Index n = post.mu.rows();
  const DenseMatrix std_dev = (0.5 * post.logvar.array()).exp();
  const DenseMatrix z = sample_with(post, eps);

  // Rows of z that are decoded.
  const std::vector<Index>& nodes = target.nodes();
  const bool subset = !nodes.empty();
  DenseMatrix z_dec;
  if (subset) {
    z_dec.resize(static_cast<Index>(nodes.size()), z.cols());
    for (std::size_t k = 0; k < nodes.size(); ++k) z_dec.row(k) = z.row(nodes[k]);
  } else {
    z_dec = z;
  }
  const Index ns = z_dec.rows();
  if (ns != target.size()) {
    throw InvalidArgument("backward: target size does not match decoded nodes");
  }

  const ClassWeights weights = target.weights();
  const double entry_scale = 1.0 / (static_cast<double>(ns) * static_cast<double>(ns));
  ReconTerms recon = recon_terms(z_dec, target, weights, weights.norm * entry_scale);

  Gradients out;
  out.loss.recon = recon.sum * entry_scale;
  out.loss.kl = kl_divergence(post);
  out.loss.norm = weights.norm;
  out.loss.pos_weight = weights.pos_weight;
  out.loss.kl_scale = options.kl_scale;
  out.loss.total = out.loss.norm * out.loss.recon + out.loss.kl_scale * out.loss.kl;

  DenseMatrix g_z;
  if (subset) {
    g_z = DenseMatrix::Zero(n, z.cols());
    for (std::size_t k = 0; k < nodes.size(); ++k) g_z.row(nodes[k]) = recon.grad_z.row(k);
  } else {
    g_z = std::move(recon.grad_z);
  }

  const double kl_coef = options.kl_scale / static_cast<double>(n);
  const DenseMatrix g_mu = g_z + kl_coef * post.mu;
  const DenseMatrix g_logvar =
      (g_z.array() * eps.array() * 0.5 * std_dev.array() +
       kl_coef * 0.5 * (post.logvar.array().exp() - 1.0))
          .matrix();

  out.grads = EncoderParams::zeros_like(params);
  EncoderParams& grads = out.grads;
  const Index last = params.hidden_layers();

  auto output_layer = [&](const EncoderCache::Tower& tower, const DenseMatrix& g_out,
                          const DenseMatrix& w_out, DenseMatrix& g_w_out,
                          const std::vector<DenseMatrix>* tower_masks) {
    g_w_out.noalias() = tower.basis.transpose() * g_out;
    const DenseMatrix g_basis = g_out * w_out.transpose();
    DenseMatrix g_act = spmm(a_norm.matrix(), g_basis);
    if (tower_masks != nullptr) g_act.array() *= (*tower_masks)[last - 1].array();
    return g_act;
  };

  const auto* mu_masks = masks ? &masks->mu : nullptr;
  DenseMatrix g_act_mu =
      output_layer(cache.mu, g_mu, params.out_mu(), grads.out_mu(), mu_masks);
  if (params.ws()) {
    g_act_mu += output_layer(cache.mu, g_logvar, params.out_sigma(),
                             grads.out_sigma(), mu_masks);
    backward_hidden(
        params, [&](Index l) -> const DenseMatrix& { return params.hidden_mu(l); },
        [&](Index l) -> DenseMatrix& { return grads.hidden_mu(l); }, cache.mu,
        a_norm, x, mu_masks, std::move(g_act_mu));
  } else {
    const auto* sigma_masks = masks ? &masks->sigma : nullptr;
    DenseMatrix g_act_sigma = output_layer(cache.sigma, g_logvar, params.out_sigma(),
                                           grads.out_sigma(), sigma_masks);
    backward_hidden(
        params, [&](Index l) -> const DenseMatrix& { return params.hidden_mu(l); },
        [&](Index l) -> DenseMatrix& { return grads.hidden_mu(l); }, cache.mu,
        a_norm, x, mu_masks, std::move(g_act_mu));
    backward_hidden(
        params, [&](Index l) -> const DenseMatrix& { return params.hidden_sigma(l); },
        [&](Index l) -> DenseMatrix& { return grads.hidden_sigma(l); }, cache.sigma,
        a_norm, x, sigma_masks, std::move(g_act_sigma));
  }
  return out;
}

}  // namespace wsvgae
