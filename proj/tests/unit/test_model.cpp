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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "model_oracle.hpp"
#include "wsvgae/error.hpp"
#include "wsvgae/graph.hpp"
#include "wsvgae/model.hpp"
#include "wsvgae/trainer.hpp"

namespace wsvgae {
namespace {

DenseMatrix scalar(double v) {
  DenseMatrix m(1, 1);
  m(0, 0) = v;
  return m;
}

TEST(EncoderParams, ShapesWithSharing) {
  RngStream rng(1);
  const EncoderParams ws = EncoderParams::init(1433, {32}, 16, true, rng);
  const auto t = ws.tensors();
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0].name, "w_hidden_0");
  EXPECT_EQ(t[0].value->rows(), 1433);
  EXPECT_EQ(t[0].value->cols(), 32);
  EXPECT_EQ(t[1].name, "w_out_mu");
  EXPECT_EQ(t[2].name, "w_out_sigma");
  EXPECT_EQ(t[1].value->rows(), 32);
  EXPECT_EQ(t[1].value->cols(), 16);
  EXPECT_EQ(&ws.hidden_mu(0), &ws.hidden_sigma(0));
  EXPECT_NE(ws.out_mu(), ws.out_sigma());
}

TEST(EncoderParams, ShapesWithoutSharing) {
  RngStream rng(1);
  const EncoderParams p = EncoderParams::init(1433, {32}, 16, false, rng);
  const auto t = p.tensors();
  ASSERT_EQ(t.size(), 4u);
  EXPECT_EQ(t[0].name, "w_hidden_mu_0");
  EXPECT_EQ(t[1].name, "w_hidden_sigma_0");
  EXPECT_EQ(t[1].value->rows(), 1433);
  EXPECT_NE(&p.hidden_mu(0), &p.hidden_sigma(0));
  EXPECT_NE(p.hidden_mu(0), p.hidden_sigma(0));
}

TEST(EncoderParams, DeepSharesBothHiddenLayers) {
  RngStream rng(2);
  const EncoderParams p = EncoderParams::init(100, {32, 32}, 16, true, rng);
  EXPECT_EQ(p.layers(), 3);
  const auto t = p.tensors();
  ASSERT_EQ(t.size(), 4u);
  EXPECT_EQ(t[0].value->rows(), 100);
  EXPECT_EQ(t[1].name, "w_hidden_1");
  EXPECT_EQ(t[1].value->rows(), 32);
  EXPECT_EQ(t[1].value->cols(), 32);
  EXPECT_EQ(&p.hidden_sigma(1), &p.hidden_mu(1));
}

TEST(EncoderParams, RejectsEmptyHiddenList) {
  RngStream rng(2);
  EXPECT_THROW(EncoderParams::init(4, {}, 2, true, rng), InvalidArgument);
}

TEST(ParamCount, Examples) {
  RngStream rng(3);
  EXPECT_EQ(param_count(EncoderParams::init(5000, {32}, 16, true, rng)), 161024);
  EXPECT_EQ(param_count(EncoderParams::init(5000, {32}, 16, false, rng)), 321024);
  EXPECT_EQ(param_count(EncoderParams::init(1, {1}, 1, true, rng)), 3);
}

TEST(ParamCount, SharingSavesInputTimesHidden) {
  RngStream rng(4);
  for (Index n : {10, 100, 2708}) {
    for (Index dh : {1, 8, 32}) {
      const Index ws = param_count(EncoderParams::init(n, {dh}, 16, true, rng));
      const Index nows = param_count(EncoderParams::init(n, {dh}, 16, false, rng));
      EXPECT_EQ(nows - ws, n * dh);
    }
  }
}

TEST(Encode, SingleNodeHandExample) {
  RngStream rng(5);
  EncoderParams p = EncoderParams::init(1, {1}, 1, true, rng);
  p.hidden_mu(0) = scalar(2.0);
  p.out_mu() = scalar(3.0);
  p.out_sigma() = scalar(-1.0);
  const SparseGraph g = SparseGraph::from_edges(1, {});
  const Posterior post = encode(p, normalize(g), FeatureMatrix::identity(1));
  EXPECT_EQ(post.mu(0, 0), 6.0);
  EXPECT_EQ(post.logvar(0, 0), -2.0);
}

TEST(Encode, ZeroWeightsGiveUnitPosterior) {
  RngStream rng(6);
  EncoderParams p = EncoderParams::init(8, {4}, 2, false, rng);
  for (auto& t : p.tensors()) t.value->setZero();
  const SparseGraph g = oracle::random_graph(8, 0.4, 1);
  const Posterior post = encode(p, normalize(g), FeatureMatrix::identity(8));
  EXPECT_EQ(post.mu, DenseMatrix::Zero(8, 2));
  EXPECT_EQ(post.logvar, DenseMatrix::Zero(8, 2));
}

TEST(Encode, MatchesDenseOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SparseGraph g = oracle::random_graph(9, 0.3, seed);
    RngStream rng(seed);
    const DenseMatrix xv = gaussian_sample(9, 3, rng);
    const EncoderParams p = EncoderParams::init(3, {4, 5}, 2, seed % 2 == 0, rng);
    const Posterior post = encode(p, normalize(g), FeatureMatrix::dense(xv));
    // Recompute the mean tower with the dense formula.
    const oracle::Dense a = oracle::normalized_adjacency(oracle::adjacency(g));
    oracle::Dense h = oracle::to_dense(xv);
    for (Index l = 0; l < 2; ++l) {
      h = oracle::matmul(oracle::matmul(a, h), oracle::to_dense(p.hidden_mu(l)));
      for (auto& row : h) {
        for (double& v : row) v = std::max(v, 0.0);
      }
    }
    const oracle::Dense mu = oracle::matmul(oracle::matmul(a, h), oracle::to_dense(p.out_mu()));
    for (Index i = 0; i < 9; ++i) {
      for (Index k = 0; k < 2; ++k) EXPECT_NEAR(post.mu(i, k), mu[i][k], 1e-12);
    }
  }
}

TEST(Encode, DimensionMismatchThrows) {
  RngStream rng(7);
  const EncoderParams p = EncoderParams::init(5, {4}, 2, true, rng);
  const SparseGraph g = oracle::random_graph(6, 0.5, 1);
  EXPECT_THROW(encode(p, normalize(g), FeatureMatrix::identity(6)), InvalidArgument);
}

TEST(WeightSharing, UntiedCopyIsBitIdentical) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SparseGraph g = oracle::random_graph(15, 0.2, seed);
    const NormalizedAdjacency a = normalize(g);
    RngStream rng(seed);
    const DenseMatrix xv = gaussian_sample(15, 6, rng);
    for (Index layers : {2, 3}) {
      const std::vector<Index> hidden(layers - 1, 7);
      const EncoderParams ws = EncoderParams::init(6, hidden, 3, true, rng);
      const EncoderParams nows = ws.untied();
      ASSERT_FALSE(nows.ws());
      const FeatureMatrix x = FeatureMatrix::dense(xv);
      const Posterior pw = encode(ws, a, x);
      const Posterior pn = encode(nows, a, x);
      EXPECT_EQ(pw.mu, pn.mu);
      EXPECT_EQ(pw.logvar, pn.logvar);
    }
  }
}

TEST(WeightSharing, ManualCopyIsBitIdentical) {
  const SparseGraph g = oracle::random_graph(10, 0.3, 3);
  const NormalizedAdjacency a = normalize(g);
  RngStream rng(11);
  const EncoderParams ws = EncoderParams::init(10, {6}, 3, true, rng);
  EncoderParams nows = EncoderParams::init(10, {6}, 3, false, rng);
  nows.hidden_mu(0) = ws.hidden_mu(0);
  nows.hidden_sigma(0) = ws.hidden_mu(0);
  nows.out_mu() = ws.out_mu();
  nows.out_sigma() = ws.out_sigma();
  const FeatureMatrix x = FeatureMatrix::identity(10);
  EXPECT_EQ(encode(ws, a, x).mu, encode(nows, a, x).mu);
  EXPECT_EQ(encode(ws, a, x).logvar, encode(nows, a, x).logvar);
}

TEST(WeightSharing, SharedBasisFactorization) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SparseGraph g = oracle::random_graph(20, 0.2, seed);
    const NormalizedAdjacency a = normalize(g);
    RngStream rng(seed + 50);
    const EncoderParams p = EncoderParams::init(20, {8, 8}, 4, true, rng);
    const FeatureMatrix x = FeatureMatrix::identity(20);
    const DenseMatrix b = shared_basis(p, a, x);
    EXPECT_EQ(b.rows(), 20);
    EXPECT_EQ(b.cols(), 8);
    const Posterior post = encode(p, a, x);
    EXPECT_LE((b * p.out_mu() - post.mu).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((b * p.out_sigma() - post.logvar).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_THROW(shared_basis(p.untied(), a, x), InvalidArgument);
  }
}

TEST(WeightSharing, SharedGradientIsSumOfTowerGradients) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SparseGraph g = oracle::random_graph(12, 0.3, seed);
    const NormalizedAdjacency a = normalize(g);
    const ReconTarget target = ReconTarget::full(g);
    RngStream rng(seed + 9);
    const EncoderParams ws = EncoderParams::init(12, {5, 4}, 3, true, rng);
    const DenseMatrix eps = gaussian_sample(12, 3, rng);
    const FeatureMatrix x = FeatureMatrix::identity(12);
    const Gradients gw = backward(ws, a, x, target, eps);
    const Gradients gn = backward(ws.untied(), a, x, target, eps);
    EXPECT_DOUBLE_EQ(gw.loss.total, gn.loss.total);
    for (Index l = 0; l < 2; ++l) {
      const DenseMatrix sum = gn.grads.hidden_mu(l) + gn.grads.hidden_sigma(l);
      const double scale = std::max(1.0, sum.cwiseAbs().maxCoeff());
      EXPECT_LE((gw.grads.hidden_mu(l) - sum).cwiseAbs().maxCoeff() / scale, 1e-12);
    }
    EXPECT_LE((gw.grads.out_mu() - gn.grads.out_mu()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Reparameterize, VanishingVarianceAndUnitPosterior) {
  RngStream rng(1);
  Posterior post{gaussian_sample(5, 3, rng), DenseMatrix::Constant(5, 3, -60.0)};
  const EmbeddingSample s = reparameterize(post, rng);
  EXPECT_LE((s.z - post.mu).cwiseAbs().maxCoeff(), 1e-10);

  Posterior unit{DenseMatrix::Zero(4, 2), DenseMatrix::Zero(4, 2)};
  const EmbeddingSample u = reparameterize(unit, rng);
  EXPECT_EQ(u.z, u.eps);
}

TEST(Reparameterize, MonteCarloMean) {
  Posterior post{DenseMatrix(1, 2), DenseMatrix(1, 2)};
  post.mu << 1.5, -0.5;
  post.logvar << 0.0, std::log(4.0);
  RngStream rng(8);
  const int draws = 100000;
  DenseMatrix sum = DenseMatrix::Zero(1, 2);
  for (int t = 0; t < draws; ++t) sum += reparameterize(post, rng).z;
  const DenseMatrix mean = sum / draws;
  EXPECT_NEAR(mean(0, 0), 1.5, 3 * 1.0 / std::sqrt(draws));
  EXPECT_NEAR(mean(0, 1), -0.5, 3 * 2.0 / std::sqrt(draws));
}

TEST(Decode, Examples) {
  DenseMatrix z(3, 2);
  z << 0, 0, 1, 2, 3, -1;
  const DenseMatrix logits = decode_logits(z);
  EXPECT_EQ(logits(0, 1), 0.0);
  EXPECT_EQ(sigmoid(logits(0, 0)), 0.5);
  EXPECT_EQ(logits(1, 2), 1.0);
  EXPECT_NEAR(sigmoid(logits(1, 2)), 0.731059, 1e-6);
  const std::vector<NodePair> pairs = {{1, 2}, {2, 2}};
  const auto v = decode_logits(z, pairs);
  EXPECT_EQ(v[0], 1.0);
  EXPECT_EQ(v[1], 10.0);
}

TEST(Decode, SymmetricWithDominantDiagonal) {
  RngStream rng(4);
  for (Index n : {1, 7, 64, 300}) {
    const DenseMatrix z = gaussian_sample(n, 5, rng);
    const DenseMatrix l = decode_logits(z);
    EXPECT_EQ(l, l.transpose());
    for (Index i = 0; i < n; ++i) EXPECT_GE(sigmoid(l(i, i)), 0.5);
  }
}

TEST(Decode, RefusesLargeGraphs) {
  EXPECT_THROW(decode_logits(DenseMatrix::Zero(21, 2), 20), InvalidArgument);
  EXPECT_NO_THROW(decode_logits(DenseMatrix::Zero(20, 2), 20));
}

TEST(ClassWeights, Formula) {
  const ClassWeights w = class_weights(10, 20);
  EXPECT_DOUBLE_EQ(w.pos_weight, 80.0 / 20.0);
  EXPECT_DOUBLE_EQ(w.norm, 100.0 / 160.0);
  const SparseGraph g = oracle::random_graph(10, 0.3, 2);
  EXPECT_EQ(ReconTarget::full(g).positives(), 2 * g.m() + 10);
  EXPECT_EQ(ReconTarget::full(g, false).positives(), 2 * g.m());
}

TEST(Kl, Examples) {
  Posterior zero{DenseMatrix::Zero(3, 2), DenseMatrix::Zero(3, 2)};
  EXPECT_EQ(kl_divergence(zero), 0.0);
  Posterior one{scalar(1.0), scalar(0.0)};
  EXPECT_DOUBLE_EQ(kl_divergence(one), 0.5);
}

TEST(Kl, NonNegativeUnderFuzzing) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  for (int t = 0; t < 10000; ++t) {
    Posterior p{DenseMatrix(2, 2), DenseMatrix(2, 2)};
    for (Index k = 0; k < 4; ++k) {
      p.mu.data()[k] = u(gen);
      p.logvar.data()[k] = u(gen);
    }
    EXPECT_GE(kl_divergence(p), 0.0);
  }
}

TEST(ElboLoss, PerfectReconstructionLimit) {
  const std::vector<NodePair> e = {{0, 1}};
  const SparseGraph g = SparseGraph::from_edges(3, e);
  const ReconTarget target = ReconTarget::full(g);
  DenseMatrix logits = DenseMatrix::Constant(3, 3, -40.0);
  logits(0, 1) = logits(1, 0) = 40.0;
  for (Index i = 0; i < 3; ++i) logits(i, i) = 40.0;
  Posterior post{DenseMatrix::Zero(3, 1), DenseMatrix::Zero(3, 1)};
  const LossBreakdown l = elbo_loss(logits, target, post, target.weights());
  EXPECT_LT(l.recon, 1e-15);
  EXPECT_EQ(l.kl, 0.0);
  logits(2, 0) = std::nan("");
  EXPECT_THROW(elbo_loss(logits, target, post, target.weights()), NonFiniteError);
}

TEST(ElboLoss, MatchesOracleAndBackwardLoss) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SparseGraph g = oracle::random_graph(11, 0.3, seed);
    RngStream rng(seed + 3);
    const EncoderParams p = EncoderParams::init(11, {6}, 3, seed % 2 == 1, rng);
    const DenseMatrix eps = gaussian_sample(11, 3, rng);
    const NormalizedAdjacency a = normalize(g);
    const FeatureMatrix x = FeatureMatrix::identity(11);
    const ReconTarget target = ReconTarget::full(g);
    const Posterior post = encode(p, a, x);
    const DenseMatrix logits = decode_logits(sample_with(post, eps));
    for (double kl_scale : {1.0, 1.0 / 11.0}) {
      const LossBreakdown l = elbo_loss(logits, target, post, target.weights(), {kl_scale});
      const oracle::OracleLoss o =
          oracle::vgae_loss(p, oracle::adjacency(g), oracle::identity(11),
                            oracle::to_dense(eps), kl_scale);
      EXPECT_NEAR(l.recon, o.recon, 1e-12 * o.recon);
      EXPECT_NEAR(l.kl, o.kl, 1e-12 * std::max(1.0, o.kl));
      EXPECT_NEAR(l.total, o.total, 1e-12 * o.total);
      EXPECT_DOUBLE_EQ(l.total, l.norm * l.recon + kl_scale * l.kl);
      const Gradients gr = backward(p, a, x, target, eps, {kl_scale});
      EXPECT_NEAR(gr.loss.total, o.total, 1e-12 * o.total);
    }
  }
}

TEST(Backward, OutputLayerClosedFormAtZeroOutputs) {
  // Two isolated nodes: Ã = I, target = I, so s = 2 of N = 4 entries and
  // pos_weight = norm = 1. Zero output weights give mu = logvar = 0, z = eps.
  RngStream rng(1);
  EncoderParams p = EncoderParams::init(2, {1}, 1, true, rng);
  p.hidden_mu(0) = DenseMatrix(2, 1);
  p.hidden_mu(0) << 1.0, 2.0;
  p.out_mu().setZero();
  p.out_sigma().setZero();
  const SparseGraph g = SparseGraph::from_edges(2, {});
  DenseMatrix eps(2, 1);
  eps << 0.7, -1.3;
  const Gradients gr = backward(p, normalize(g), FeatureMatrix::identity(2),
                                ReconTarget::full(g), eps);

  // dL/dz_i = (1/4) * 2 * sum_j (s(z_i z_j) - t_ij) z_j; B = [1, 2]^T.
  const double e0 = eps(0, 0), e1 = eps(1, 0);
  const double dz0 = 0.5 * ((sigmoid(e0 * e0) - 1.0) * e0 + sigmoid(e0 * e1) * e1);
  const double dz1 = 0.5 * (sigmoid(e1 * e0) * e0 + (sigmoid(e1 * e1) - 1.0) * e1);
  const double g_out_mu = 1.0 * dz0 + 2.0 * dz1;
  const double g_out_sigma = 1.0 * dz0 * 0.5 * e0 + 2.0 * dz1 * 0.5 * e1;
  EXPECT_NEAR(gr.grads.out_mu()(0, 0), g_out_mu, 1e-15);
  EXPECT_NEAR(gr.grads.out_sigma()(0, 0), g_out_sigma, 1e-15);
  // Zero outputs block every path back to the hidden layer.
  EXPECT_EQ(gr.grads.hidden_mu(0), DenseMatrix::Zero(2, 1));
}

TEST(Backward, MatchesCentralDifferences) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (bool ws : {true, false}) {
      for (Index layers : {2, 3}) {
        for (bool features : {false, true}) {
          const auto r = oracle::gradient_check(seed, ws, layers, features);
          EXPECT_LE(r.max_rel_error, 1e-5)
              << "seed " << seed << " ws " << ws << " L " << layers;
          EXPECT_LE(r.loss_gap, 1e-12);
        }
      }
    }
  }
}

TEST(Backward, SubsetTargetMatchesCentralDifferences) {
  const SparseGraph g = oracle::random_graph(14, 0.3, 4);
  const std::vector<Index> nodes = {1, 3, 4, 8, 9, 13};
  const SparseGraph sub = induced_subgraph(g, nodes).graph;
  RngStream rng(12);
  EncoderParams p = EncoderParams::init(14, {5}, 3, true, rng);
  const DenseMatrix eps = gaussian_sample(14, 3, rng);
  const NormalizedAdjacency a = normalize(g);
  const FeatureMatrix x = FeatureMatrix::identity(14);
  const ReconTarget target = ReconTarget::subset(g, nodes);

  // Loss: subgraph reconstruction with local weights plus KL over all nodes.
  auto loss = [&]() {
    const Posterior post = encode(p, a, x);
    const DenseMatrix z = sample_with(post, eps);
    DenseMatrix zs(static_cast<Index>(nodes.size()), 3);
    for (std::size_t k = 0; k < nodes.size(); ++k) zs.row(k) = z.row(nodes[k]);
    const oracle::Dense adj = oracle::adjacency(sub);
    const double n_s = static_cast<double>(nodes.size());
    double pos = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t j = 0; j < nodes.size(); ++j) pos += (i == j || adj[i][j] != 0);
    }
    const double pw = (n_s * n_s - pos) / pos, norm = n_s * n_s / (2 * (n_s * n_s - pos));
    double bce = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t j = 0; j < nodes.size(); ++j) {
        const double l = zs.row(i).dot(zs.row(j));
        bce += (i == j || adj[i][j] != 0) ? pw * std::log1p(std::exp(-l))
                                          : std::log1p(std::exp(l));
      }
    }
    return norm * bce / (n_s * n_s) + kl_divergence(post);
  };
  const Gradients gr = backward(p, a, x, target, eps);
  EXPECT_NEAR(gr.loss.total, loss(), 1e-12);
  auto tensors = p.tensors();
  const auto grads = gr.grads.tensors();
  double worst = 0.0;
  for (std::size_t t = 0; t < tensors.size(); ++t) {
    for (Index k = 0; k < tensors[t].value->size(); ++k) {
      double& w = tensors[t].value->data()[k];
      const double saved = w;
      w = saved + 1e-5;
      const double up = loss();
      w = saved - 1e-5;
      const double down = loss();
      w = saved;
      worst = std::max(worst, oracle::rel_error(grads[t].value->data()[k], (up - down) / 2e-5));
    }
  }
  EXPECT_LE(worst, 1e-5);
}

TEST(Backward, NonFiniteWeightsAreReported) {
  const SparseGraph g = oracle::random_graph(6, 0.5, 1);
  RngStream rng(1);
  EncoderParams p = EncoderParams::init(6, {3}, 2, true, rng);
  p.out_mu()(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(backward(p, normalize(g), FeatureMatrix::identity(6), ReconTarget::full(g),
                        DenseMatrix::Zero(6, 2)),
               NonFiniteError);
}

TEST(Dropout, MasksAreScaledBernoulli) {
  RngStream rng(3);
  const EncoderParams p = EncoderParams::init(10, {6, 4}, 2, false, rng);
  const DropoutMasks m = draw_dropout_masks(p, 10, 0.25, rng);
  ASSERT_EQ(m.mu.size(), 2u);
  ASSERT_EQ(m.sigma.size(), 2u);
  for (const auto& mask : m.mu) {
    for (Index k = 0; k < mask.size(); ++k) {
      const double v = mask.data()[k];
      EXPECT_TRUE(v == 0.0 || v == 1.0 / 0.75);
    }
  }
  EXPECT_THROW(draw_dropout_masks(p, 10, 1.0, rng), InvalidArgument);
}

TEST(Training, LossDecreasesOnPlantedPartition) {
  const std::vector<Index> blocks = {30, 30};
  int decreased = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const SbmGraph sbm = sbm_generate(blocks, 0.9, 0.05, seed);
    RngStream rng(RngStream::derive_seed(seed, "init"));
    EncoderParams p = EncoderParams::init(60, {32}, 16, true, rng);
    // KL weighted 1/n, as the experiment harness trains.
    TrainOptions opt;
    opt.loss.kl_scale = 1.0 / 60.0;
    const TrainReport r = train(p, sbm.graph, FeatureMatrix::identity(60), opt, seed);
    ASSERT_EQ(r.loss_history.size(), 300u);
    decreased += r.final.total < r.initial.total;
  }
  EXPECT_GE(decreased, 95);
}

}  // namespace
}  // namespace wsvgae
