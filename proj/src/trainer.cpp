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

#include "wsvgae/trainer.hpp"

#include <chrono>
#include <cmath>
#include <optional>

#include "wsvgae/error.hpp"

namespace wsvgae {

TrainReport train(EncoderParams& params, const SparseGraph& graph,
                  const FeatureMatrix& x, const TrainOptions& options,
                  std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const Index n = graph.n();
  const NormalizedAdjacency a_norm = normalize(graph);
  RngStream eps_rng = RngStream::derive(seed, "eps");
  RngStream dropout_rng = RngStream::derive(seed, "dropout");
  RngStream sample_rng = RngStream::derive(seed, "fastgae");

  TrainReport report;
  report.used_fastgae = options.fastgae.active_for(n);
  std::optional<ReconTarget> full_target;
  if (!report.used_fastgae) full_target = ReconTarget::full(graph, options.self_loops);

  auto evaluate = [&](bool with_dropout) {
    std::optional<ReconTarget> sampled;
    if (report.used_fastgae) {
      const auto nodes = degree_sample(graph, options.fastgae.sample_size,
                                       options.fastgae.alpha, sample_rng.next_u64());
      sampled = ReconTarget::subset(graph, nodes, options.self_loops);
    }
    const ReconTarget& target = sampled ? *sampled : *full_target;
    const DenseMatrix eps = gaussian_sample(n, params.latent_dim(), eps_rng);
    std::optional<DropoutMasks> masks;
    if (with_dropout && options.dropout > 0.0) {
      masks = draw_dropout_masks(params, n, options.dropout, dropout_rng);
    }
    return backward(params, a_norm, x, target, eps, options.loss,
                    masks ? &*masks : nullptr);
  };

  AdamState state(params, options.adam);
  report.loss_history.reserve(options.iterations);
  for (Index it = 0; it < options.iterations; ++it) {
    const Gradients g = evaluate(true);
    if (!std::isfinite(g.loss.total)) {
      throw NonFiniteError("train: non-finite loss", it + 1);
    }
    if (it == 0) report.initial = g.loss;
    report.loss_history.push_back(g.loss.total);
    adam_step(params, g.grads, state);
  }
  report.final = evaluate(false).loss;
  if (options.iterations == 0) report.initial = report.final;
  if (!std::isfinite(report.final.total)) {
    throw NonFiniteError("train: non-finite loss", options.iterations);
  }
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace wsvgae
