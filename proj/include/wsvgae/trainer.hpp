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

#ifndef WSVGAE_TRAINER_HPP_
#define WSVGAE_TRAINER_HPP_

#include <cstdint>
#include <vector>

#include "wsvgae/graph.hpp"
#include "wsvgae/model.hpp"
#include "wsvgae/optimizer.hpp"

namespace wsvgae {

/// Subgraph decoding for large graphs: each step reconstructs only the
/// subgraph induced by `sample_size` nodes drawn with probability
/// proportional to degree^alpha.
struct FastGaeOptions {
  bool enabled = true;
  Index node_threshold = 20000;  // active when n > node_threshold
  Index sample_size = 5000;
  double alpha = 1.0;

  bool active_for(Index n) const { return enabled && n > node_threshold; }
};

struct TrainOptions {
  Index iterations = 300;
  AdamHyper adam;
  LossOptions loss;
  bool self_loops = true;
  double dropout = 0.0;
  FastGaeOptions fastgae;
};

struct TrainReport {
  std::vector<double> loss_history;  // total loss at each step, before the update
  LossBreakdown initial;
  LossBreakdown final;  // one extra evaluation after the last update
  bool used_fastgae = false;
  double seconds = 0.0;
};

/// Full-batch training of `params` on `graph` (the graph the model may see).
/// Every random draw (eps, dropout, node samples) comes from streams derived
/// from `seed`.
TrainReport train(EncoderParams& params, const SparseGraph& graph,
                  const FeatureMatrix& x, const TrainOptions& options,
                  std::uint64_t seed);

}  // namespace wsvgae

#endif  // WSVGAE_TRAINER_HPP_
