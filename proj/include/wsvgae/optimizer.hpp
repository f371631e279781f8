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

#ifndef WSVGAE_OPTIMIZER_HPP_
#define WSVGAE_OPTIMIZER_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "wsvgae/model.hpp"
#include "wsvgae/ndmath.hpp"

namespace wsvgae {

struct AdamHyper {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Moment buffers, one pair per distinct parameter matrix.
class AdamState {
 public:
  AdamState() = default;
  AdamState(std::span<const DenseMatrix* const> like, AdamHyper hyper);
  /// One buffer per EncoderParams tensor; a shared matrix gets one buffer.
  AdamState(const EncoderParams& like, AdamHyper hyper);

  const AdamHyper& hyper() const { return hyper_; }
  std::int64_t step() const { return step_; }
  const std::vector<DenseMatrix>& first_moment() const { return m_; }
  const std::vector<DenseMatrix>& second_moment() const { return v_; }

 private:
  friend void adam_step(std::span<DenseMatrix* const>,
                        std::span<const DenseMatrix* const>, AdamState&);

  AdamHyper hyper_;
  std::int64_t step_ = 0;
  std::vector<DenseMatrix> m_;
  std::vector<DenseMatrix> v_;
};

/// Bias-corrected Adam update. Throws NonFiniteError (with the step number)
/// before touching anything if a gradient entry is not finite.
void adam_step(std::span<DenseMatrix* const> params,
               std::span<const DenseMatrix* const> grads, AdamState& state);

/// `grads` must share the layout of `params` (see EncoderParams::zeros_like).
void adam_step(EncoderParams& params, const EncoderParams& grads, AdamState& state);

}  // namespace wsvgae

#endif  // WSVGAE_OPTIMIZER_HPP_
