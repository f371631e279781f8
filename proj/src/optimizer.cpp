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

#include "wsvgae/optimizer.hpp"

#include <cmath>

#include "wsvgae/error.hpp"

namespace wsvgae {

AdamState::AdamState(std::span<const DenseMatrix* const> like, AdamHyper hyper)
    : hyper_(hyper) {
  for (const DenseMatrix* p : like) {
    m_.push_back(DenseMatrix::Zero(p->rows(), p->cols()));
    v_.push_back(DenseMatrix::Zero(p->rows(), p->cols()));
  }
}

namespace {

std::vector<const DenseMatrix*> const_views(const EncoderParams& params) {
  std::vector<const DenseMatrix*> out;
  for (const auto& t : params.tensors()) out.push_back(t.value);
  return out;
}

}  // namespace

AdamState::AdamState(const EncoderParams& like, AdamHyper hyper)
    : AdamState(const_views(like), hyper) {}

void adam_step(std::span<DenseMatrix* const> params,
               std::span<const DenseMatrix* const> grads, AdamState& state) {
  if (params.size() != grads.size() || params.size() != state.m_.size()) {
    throw InvalidArgument("adam_step: parameter/gradient/state count mismatch");
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (params[k]->rows() != grads[k]->rows() || params[k]->cols() != grads[k]->cols() ||
        params[k]->rows() != state.m_[k].rows() || params[k]->cols() != state.m_[k].cols()) {
      throw InvalidArgument("adam_step: shape mismatch in tensor " + std::to_string(k));
    }
    if (!all_finite(*grads[k])) {
      throw NonFiniteError("adam_step: non-finite gradient", state.step_ + 1);
    }
  }

  const AdamHyper& h = state.hyper_;
  const std::int64_t t = ++state.step_;
  const double bias1 = 1.0 - std::pow(h.beta1, static_cast<double>(t));
  const double bias2 = 1.0 - std::pow(h.beta2, static_cast<double>(t));
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto g = grads[k]->array();
    auto m = state.m_[k].array();
    auto v = state.v_[k].array();
    m = h.beta1 * m + (1.0 - h.beta1) * g;
    v = h.beta2 * v + (1.0 - h.beta2) * g.square();
    params[k]->array() -=
        h.learning_rate * (m / bias1) / ((v / bias2).sqrt() + h.epsilon);
  }
}

void adam_step(EncoderParams& params, const EncoderParams& grads, AdamState& state) {
  if (params.ws() != grads.ws() || params.dims() != grads.dims()) {
    throw InvalidArgument("adam_step: gradient layout does not match parameters");
  }
  std::vector<DenseMatrix*> p;
  for (auto& t : params.tensors()) p.push_back(t.value);
  const std::vector<const DenseMatrix*> g = const_views(grads);
  adam_step(p, g, state);
}

}  // namespace wsvgae
