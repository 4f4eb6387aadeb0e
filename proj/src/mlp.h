// Copyright 2026 The dpreplay Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPREPLAY_MLP_H_
#define DPREPLAY_MLP_H_

#include <cstddef>
#include <span>
#include <vector>

#include "matrix.h"

namespace dpreplay {

class Rng;

// Output-head activation; hidden layers are always ReLU.
enum class Activation { kIdentity = 0, kSigmoid = 1, kTanh = 2 };

struct Layer {
  Matrix w;  // in x out
  Matrix b;  // 1 x out
};

// Plain fully connected network. Also doubles as the carrier for
// gradients and optimizer moments, which share the parameter shape.
struct MlpParams {
  std::vector<Layer> layers;
  Activation output = Activation::kIdentity;

  static MlpParams zeros(const std::vector<std::size_t>& widths, Activation output);
  // He-style init: w ~ N(0, 2/fan_in), b = 0.
  static MlpParams he_init(const std::vector<std::size_t>& widths, Activation output,
                           Rng& rng);

  std::size_t input_width() const { return layers.front().w.rows(); }
  std::size_t output_width() const { return layers.back().w.cols(); }
  std::size_t param_count() const;
  std::vector<std::size_t> widths() const;

  // Flat order: layer 0 weights (row-major), layer 0 bias, layer 1
  // weights, ... Used by the optimizer and the privacy mechanism.
  void flatten_into(std::span<double> out) const;
  std::vector<double> flatten() const;
  void unflatten_from(std::span<const double> flat);
};

struct ForwardCache {
  Matrix input;
  std::vector<Matrix> pre_acts;   // Z_l, one per layer
  std::vector<Matrix> post_acts;  // A_l = act(Z_l), one per layer
};

// Layer-wise affine + activation. The cache, when given, holds what the
// backward pass needs.
Matrix mlp_forward(const MlpParams& params, const Matrix& x, ForwardCache* cache = nullptr);

// Exact reverse-mode gradients of sum-over-batch of the upstream signal.
// output_grad is dLoss/dOutput (post-activation). grads must be
// zero-initialized with the parameter shape; input_grad, when non-null,
// receives dLoss/dInput.
void mlp_backward(const MlpParams& params, const ForwardCache& cache,
                  const Matrix& output_grad, MlpParams* grads,
                  Matrix* input_grad = nullptr);

// One flattened gradient row per example; rows sum to the batch gradient.
struct PerExampleGrads {
  Matrix grads;                      // n_examples x param_count
  std::vector<std::size_t> widths;   // shape map back to MlpParams
  std::vector<std::size_t> layer_sizes;  // flat length per layer (w + b), for group clipping
};

PerExampleGrads per_example_grads(const MlpParams& params, const ForwardCache& cache,
                                  const Matrix& output_grad);

// Mean softmax cross-entropy over the batch, K >= 2 classes.
// logit_grads = (softmax - onehot) / batch.
struct XentResult {
  double loss;
  Matrix logit_grads;
};
XentResult softmax_xent(const Matrix& logits, const std::vector<int>& labels);

// Row-wise softmax with max subtraction; rows sum to 1.
Matrix softmax_rows(const Matrix& logits);

// Adam over a flat parameter vector.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long step = 0;

  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEpsilon = 1e-8;

  explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

// m <- b1 m + (1-b1) g;  v <- b2 v + (1-b2) g^2;  bias-corrected;
// params <- params - lr * m_hat / (sqrt(v_hat) + 1e-8).
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr);

// Central finite differences (f(x+h e_i) - f(x-h e_i)) / (2h).
template <typename F>
std::vector<double> finite_diff_grad(const F& f, std::vector<double> x, double h = 1e-5) {
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + h;
    const double up = f(x);
    x[i] = saved - h;
    const double down = f(x);
    x[i] = saved;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

}  // namespace dpreplay

#endif  // DPREPLAY_MLP_H_
