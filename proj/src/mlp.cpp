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

#include "mlp.h"

#include <cmath>

#include "errors.h"
#include "rng.h"

namespace dpreplay {

namespace {

void apply_output_activation(Matrix& z, Activation output) {
  double* p = z.data();
  switch (output) {
    case Activation::kIdentity:
      break;
    case Activation::kSigmoid:
      for (std::size_t i = 0; i < z.size(); ++i) p[i] = 1.0 / (1.0 + std::exp(-p[i]));
      break;
    case Activation::kTanh:
      for (std::size_t i = 0; i < z.size(); ++i) p[i] = std::tanh(p[i]);
      break;
  }
}

// dLoss/dZ for the output layer, from dLoss/dA and the activated values.
Matrix output_delta(const Matrix& output_grad, const Matrix& activated, Activation output) {
  Matrix delta = output_grad;
  double* d = delta.data();
  const double* a = activated.data();
  switch (output) {
    case Activation::kIdentity:
      break;
    case Activation::kSigmoid:
      for (std::size_t i = 0; i < delta.size(); ++i) d[i] *= a[i] * (1.0 - a[i]);
      break;
    case Activation::kTanh:
      for (std::size_t i = 0; i < delta.size(); ++i) d[i] *= 1.0 - a[i] * a[i];
      break;
  }
  return delta;
}

void check_cache(const MlpParams& params, const ForwardCache& cache) {
  if (cache.pre_acts.size() != params.layers.size() ||
      cache.post_acts.size() != params.layers.size()) {
    throw UsageError("mlp_backward: cache does not match the network (stale cache?)");
  }
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    if (cache.pre_acts[l].cols() != params.layers[l].w.cols()) {
      throw UsageError("mlp_backward: cache layer " + std::to_string(l) +
                       " width mismatch (stale cache?)");
    }
  }
}

}  // namespace

MlpParams MlpParams::zeros(const std::vector<std::size_t>& widths, Activation output) {
  if (widths.size() < 2) {
    throw UsageError("MlpParams: need at least input and output widths");
  }
  MlpParams p;
  p.output = output;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    if (widths[l] == 0 || widths[l + 1] == 0) {
      throw UsageError("MlpParams: zero layer width");
    }
    p.layers.push_back(Layer{Matrix(widths[l], widths[l + 1]), Matrix(1, widths[l + 1])});
  }
  return p;
}

MlpParams MlpParams::he_init(const std::vector<std::size_t>& widths, Activation output,
                             Rng& rng) {
  MlpParams p = zeros(widths, output);
  for (auto& layer : p.layers) {
    const double std_dev = std::sqrt(2.0 / static_cast<double>(layer.w.rows()));
    double* w = layer.w.data();
    for (std::size_t i = 0; i < layer.w.size(); ++i) {
      w[i] = std_dev * rng.next_gaussian();
    }
  }
  return p;
}

std::size_t MlpParams::param_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers) n += layer.w.size() + layer.b.size();
  return n;
}

std::vector<std::size_t> MlpParams::widths() const {
  std::vector<std::size_t> w;
  w.push_back(layers.front().w.rows());
  for (const auto& layer : layers) w.push_back(layer.w.cols());
  return w;
}

void MlpParams::flatten_into(std::span<double> out) const {
  if (out.size() != param_count()) {
    throw UsageError("flatten_into: destination size mismatch");
  }
  std::size_t pos = 0;
  for (const auto& layer : layers) {
    for (std::size_t i = 0; i < layer.w.size(); ++i) out[pos++] = layer.w.data()[i];
    for (std::size_t i = 0; i < layer.b.size(); ++i) out[pos++] = layer.b.data()[i];
  }
}

std::vector<double> MlpParams::flatten() const {
  std::vector<double> flat(param_count());
  flatten_into(flat);
  return flat;
}

void MlpParams::unflatten_from(std::span<const double> flat) {
  if (flat.size() != param_count()) {
    throw UsageError("unflatten_from: source size mismatch");
  }
  std::size_t pos = 0;
  for (auto& layer : layers) {
    for (std::size_t i = 0; i < layer.w.size(); ++i) layer.w.data()[i] = flat[pos++];
    for (std::size_t i = 0; i < layer.b.size(); ++i) layer.b.data()[i] = flat[pos++];
  }
}

Matrix mlp_forward(const MlpParams& params, const Matrix& x, ForwardCache* cache) {
  if (x.cols() != params.input_width()) {
    throw UsageError("mlp_forward: input " + x.shape_string() + " does not match width " +
                     std::to_string(params.input_width()));
  }
  if (cache != nullptr) {
    cache->input = x;
    cache->pre_acts.clear();
    cache->post_acts.clear();
  }
  Matrix a = x;
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    Matrix z = matmul(a, params.layers[l].w);
    add_bias_rows(z, params.layers[l].b);
    if (cache != nullptr) cache->pre_acts.push_back(z);
    const bool is_last = (l + 1 == params.layers.size());
    if (is_last) {
      apply_output_activation(z, params.output);
    } else {
      double* p = z.data();
      for (std::size_t i = 0; i < z.size(); ++i) p[i] = p[i] > 0.0 ? p[i] : 0.0;
    }
    if (cache != nullptr) cache->post_acts.push_back(z);
    a = std::move(z);
  }
  a.ensure_finite("mlp_forward");
  return a;
}

void mlp_backward(const MlpParams& params, const ForwardCache& cache,
                  const Matrix& output_grad, MlpParams* grads, Matrix* input_grad) {
  check_cache(params, cache);
  const std::size_t n_layers = params.layers.size();
  Matrix delta = output_delta(output_grad, cache.post_acts.back(), params.output);
  for (std::size_t li = n_layers; li-- > 0;) {
    const Matrix& a_prev = (li == 0) ? cache.input : cache.post_acts[li - 1];
    Matrix dw = matmul(transpose(a_prev), delta);
    double* gw = grads->layers[li].w.data();
    for (std::size_t i = 0; i < dw.size(); ++i) gw[i] += dw.data()[i];
    double* gb = grads->layers[li].b.data();
    for (std::size_t r = 0; r < delta.rows(); ++r) {
      const double* dr = delta.row(r);
      for (std::size_t c = 0; c < delta.cols(); ++c) gb[c] += dr[c];
    }
    if (li == 0) {
      if (input_grad != nullptr) *input_grad = matmul(delta, transpose(params.layers[0].w));
      break;
    }
    Matrix da = matmul(delta, transpose(params.layers[li].w));
    // ReLU gate: pass where the pre-activation was strictly positive.
    const Matrix& z_prev = cache.pre_acts[li - 1];
    double* d = da.data();
    const double* z = z_prev.data();
    for (std::size_t i = 0; i < da.size(); ++i) {
      if (z[i] <= 0.0) d[i] = 0.0;
    }
    delta = std::move(da);
  }
}

PerExampleGrads per_example_grads(const MlpParams& params, const ForwardCache& cache,
                                  const Matrix& output_grad) {
  check_cache(params, cache);
  const std::size_t n = cache.input.rows();
  const std::size_t n_layers = params.layers.size();
  PerExampleGrads out;
  out.widths = params.widths();
  out.grads = Matrix(n, params.param_count());
  for (const auto& layer : params.layers) {
    out.layer_sizes.push_back(layer.w.size() + layer.b.size());
  }

  // Backpropagate the whole batch once, keeping each layer's delta rows,
  // then form per-example outer products.
  std::vector<Matrix> deltas(n_layers);
  deltas[n_layers - 1] = output_delta(output_grad, cache.post_acts.back(), params.output);
  for (std::size_t li = n_layers; li-- > 1;) {
    Matrix da = matmul(deltas[li], transpose(params.layers[li].w));
    const Matrix& z_prev = cache.pre_acts[li - 1];
    double* d = da.data();
    const double* z = z_prev.data();
    for (std::size_t i = 0; i < da.size(); ++i) {
      if (z[i] <= 0.0) d[i] = 0.0;
    }
    deltas[li - 1] = std::move(da);
  }

  for (std::size_t ex = 0; ex < n; ++ex) {
    double* dst = out.grads.row(ex);
    std::size_t pos = 0;
    for (std::size_t li = 0; li < n_layers; ++li) {
      const Matrix& a_prev = (li == 0) ? cache.input : cache.post_acts[li - 1];
      const double* a_row = a_prev.row(ex);
      const double* d_row = deltas[li].row(ex);
      const std::size_t in_w = params.layers[li].w.rows();
      const std::size_t out_w = params.layers[li].w.cols();
      for (std::size_t i = 0; i < in_w; ++i) {
        const double ai = a_row[i];
        for (std::size_t j = 0; j < out_w; ++j) {
          dst[pos++] = ai * d_row[j];
        }
      }
      for (std::size_t j = 0; j < out_w; ++j) dst[pos++] = d_row[j];
    }
  }
  return out;
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix probs = logits;
  for (std::size_t r = 0; r < probs.rows(); ++r) {
    double* row = probs.row(r);
    double max_v = row[0];
    for (std::size_t c = 1; c < probs.cols(); ++c) max_v = std::max(max_v, row[c]);
    double sum = 0.0;
    for (std::size_t c = 0; c < probs.cols(); ++c) {
      row[c] = std::exp(row[c] - max_v);
      sum += row[c];
    }
    for (std::size_t c = 0; c < probs.cols(); ++c) row[c] /= sum;
  }
  return probs;
}

XentResult softmax_xent(const Matrix& logits, const std::vector<int>& labels) {
  if (logits.cols() < 2) {
    throw UsageError("softmax_xent: need at least 2 classes, got " +
                     std::to_string(logits.cols()));
  }
  if (labels.size() != logits.rows()) {
    throw UsageError("softmax_xent: label count does not match batch size");
  }
  const std::size_t n = logits.rows();
  Matrix probs = softmax_rows(logits);
  double loss = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const int y = labels[r];
    if (y < 0 || static_cast<std::size_t>(y) >= logits.cols()) {
      throw UsageError("softmax_xent: label " + std::to_string(y) + " out of range [0, " +
                       std::to_string(logits.cols()) + ")");
    }
    loss -= std::log(probs(r, static_cast<std::size_t>(y)));
  }
  loss /= static_cast<double>(n);

  Matrix grads = probs;
  for (std::size_t r = 0; r < n; ++r) {
    grads(r, static_cast<std::size_t>(labels[r])) -= 1.0;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  double* g = grads.data();
  for (std::size_t i = 0; i < grads.size(); ++i) g[i] *= inv_n;
  return XentResult{loss, std::move(grads)};
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr) {
  if (params.size() != grads.size() || params.size() != state.m.size()) {
    throw UsageError("adam_step: size mismatch");
  }
  state.step += 1;
  const double b1 = AdamState::kBeta1;
  const double b2 = AdamState::kBeta2;
  const double b1_corr = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double b2_corr = 1.0 - std::pow(b2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = b1 * state.m[i] + (1.0 - b1) * g;
    state.v[i] = b2 * state.v[i] + (1.0 - b2) * g * g;
    const double m_hat = state.m[i] / b1_corr;
    const double v_hat = state.v[i] / b2_corr;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + AdamState::kEpsilon);
  }
}

}  // namespace dpreplay
