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

#include "bnn.h"

#include <cmath>

#include "errors.h"
#include "rng.h"

namespace dpreplay {

namespace {

void check_batch(const Matrix& x, const std::vector<int>& y) {
  if (x.rows() == 0) {
    throw UsageError("bnn: empty batch");
  }
  if (x.rows() != y.size()) {
    throw UsageError("bnn: image/label count mismatch");
  }
}

std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = n; i-- > 1;) {
    const std::size_t j = rng.next_below(i + 1);
    std::swap(idx[i], idx[j]);
  }
  return idx;
}

}  // namespace

double mc_log_likelihood(const MeanFieldPosterior& post, const Matrix& x,
                         const std::vector<int>& y, int samples, Rng& rng) {
  check_batch(x, y);
  if (samples < 1) {
    throw UsageError("mc_log_likelihood: need at least one weight sample");
  }
  double total = 0.0;
  for (int s = 0; s < samples; ++s) {
    const MlpParams w = sample_weights(post, rng);
    const Matrix logits = mlp_forward(w, x);
    total -= softmax_xent(logits, y).loss;  // loss is the mean NLL
  }
  return total / static_cast<double>(samples);
}

FreeEnergyTerms free_energy(const MeanFieldPosterior& post, const PriorSpec& prior,
                            const Matrix& x, const std::vector<int>& y, std::size_t n_data,
                            std::size_t tasks_seen, int samples, Rng& rng) {
  if (n_data < 1 || tasks_seen < 1) {
    throw UsageError("free_energy: N and T must be >= 1");
  }
  FreeEnergyTerms terms;
  terms.nll = -mc_log_likelihood(post, x, y, samples, rng);
  terms.kl = analytic_kl(post, prior);
  terms.scale = 1.0 / (static_cast<double>(n_data) * static_cast<double>(tasks_seen));
  terms.total = terms.nll + terms.scale * terms.kl;
  return terms;
}

FreeEnergyTerms free_energy_with_grads(const MeanFieldPosterior& post,
                                       const PriorSpec& prior, const Matrix& x,
                                       const std::vector<int>& y, std::size_t n_data,
                                       std::size_t tasks_seen,
                                       const std::vector<std::vector<double>>& noise,
                                       std::vector<double>& mu_grad,
                                       std::vector<double>& rho_grad) {
  check_batch(x, y);
  if (n_data < 1 || tasks_seen < 1) {
    throw UsageError("free_energy_with_grads: N and T must be >= 1");
  }
  if (noise.empty()) {
    throw UsageError("free_energy_with_grads: need at least one noise sample");
  }
  const std::size_t p = post.param_count();
  mu_grad.assign(p, 0.0);
  rho_grad.assign(p, 0.0);

  const std::vector<double> rho_flat = post.rho.flatten();
  std::vector<double> gate(p);  // d sigma / d rho = sigmoid(rho)
  for (std::size_t i = 0; i < p; ++i) gate[i] = 1.0 / (1.0 + std::exp(-rho_flat[i]));

  const double inv_s = 1.0 / static_cast<double>(noise.size());
  FreeEnergyTerms terms;
  MlpParams w_grads = MlpParams::zeros(post.mu.widths(), post.mu.output);
  std::vector<double> dw(p);
  for (const auto& eps : noise) {
    const MlpParams w = sample_weights_with_noise(post, eps);
    ForwardCache cache;
    const Matrix logits = mlp_forward(w, x, &cache);
    XentResult xent = softmax_xent(logits, y);
    terms.nll += inv_s * xent.loss;

    for (auto& layer : w_grads.layers) {
      std::fill(layer.w.data(), layer.w.data() + layer.w.size(), 0.0);
      std::fill(layer.b.data(), layer.b.data() + layer.b.size(), 0.0);
    }
    mlp_backward(w, cache, xent.logit_grads, &w_grads);
    w_grads.flatten_into(dw);
    for (std::size_t i = 0; i < p; ++i) {
      mu_grad[i] += inv_s * dw[i];
      rho_grad[i] += inv_s * dw[i] * eps[i] * gate[i];
    }
  }

  terms.kl = analytic_kl(post, prior);
  terms.scale = 1.0 / (static_cast<double>(n_data) * static_cast<double>(tasks_seen));
  terms.total = terms.nll + terms.scale * terms.kl;
  analytic_kl_backward(post, prior, terms.scale, mu_grad, rho_grad);
  return terms;
}

EpochStats train_epoch(MeanFieldPosterior& post, const PriorSpec& prior, const Matrix& x,
                       const std::vector<int>& y, std::size_t n_data, std::size_t tasks_seen,
                       const BnnHyper& hyper, AdamState& opt, Rng& rng) {
  check_batch(x, y);
  const std::size_t p = post.param_count();
  if (opt.m.size() != 2 * p) {
    throw UsageError("train_epoch: optimizer state does not match posterior size");
  }
  const std::vector<std::size_t> order = shuffled_indices(x.rows(), rng);
  const std::size_t batch = std::min<std::size_t>(std::max<std::size_t>(hyper.batch, 1), x.rows());

  EpochStats stats;
  std::size_t n_batches = 0;
  std::vector<double> mu_grad, rho_grad;
  std::vector<double> flat(2 * p), grad(2 * p);
  for (std::size_t start = 0; start < x.rows(); start += batch) {
    const std::size_t stop = std::min(start + batch, x.rows());
    std::vector<std::size_t> rows(order.begin() + start, order.begin() + stop);
    const Matrix bx = take_rows(x, rows);
    std::vector<int> by(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) by[i] = y[rows[i]];

    std::vector<std::vector<double>> noise(static_cast<std::size_t>(hyper.train_samples));
    for (auto& eps : noise) {
      eps.resize(p);
      for (auto& e : eps) e = rng.next_gaussian();
    }
    const FreeEnergyTerms terms = free_energy_with_grads(post, prior, bx, by, n_data,
                                                         tasks_seen, noise, mu_grad, rho_grad);
    stats.mean_nll += terms.nll;
    stats.mean_kl += terms.kl;
    ++n_batches;

    post.mu.flatten_into(std::span<double>(flat.data(), p));
    post.rho.flatten_into(std::span<double>(flat.data() + p, p));
    for (std::size_t i = 0; i < p; ++i) {
      grad[i] = mu_grad[i];
      grad[p + i] = rho_grad[i];
    }
    adam_step(flat, grad, opt, hyper.lr);
    post.mu.unflatten_from(std::span<const double>(flat.data(), p));
    post.rho.unflatten_from(std::span<const double>(flat.data() + p, p));
  }
  stats.mean_nll /= static_cast<double>(n_batches);
  stats.mean_kl /= static_cast<double>(n_batches);
  return stats;
}

Matrix predict(const MeanFieldPosterior& post, const Matrix& x, int samples, Rng& rng) {
  if (samples < 1) {
    throw UsageError("predict: need at least one weight sample");
  }
  Matrix probs(x.rows(), post.mu.output_width());
  for (int s = 0; s < samples; ++s) {
    const MlpParams w = sample_weights(post, rng);
    const Matrix p = softmax_rows(mlp_forward(w, x));
    for (std::size_t i = 0; i < probs.size(); ++i) {
      probs.data()[i] += p.data()[i];
    }
  }
  const double inv = 1.0 / static_cast<double>(samples);
  for (std::size_t i = 0; i < probs.size(); ++i) probs.data()[i] *= inv;
  return probs;
}

PriorSpec vcl_prior_update(const MeanFieldPosterior& post) {
  return PriorSpec::snapshot(post);
}

}  // namespace dpreplay
