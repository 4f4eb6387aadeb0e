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

#include "posterior.h"

#include <cmath>

#include "errors.h"
#include "rng.h"

namespace dpreplay {

double softplus(double x) {
  if (x > 30.0) return x;
  if (x < -30.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

double softplus_inv(double y) {
  if (y <= 0.0) {
    throw UsageError("softplus_inv: argument must be positive");
  }
  if (y > 30.0) return y;
  return std::log(std::expm1(y));
}

MeanFieldPosterior MeanFieldPosterior::init(const std::vector<std::size_t>& widths,
                                            Activation output, Rng& rng) {
  MeanFieldPosterior post;
  post.mu = MlpParams::zeros(widths, output);
  post.rho = MlpParams::zeros(widths, output);
  const double rho0 = softplus_inv(0.05);
  for (std::size_t l = 0; l < post.mu.layers.size(); ++l) {
    double* w = post.mu.layers[l].w.data();
    for (std::size_t i = 0; i < post.mu.layers[l].w.size(); ++i) {
      w[i] = 0.1 * rng.next_gaussian();
    }
    double* rw = post.rho.layers[l].w.data();
    for (std::size_t i = 0; i < post.rho.layers[l].w.size(); ++i) rw[i] = rho0;
    double* rb = post.rho.layers[l].b.data();
    for (std::size_t i = 0; i < post.rho.layers[l].b.size(); ++i) rb[i] = rho0;
  }
  return post;
}

PriorSpec PriorSpec::snapshot(const MeanFieldPosterior& post) {
  PriorSpec prior;
  prior.scalar = false;
  prior.snap_mu = post.mu;
  prior.snap_sigma = post.rho;
  for (auto& layer : prior.snap_sigma.layers) {
    double* w = layer.w.data();
    for (std::size_t i = 0; i < layer.w.size(); ++i) w[i] = softplus(w[i]);
    double* b = layer.b.data();
    for (std::size_t i = 0; i < layer.b.size(); ++i) b[i] = softplus(b[i]);
  }
  return prior;
}

MlpParams sample_weights(const MeanFieldPosterior& post, Rng& rng) {
  std::vector<double> noise(post.param_count());
  for (auto& e : noise) e = rng.next_gaussian();
  return sample_weights_with_noise(post, noise);
}

MlpParams sample_weights_with_noise(const MeanFieldPosterior& post,
                                    const std::vector<double>& noise) {
  if (noise.size() != post.param_count()) {
    throw UsageError("sample_weights_with_noise: noise size mismatch");
  }
  MlpParams w = post.mu;
  std::vector<double> mu_flat = post.mu.flatten();
  std::vector<double> rho_flat = post.rho.flatten();
  std::vector<double> flat(mu_flat.size());
  for (std::size_t i = 0; i < flat.size(); ++i) {
    flat[i] = mu_flat[i] + softplus(rho_flat[i]) * noise[i];
  }
  w.unflatten_from(flat);
  return w;
}

namespace {

// Applies fn(mu, rho, mu0, sigma0, flat_index) over all weights.
template <typename Fn>
void for_each_weight(const MeanFieldPosterior& post, const PriorSpec& prior, Fn&& fn) {
  const std::vector<double> mu = post.mu.flatten();
  const std::vector<double> rho = post.rho.flatten();
  std::vector<double> mu0, sigma0;
  if (!prior.scalar) {
    mu0 = prior.snap_mu.flatten();
    sigma0 = prior.snap_sigma.flatten();
    if (mu0.size() != mu.size()) {
      throw UsageError("prior snapshot shape does not match posterior");
    }
  }
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double m0 = prior.scalar ? prior.mu0 : mu0[i];
    const double s0 = prior.scalar ? prior.sigma0 : sigma0[i];
    fn(mu[i], rho[i], m0, s0, i);
  }
}

}  // namespace

double analytic_kl(const MeanFieldPosterior& post, const PriorSpec& prior) {
  double kl = 0.0;
  for_each_weight(post, prior, [&](double mu, double rho, double mu0, double s0, std::size_t) {
    const double sigma = softplus(rho);
    const double diff = mu - mu0;
    kl += std::log(s0 / sigma) + (sigma * sigma + diff * diff) / (2.0 * s0 * s0) - 0.5;
  });
  return kl;
}

void analytic_kl_backward(const MeanFieldPosterior& post, const PriorSpec& prior,
                          double scale, std::vector<double>& mu_grad,
                          std::vector<double>& rho_grad) {
  if (mu_grad.size() != post.param_count() || rho_grad.size() != post.param_count()) {
    throw UsageError("analytic_kl_backward: gradient size mismatch");
  }
  for_each_weight(post, prior, [&](double mu, double rho, double mu0, double s0, std::size_t i) {
    const double sigma = softplus(rho);
    const double dsigma_drho = 1.0 / (1.0 + std::exp(-rho));  // sigmoid
    mu_grad[i] += scale * (mu - mu0) / (s0 * s0);
    rho_grad[i] += scale * (sigma / (s0 * s0) - 1.0 / sigma) * dsigma_drho;
  });
}

}  // namespace dpreplay
