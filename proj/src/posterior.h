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

#ifndef DPREPLAY_POSTERIOR_H_
#define DPREPLAY_POSTERIOR_H_

#include <cstddef>
#include <vector>

#include "mlp.h"

namespace dpreplay {

class Rng;

double softplus(double x);      // ln(1 + e^x), stable for large |x|
double softplus_inv(double y);  // ln(e^y - 1), y > 0

// Fully factorized Gaussian over the weights of a classifier network.
// Per weight: mean mu and rho with sigma = softplus(rho) > 0. Both sets
// mirror the MlpParams shape exactly.
struct MeanFieldPosterior {
  MlpParams mu;
  MlpParams rho;

  // mu ~ N(0, 0.1^2), sigma = 0.05 everywhere: near-deterministic start.
  static MeanFieldPosterior init(const std::vector<std::size_t>& widths,
                                 Activation output, Rng& rng);

  std::size_t param_count() const { return mu.param_count(); }
};

// Gaussian prior over the weights: either a shared scalar N(mu0, sigma0^2)
// or a full per-weight snapshot of an earlier posterior.
struct PriorSpec {
  bool scalar = true;
  double mu0 = 0.0;
  double sigma0 = 1.0;
  MlpParams snap_mu;     // used when !scalar
  MlpParams snap_sigma;  // stddevs, same shape

  static PriorSpec standard_normal() { return PriorSpec{}; }
  static PriorSpec snapshot(const MeanFieldPosterior& post);
};

// w = mu + softplus(rho) * eps with eps ~ N(0, I) drawn from rng in
// flat parameter order.
MlpParams sample_weights(const MeanFieldPosterior& post, Rng& rng);

// Same reparameterization with caller-provided noise (frozen eps).
MlpParams sample_weights_with_noise(const MeanFieldPosterior& post,
                                    const std::vector<double>& noise);

// Sum over weights of log(sigma0/sigma) + (sigma^2 + (mu-mu0)^2) / (2 sigma0^2) - 1/2.
double analytic_kl(const MeanFieldPosterior& post, const PriorSpec& prior);

// Accumulates scale * dKL/d(mu, rho) into flat gradient vectors laid out
// like MlpParams::flatten().
void analytic_kl_backward(const MeanFieldPosterior& post, const PriorSpec& prior,
                          double scale, std::vector<double>& mu_grad,
                          std::vector<double>& rho_grad);

}  // namespace dpreplay

#endif  // DPREPLAY_POSTERIOR_H_
