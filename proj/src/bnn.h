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

#ifndef DPREPLAY_BNN_H_
#define DPREPLAY_BNN_H_

#include <cstddef>
#include <vector>

#include "matrix.h"
#include "mlp.h"
#include "posterior.h"

namespace dpreplay {

class Rng;

// Loss decomposition of one mini-batch: total = nll + scale * kl with
// scale = 1 / (N * T), N the mixed-dataset size and T the number of
// tasks seen so far.
struct FreeEnergyTerms {
  double nll = 0.0;
  double kl = 0.0;
  double scale = 0.0;
  double total = 0.0;
};

struct BnnHyper {
  std::size_t batch = 128;
  double lr = 1e-3;
  int train_samples = 1;  // weight samples per training step
  int eval_samples = 20;  // weight samples at prediction time
  int epochs = 10;
};

struct EpochStats {
  double mean_nll = 0.0;
  double mean_kl = 0.0;
};

// Monte Carlo estimate of the expected log-likelihood:
// (1/S) sum_s mean-over-batch log p(y | w_s, x).
double mc_log_likelihood(const MeanFieldPosterior& post, const Matrix& x,
                         const std::vector<int>& y, int samples, Rng& rng);

FreeEnergyTerms free_energy(const MeanFieldPosterior& post, const PriorSpec& prior,
                            const Matrix& x, const std::vector<int>& y, std::size_t n_data,
                            std::size_t tasks_seen, int samples, Rng& rng);

// Same objective with frozen reparameterization noise (one vector per
// sample; flat parameter order) and analytic gradients w.r.t. (mu, rho)
// through both the likelihood and the KL term.
FreeEnergyTerms free_energy_with_grads(const MeanFieldPosterior& post,
                                       const PriorSpec& prior, const Matrix& x,
                                       const std::vector<int>& y, std::size_t n_data,
                                       std::size_t tasks_seen,
                                       const std::vector<std::vector<double>>& noise,
                                       std::vector<double>& mu_grad,
                                       std::vector<double>& rho_grad);

// One pass over the shuffled dataset; one adam step per mini-batch on
// FreeEnergyTerms.total. The optimizer state covers (mu, rho) jointly.
EpochStats train_epoch(MeanFieldPosterior& post, const PriorSpec& prior, const Matrix& x,
                       const std::vector<int>& y, std::size_t n_data, std::size_t tasks_seen,
                       const BnnHyper& hyper, AdamState& opt, Rng& rng);

// Mean over weight samples of the softmax outputs; rows sum to 1.
Matrix predict(const MeanFieldPosterior& post, const Matrix& x, int samples, Rng& rng);

// Posterior snapshot to use as the next task's prior; detached from
// future updates.
PriorSpec vcl_prior_update(const MeanFieldPosterior& post);

}  // namespace dpreplay

#endif  // DPREPLAY_BNN_H_
