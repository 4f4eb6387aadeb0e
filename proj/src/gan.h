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

#ifndef DPREPLAY_GAN_H_
#define DPREPLAY_GAN_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "accountant.h"
#include "matrix.h"
#include "mechanism.h"
#include "mlp.h"

namespace dpreplay {

class Rng;

struct GanConfig {
  std::size_t latent_dim = 32;
  std::vector<std::size_t> gen_hidden = {64};
  std::vector<std::size_t> disc_hidden = {64};
  double lr = 2e-3;
  double dp_lr = 0.0;  // learning rate for noisy updates; 0 means use lr
  std::size_t batch = 32;
  int epochs = 20;
  int pretrain_epochs = 0;  // on public data, when given

  void validate(std::size_t image_size) const;
};

struct PrivacyStamp {
  double epsilon = 0.0;
  double delta = 0.0;
};

// Generator + discriminator for one class of one task; the persistent
// memory kept after the class's data is deleted.
struct GanPair {
  MlpParams gen;   // latent -> image, sigmoid output
  MlpParams disc;  // image -> 1 logit, identity output
  int class_label = 0;
  int task_id = 0;
  std::size_t latent_dim = 0;
  std::optional<PrivacyStamp> stamp;  // present iff trained with DP noise
};

class ReplayStore {
 public:
  void add(GanPair pair);
  const std::vector<GanPair>& pairs() const { return pairs_; }
  bool empty() const { return pairs_.empty(); }

 private:
  std::vector<GanPair> pairs_;
};

// Both loss values and the gradients of the MEAN losses at the
// discriminator logits, recovered from the probabilities:
//   d_loss = -mean[log d_real + log(1 - d_fake)]
//   g_loss = -mean log d_fake            (non-saturating)
struct GanLosses {
  double d_loss = 0.0;
  double g_loss = 0.0;
  Matrix d_grad_real;  // (d_real - 1) / n
  Matrix d_grad_fake;  // d_fake / n
  Matrix g_grad_fake;  // (d_fake - 1) / n
};

GanLosses gan_losses(const Matrix& d_real, const Matrix& d_fake);

// Logits clamped to [-30, 30] before the sigmoid so the logs stay finite.
constexpr double kLogitClamp = 30.0;
Matrix clamped_sigmoid(const Matrix& logits);

// Zeroes gradient entries where the clamp was active (the loss is locally
// constant in the raw logit there).
void gate_clamped(Matrix& grads, const Matrix& logits);

struct GanTrainStats {
  long disc_steps = 0;          //噪 noisy steps when DP, total otherwise
  long planned_disc_steps = 0;
  bool halted_at_budget = false;
  double sampling_fraction = 0.0;
};

// Trains one class's GAN with alternating D/G updates. Every
// discriminator update flows through per-example clipping and the
// Gaussian mechanism; with dp == nullptr that path degenerates to
// (clip = inf, sigma = 0) and adds no noise, draws no noise, and logs
// nothing. With dp set, each noisy D step appends one ledger entry, and
// training halts once another step would push the composed epsilon past
// the target. Public data, when given, pretrains both networks without
// noise and without ledger entries.
GanPair train_class_gan(const Matrix& data, int class_label, int task_id,
                        const GanConfig& cfg, const DpConfig* dp, PrivacyLedger* ledger,
                        const Matrix* public_data, Rng& rng,
                        GanTrainStats* stats = nullptr);

// n generated images from one pair, pixels clamped to [0, 1].
Matrix sample_gan(const GanPair& pair, std::size_t n, Rng& rng);

struct LabeledBatch {
  Matrix x;
  std::vector<int> y;
};

// n_per_class samples from every stored generator, labeled with the
// generator's class.
LabeledBatch sample_replay(const ReplayStore& store, std::size_t n_per_class, Rng& rng);

}  // namespace dpreplay

#endif  // DPREPLAY_GAN_H_
