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

#ifndef DPREPLAY_MECHANISM_H_
#define DPREPLAY_MECHANISM_H_

#include <vector>

#include "mlp.h"

namespace dpreplay {

class Rng;

enum class ClippingMode {
  kFlatL2 = 0,   // one global l2 bound per example
  kPerLayer = 1  // per-layer bound C / sqrt(n_layers); total sensitivity still C
};

// Gaussian-mechanism parameters for one private training run. The noise
// added to a clipped gradient sum has standard deviation sigma * clip.
struct DpConfig {
  double clip = 1.0;              // per-example l2 bound C, > 0
  double sigma = 1.0;             // noise multiplier, >= 0 (0 disables the guarantee)
  double sampling_fraction = 0.0; // q = batch / private dataset size
  double target_epsilon = 0.0;
  double target_delta = 1e-8;
  ClippingMode clipping = ClippingMode::kFlatL2;

  void validate() const;
};

// g <- g * min(1, C / ||g||_2) per example, in place. Zero gradients pass
// through unchanged. Per-layer mode applies the same rule per layer block
// with bound C / sqrt(n_layers).
void clip_per_example(PerExampleGrads& grads, double clip,
                      ClippingMode mode = ClippingMode::kFlatL2);

// (sum_i g_i + N(0, sigma^2 C^2 I)) / batch. Caller guarantees the rows
// are already clipped. sigma == 0 adds nothing and draws nothing from rng.
std::vector<double> privatize(const PerExampleGrads& grads, double clip, double sigma,
                              Rng& rng);

}  // namespace dpreplay

#endif  // DPREPLAY_MECHANISM_H_
