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

#include "mechanism.h"

#include <cmath>

#include "errors.h"
#include "rng.h"

namespace dpreplay {

void DpConfig::validate() const {
  if (!(clip > 0.0)) {
    throw UsageError("DpConfig: clip norm must be > 0");
  }
  if (sigma < 0.0) {
    throw UsageError("DpConfig: noise multiplier must be >= 0");
  }
  if (!(sampling_fraction > 0.0) || sampling_fraction > 1.0) {
    throw UsageError("DpConfig: sampling fraction must be in (0, 1]");
  }
  if (!(target_delta > 0.0) || target_delta >= 1.0) {
    throw UsageError("DpConfig: delta must be in (0, 1)");
  }
}

namespace {

// Scales span [begin, end) of the row to norm bound c when it exceeds it.
void clip_block(double* row, std::size_t begin, std::size_t end, double c) {
  double sq = 0.0;
  for (std::size_t i = begin; i < end; ++i) sq += row[i] * row[i];
  const double norm = std::sqrt(sq);
  if (norm > c) {
    const double scale = c / norm;
    for (std::size_t i = begin; i < end; ++i) row[i] *= scale;
  }
}

}  // namespace

void clip_per_example(PerExampleGrads& grads, double clip, ClippingMode mode) {
  if (!(clip > 0.0)) {
    throw UsageError("clip_per_example: clip norm must be > 0");
  }
  if (std::isinf(clip)) return;
  const std::size_t p = grads.grads.cols();
  for (std::size_t ex = 0; ex < grads.grads.rows(); ++ex) {
    double* row = grads.grads.row(ex);
    if (mode == ClippingMode::kFlatL2) {
      clip_block(row, 0, p, clip);
    } else {
      const double per_layer =
          clip / std::sqrt(static_cast<double>(grads.layer_sizes.size()));
      std::size_t pos = 0;
      for (std::size_t size : grads.layer_sizes) {
        clip_block(row, pos, pos + size, per_layer);
        pos += size;
      }
    }
  }
}

std::vector<double> privatize(const PerExampleGrads& grads, double clip, double sigma,
                              Rng& rng) {
  const std::size_t n = grads.grads.rows();
  const std::size_t p = grads.grads.cols();
  if (n == 0) {
    throw UsageError("privatize: empty batch");
  }
  std::vector<double> out(p, 0.0);
  for (std::size_t ex = 0; ex < n; ++ex) {
    const double* row = grads.grads.row(ex);
    for (std::size_t i = 0; i < p; ++i) out[i] += row[i];
  }
  if (sigma > 0.0) {
    const double noise_std = sigma * clip;
    for (std::size_t i = 0; i < p; ++i) out[i] += noise_std * rng.next_gaussian();
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < p; ++i) out[i] *= inv_n;
  return out;
}

}  // namespace dpreplay
