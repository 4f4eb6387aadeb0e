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

#ifndef DPREPLAY_RNG_H_
#define DPREPLAY_RNG_H_

#include <array>
#include <cstdint>

namespace dpreplay {

// splitmix64 step; also used to expand seeds and derive child streams.
std::uint64_t splitmix64_next(std::uint64_t& state);

// Deterministic generator with a pinned cross-platform stream contract:
//
//   * xoshiro256** state, seeded by four consecutive splitmix64 outputs
//     of the 64-bit user seed;
//   * uniform doubles are (next_u64() >> 11) * 2^-53, in [0, 1);
//   * Gaussians use Box-Muller in a fixed call order: each pair consumes
//     u1 = 1 - uniform(), u2 = uniform() and yields
//     z0 = sqrt(-2 ln u1) cos(2 pi u2) first, then the cached
//     z1 = sqrt(-2 ln u1) sin(2 pi u2);
//   * bounded integers use the 128-bit multiply reduction
//     (next_u64() * n) >> 64.
//
// Identical seed + identical call sequence gives an identical stream.
// An Rng is single-owner: never share one across concurrent users, derive
// children with split() instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  double next_uniform();
  double next_gaussian();
  std::uint64_t next_below(std::uint64_t n);  // in [0, n), n >= 1

  // Child stream, seeded with splitmix64 of one parent draw.
  Rng split();

 private:
  std::array<std::uint64_t, 4> state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dpreplay

#endif  // DPREPLAY_RNG_H_
