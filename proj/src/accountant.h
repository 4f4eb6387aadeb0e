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

#ifndef DPREPLAY_ACCOUNTANT_H_
#define DPREPLAY_ACCOUNTANT_H_

#include <span>
#include <string>
#include <vector>

namespace dpreplay {

// Append-only record of subsampled-Gaussian invocations within one budget
// domain (one class GAN). Consecutive steps with the same (q, sigma)
// aggregate into a single entry. Adjacency is add/remove one example;
// batch subsampling is accounted as Poisson sampling at rate q, the usual
// approximation for shuffle-based batching.
struct LedgerEntry {
  double q = 0.0;
  double sigma = 0.0;
  long steps = 0;
};

class PrivacyLedger {
 public:
  PrivacyLedger() = default;
  explicit PrivacyLedger(std::string domain) : domain_(std::move(domain)) {}

  void append(double q, double sigma, long steps = 1);
  const std::vector<LedgerEntry>& entries() const { return entries_; }
  const std::string& domain() const { return domain_; }
  long total_steps() const;
  bool empty() const { return entries_.empty(); }

 private:
  std::string domain_;
  std::vector<LedgerEntry> entries_;
};

// Renyi-DP values at ascending integer orders.
struct RdpCurve {
  std::vector<int> orders;
  std::vector<double> values;
};

// Default order grid {2..64} plus {128, 256}.
std::vector<int> default_rdp_orders();

// RDP of one subsampled-Gaussian step at integer order alpha >= 2:
// q = 1 gives alpha / (2 sigma^2); otherwise the binomial sum
// (1/(alpha-1)) log sum_k C(alpha,k) (1-q)^(alpha-k) q^k e^{k(k-1)/(2 sigma^2)},
// evaluated in log space.
double rdp_subsampled_gaussian(double q, double sigma, int alpha);

// Additive composition across all ledger entries. Entries with sigma == 0
// carry no guarantee and make the whole curve infinite.
RdpCurve compose(const PrivacyLedger& ledger, std::span<const int> orders);

struct EpsilonReport {
  double epsilon = 0.0;
  int order = 0;  // argmin order
};

// epsilon = min over orders of RDP(alpha) + log(1/delta) / (alpha - 1).
EpsilonReport to_eps_delta(const RdpCurve& curve, double delta);

// Convenience: epsilon consumed by `steps` homogeneous invocations.
EpsilonReport steps_to_eps(double q, double sigma, long steps, double delta);

// Smallest noise multiplier (bisection to 1e-4 relative) whose composed
// epsilon over the planned steps stays at or below the target.
double calibrate_sigma(double target_epsilon, double delta, double q, long steps);

// Largest step count whose composed epsilon stays at or below the target
// for the given (q, sigma).
long max_steps_within_budget(double target_epsilon, double delta, double q, double sigma);

}  // namespace dpreplay

#endif  // DPREPLAY_ACCOUNTANT_H_
