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

#include "accountant.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.h"

namespace dpreplay {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_binom(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_sum_exp(const std::vector<double>& logs) {
  double max_v = -kInf;
  for (double v : logs) max_v = std::max(max_v, v);
  if (!std::isfinite(max_v)) return max_v;
  double sum = 0.0;
  for (double v : logs) sum += std::exp(v - max_v);
  return max_v + std::log(sum);
}

}  // namespace

void PrivacyLedger::append(double q, double sigma, long steps) {
  if (steps <= 0) {
    throw UsageError("PrivacyLedger::append: step count must be positive");
  }
  if (!(q > 0.0) || q > 1.0) {
    throw UsageError("PrivacyLedger::append: q must be in (0, 1]");
  }
  if (sigma < 0.0) {
    throw UsageError("PrivacyLedger::append: sigma must be >= 0");
  }
  if (!entries_.empty() && entries_.back().q == q && entries_.back().sigma == sigma) {
    entries_.back().steps += steps;
    return;
  }
  entries_.push_back(LedgerEntry{q, sigma, steps});
}

long PrivacyLedger::total_steps() const {
  long total = 0;
  for (const auto& e : entries_) total += e.steps;
  return total;
}

std::vector<int> default_rdp_orders() {
  std::vector<int> orders;
  for (int a = 2; a <= 64; ++a) orders.push_back(a);
  orders.push_back(128);
  orders.push_back(256);
  return orders;
}

double rdp_subsampled_gaussian(double q, double sigma, int alpha) {
  if (alpha < 2) {
    throw UsageError("rdp_subsampled_gaussian: order must be an integer >= 2");
  }
  if (!(sigma > 0.0)) {
    throw UsageError("rdp_subsampled_gaussian: sigma must be > 0");
  }
  if (!(q > 0.0) || q > 1.0) {
    throw UsageError("rdp_subsampled_gaussian: q must be in (0, 1]");
  }
  if (q == 1.0) {
    return static_cast<double>(alpha) / (2.0 * sigma * sigma);
  }
  const double log_q = std::log(q);
  const double log_1mq = std::log1p(-q);
  std::vector<double> terms(static_cast<std::size_t>(alpha) + 1);
  for (int k = 0; k <= alpha; ++k) {
    terms[static_cast<std::size_t>(k)] =
        log_binom(alpha, k) + (alpha - k) * log_1mq + k * log_q +
        (static_cast<double>(k) * (k - 1)) / (2.0 * sigma * sigma);
  }
  const double value = log_sum_exp(terms) / (static_cast<double>(alpha) - 1.0);
  return std::max(value, 0.0);
}

RdpCurve compose(const PrivacyLedger& ledger, std::span<const int> orders) {
  RdpCurve curve;
  curve.orders.assign(orders.begin(), orders.end());
  curve.values.assign(orders.size(), 0.0);
  for (const auto& entry : ledger.entries()) {
    for (std::size_t i = 0; i < orders.size(); ++i) {
      const double step_rdp = entry.sigma > 0.0
                                  ? rdp_subsampled_gaussian(entry.q, entry.sigma, orders[i])
                                  : kInf;
      curve.values[i] += static_cast<double>(entry.steps) * step_rdp;
    }
  }
  return curve;
}

EpsilonReport to_eps_delta(const RdpCurve& curve, double delta) {
  if (curve.orders.empty()) {
    throw UsageError("to_eps_delta: empty curve");
  }
  if (!(delta > 0.0) || delta >= 1.0) {
    throw UsageError("to_eps_delta: delta must be in (0, 1)");
  }
  const double log_inv_delta = std::log(1.0 / delta);
  EpsilonReport best{kInf, 0};
  for (std::size_t i = 0; i < curve.orders.size(); ++i) {
    const double eps =
        curve.values[i] + log_inv_delta / (static_cast<double>(curve.orders[i]) - 1.0);
    if (eps < best.epsilon) {
      best.epsilon = eps;
      best.order = curve.orders[i];
    }
  }
  return best;
}

EpsilonReport steps_to_eps(double q, double sigma, long steps, double delta) {
  PrivacyLedger ledger;
  ledger.append(q, sigma, steps);
  const std::vector<int> orders = default_rdp_orders();
  return to_eps_delta(compose(ledger, orders), delta);
}

double calibrate_sigma(double target_epsilon, double delta, double q, long steps) {
  if (!(target_epsilon > 0.0)) {
    throw UsageError("calibrate_sigma: target epsilon must be > 0");
  }
  if (steps <= 0) {
    throw UsageError("calibrate_sigma: planned steps must be positive");
  }
  constexpr double kSigmaMax = 1e6;
  double lo = 1e-3;
  double hi = lo;
  // Exponential search for a feasible upper end.
  while (steps_to_eps(q, hi, steps, delta).epsilon > target_epsilon) {
    hi *= 2.0;
    if (hi > kSigmaMax) {
      throw BudgetError("calibrate_sigma: no sigma <= 1e6 reaches the target budget");
    }
  }
  if (hi == lo) return hi;  // already feasible at the lower bound
  lo = hi / 2.0;
  while (hi - lo > 1e-4 * lo) {
    const double mid = 0.5 * (lo + hi);
    if (steps_to_eps(q, mid, steps, delta).epsilon > target_epsilon) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

long max_steps_within_budget(double target_epsilon, double delta, double q, double sigma) {
  if (!(sigma > 0.0)) return 0;
  if (steps_to_eps(q, sigma, 1, delta).epsilon > target_epsilon) return 0;
  long lo = 1, hi = 1;
  while (steps_to_eps(q, sigma, hi, delta).epsilon <= target_epsilon) {
    if (hi > (1L << 40)) break;
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    if (steps_to_eps(q, sigma, mid, delta).epsilon <= target_epsilon) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace dpreplay
