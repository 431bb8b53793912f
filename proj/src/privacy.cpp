// Copyright 2026 The dpmestim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpmestim/privacy.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "dpmestim/normal.hpp"

namespace dpmestim {

void PrivacyParams::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("PrivacyParams: epsilon must be finite and positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("PrivacyParams: delta must lie in (0, 1)");
  }
}

double gaussian_sigma_residual(double sigma, const PrivacyParams& p) {
  const double a = -sigma * p.epsilon - 0.5 / sigma;
  const double b = -sigma * p.epsilon + 0.5 / sigma;
  return std_normal_cdf(a) + std_normal_cdf(b);
}

double sigma_naive(const PrivacyParams& p) {
  p.validate();
  const double l = 2.0 * std::log(2.0 / p.delta);
  return std::sqrt(l) / (2.0 * p.epsilon) +
         std::sqrt(l + 2.0 * p.epsilon) / (2.0 * p.epsilon);
}

double gaussian_sigma(const PrivacyParams& p) {
  p.validate();
  double lo = 1e-6;
  double hi = sigma_naive(p);
  // residual(lo) -> 1 as sigma -> 0, residual(hi) <= delta by the naive bound.
  if (gaussian_sigma_residual(lo, p) <= p.delta) return lo;
  assert(gaussian_sigma_residual(hi, p) <= p.delta);
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (gaussian_sigma_residual(mid, p) <= p.delta) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double k_steps(const PrivacyParams& p) {
  p.validate();
  return std::log(1.0 / (2.0 * p.delta)) / p.epsilon;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) : seed_(seed), gen_(splitmix64(seed)) {}

RngStream RngStream::zeros() {
  RngStream s(0);
  s.noise_free_ = true;
  return s;
}

RngStream RngStream::derive(std::string_view label) const {
  RngStream child(splitmix64(seed_ ^ fnv1a(label)));
  child.noise_free_ = noise_free_;
  return child;
}

double RngStream::uniform() {
  // 53 random bits mapped to the open interval: (k + 0.5) * 2^-53.
  const std::uint64_t bits = gen_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RngStream::sample_laplace(double scale) {
  if (scale < 0.0) throw std::invalid_argument("sample_laplace: negative scale");
  const double u = uniform();  // advance the stream even when derandomized
  if (noise_free_ || scale == 0.0) return 0.0;
  return u < 0.5 ? scale * std::log(2.0 * u) : -scale * std::log(2.0 * (1.0 - u));
}

double RngStream::sample_gaussian(double std) {
  if (std < 0.0) throw std::invalid_argument("sample_gaussian: negative std");
  const double u = uniform();
  if (noise_free_ || std == 0.0) return 0.0;
  return std * std_normal_quantile(u);
}

Eigen::VectorXd RngStream::sample_gaussian_vector(double std, int d) {
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v[i] = sample_gaussian(std);
  return v;
}

BudgetLedger compose(BudgetLedger ledger, const BudgetEntry& entry) {
  switch (entry.rule) {
    case BudgetEntry::Rule::kConditional:
      ledger.epsilon_total += entry.epsilon;
      ledger.delta_total += entry.delta + entry.gamma;
      break;
    case BudgetEntry::Rule::kTestRelease:
      ledger.delta_total = std::exp(ledger.epsilon_total) * ledger.delta_total +
                           entry.delta + entry.gamma;
      ledger.epsilon_total += entry.epsilon;
      break;
  }
  ledger.entries.push_back(entry);
  return ledger;
}

}  // namespace dpmestim
