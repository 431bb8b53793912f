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

#ifndef DPMESTIM_PRIVACY_HPP_
#define DPMESTIM_PRIVACY_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace dpmestim {

struct PrivacyParams {
  double epsilon = 1.0;        // > 0
  double delta = 1e-6;         // in (0, 1)
  void validate() const;
};

// Smallest sigma with Phi(-sigma*eps - 1/(2 sigma)) + Phi(-sigma*eps +
// 1/(2 sigma)) <= delta. The residual is strictly decreasing in sigma, so a
// bisection on [1e-6, sigma_naive] to relative tolerance 1e-12 returns the
// feasible endpoint of the final bracket.
double gaussian_sigma(const PrivacyParams& p);

// Closed-form upper bound sqrt(2 log(2/delta))/(2 eps) +
// sqrt(2 log(2/delta) + 2 eps)/(2 eps); also the bisection bracket for
// gaussian_sigma.
double sigma_naive(const PrivacyParams& p);

// Residual of the variance equation at a given sigma; exposed for tests.
double gaussian_sigma_residual(double sigma, const PrivacyParams& p);

// Laplace back-off step count (1/eps) * log(1/(2 delta)).
double k_steps(const PrivacyParams& p);

// Deterministic noise stream. All draws go through explicit inverse-CDF
// transforms of mt19937_64 output, so a seed pins the full sequence
// bit-for-bit across platforms. derive() spawns an independent stream keyed
// by (seed, label); this deliberately makes the release-noise draws of two
// mechanisms run with equal seeds coincide (common random numbers), which the
// experiment harness relies on for paired comparisons.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  // Stream whose Laplace/Gaussian draws are identically zero; used by tests
  // that exercise derandomized mechanism paths.
  static RngStream zeros();

  RngStream derive(std::string_view label) const;

  bool noise_free() const { return noise_free_; }
  std::uint64_t seed() const { return seed_; }

  // Uniform on the open interval (0, 1).
  double uniform();
  // Inverse-CDF Laplace with the given scale (mean zero). scale >= 0.
  double sample_laplace(double scale);
  // Gaussian via probit of a uniform: std * Phi^{-1}(U). std >= 0.
  double sample_gaussian(double std);
  Eigen::VectorXd sample_gaussian_vector(double std, int d);

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
  bool noise_free_ = false;
};

// Ledger of privacy expenditures. Entries fold left-to-right:
//   conditional   (eps, delta, gamma): totals += (eps, delta + gamma)
//   test_release  (eps, delta):        totals  = (eps_tot + eps,
//                                                 e^{eps_tot} delta_tot + delta)
struct BudgetEntry {
  enum class Rule { kConditional, kTestRelease };
  std::string label;
  double epsilon = 0.0;
  double delta = 0.0;
  double gamma = 0.0;  // failure mass of the conditioning event
  Rule rule = Rule::kConditional;
};

struct BudgetLedger {
  std::vector<BudgetEntry> entries;
  double epsilon_total = 0.0;
  double delta_total = 0.0;
};

BudgetLedger compose(BudgetLedger ledger, const BudgetEntry& entry);

}  // namespace dpmestim

#endif  // DPMESTIM_PRIVACY_HPP_
