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

#include "dpmestim/eigen_release.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dpmestim {

namespace {

constexpr long kHittingCap = 10000000;

// Bisection tolerance for composition inversion, relative to the bracket.
double inversion_tol(double hi, double floor) {
  return std::max(1e-10 * (hi - floor), 1e-300);
}

EigenRelease run_decreasing_release(const Recursion& R, double statistic,
                                    double hi, const PrivacyParams& p,
                                    RngStream& rng, const char* noise_label) {
  p.validate();
  EigenRelease out;
  out.budget = p;
  const long n_steps = hitting_time(R, statistic, kHittingCap);
  out.saturated = n_steps >= kHittingCap;
  auto lap_rng = rng.derive(noise_label);
  out.n_hat = static_cast<double>(n_steps) + lap_rng.sample_laplace(1.0) / p.epsilon;
  const double k = k_steps(p);
  const long m = inversion_exponent(out.n_hat, k);
  const InversionResult inv =
      invert_composition(R, m, hi, inversion_tol(hi, R.floor));
  out.lambda_hat = inv.value;
  out.saturated = out.saturated || inv.saturated || out.n_hat - k <= 0.0;
  return out;
}

}  // namespace

long inversion_exponent(double n_hat, double k) {
  const double x = n_hat - k;
  if (!(x > 0.0)) return 0;
  const double c = std::ceil(x);
  return std::max(0L, static_cast<long>(c) - 1);
}

EigenRelease release_lambda_min_generic_at(const FitResult& fitted,
                                           const GlmLoss& loss,
                                           const LipschitzConstants& L, int n,
                                           const PrivacyParams& p,
                                           RngStream& rng) {
  (void)loss;
  const Recursion R = make_generic_min_recursion(L, n, fitted.lambda_reg);
  const double statistic = fitted.lambda_min;  // lambda_min_unreg + lambda_reg
  return run_decreasing_release(R, statistic, L.L1 + fitted.lambda_reg, p, rng,
                                "lambda-min-laplace");
}

EigenRelease release_lambda_min_generic(const Dataset& data,
                                        const GlmLoss& loss, double lambda_reg,
                                        const PrivacyParams& p,
                                        RngStream& rng) {
  const FitResult fitted = fit(data, loss, {.lambda_reg = lambda_reg});
  const LipschitzConstants L = lipschitz_constants(loss, data.domain, data.d());
  return release_lambda_min_generic_at(fitted, loss, L, data.n(), p, rng);
}

EigenRelease release_lambda_min_qsc_at(const FitResult& fitted,
                                       const GlmLoss& loss,
                                       const LipschitzConstants& L, int n,
                                       const PrivacyParams& p,
                                       RngStream& rng) {
  const Recursion R = make_qsc_min_recursion(loss, L, n, fitted.lambda_reg);
  const double statistic = fitted.lambda_min_unreg;
  return run_decreasing_release(R, statistic, L.L1 + fitted.lambda_reg, p, rng,
                                "lambda-min-laplace");
}

EigenRelease release_lambda_min_qsc(const Dataset& data, const GlmLoss& loss,
                                    double lambda_reg, const PrivacyParams& p,
                                    RngStream& rng) {
  const FitResult fitted = fit(data, loss, {.lambda_reg = lambda_reg});
  const LipschitzConstants L = lipschitz_constants(loss, data.domain, data.d());
  return release_lambda_min_qsc_at(fitted, loss, L, data.n(), p, rng);
}

EigenRelease release_lambda_max_at(const FitResult& fitted, const GlmLoss& loss,
                                   const LipschitzConstants& L, int n,
                                   double lambda_hat_min,
                                   const PrivacyParams& p, RngStream& rng) {
  p.validate();
  EigenRelease out;
  out.budget = p;
  auto lap_rng = rng.derive("lambda-max-laplace");
  if (!check_condition_C1(lambda_hat_min, fitted.lambda_reg, loss, L, n) ||
      lambda_hat_min + fitted.lambda_reg <= 0.0) {
    // Cannot certify a growth factor; fall back to the trivial upper bound.
    out.n_hat = lap_rng.sample_laplace(1.0) / p.epsilon;
    out.lambda_hat = L.L1;
    out.saturated = true;
    return out;
  }
  Recursion R;
  try {
    R = make_qsc_max_recursion(lambda_hat_min + fitted.lambda_reg, loss, L, n);
  } catch (const std::domain_error&) {
    // rho < 1/2 permits certificates passing C1 yet below the domain of the
    // growth factor; the trivial bound is the only certifiable one there.
    out.n_hat = lap_rng.sample_laplace(1.0) / p.epsilon;
    out.lambda_hat = L.L1;
    out.saturated = true;
    return out;
  }
  const long n_steps = hitting_time(R, fitted.lambda_max_unreg, kHittingCap);
  out.saturated = n_steps >= kHittingCap;
  out.n_hat = static_cast<double>(n_steps) + lap_rng.sample_laplace(1.0) / p.epsilon;
  const double k = k_steps(p);
  const long m = inversion_exponent(out.n_hat, k);
  const InversionResult inv =
      invert_composition(R, m, L.L1, inversion_tol(L.L1, 0.0));
  out.lambda_hat = std::min(inv.value, L.L1);
  out.saturated = out.saturated || inv.saturated || out.lambda_hat >= L.L1 ||
                  out.n_hat - k <= 0.0;
  return out;
}

EigenRelease release_lambda_max(const Dataset& data, const GlmLoss& loss,
                                double lambda_reg, double lambda_hat_min,
                                const PrivacyParams& p, RngStream& rng) {
  const FitResult fitted = fit(data, loss, {.lambda_reg = lambda_reg});
  const LipschitzConstants L = lipschitz_constants(loss, data.domain, data.d());
  return release_lambda_max_at(fitted, loss, L, data.n(), lambda_hat_min, p, rng);
}

}  // namespace dpmestim
