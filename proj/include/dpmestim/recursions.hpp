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

#ifndef DPMESTIM_RECURSIONS_HPP_
#define DPMESTIM_RECURSIONS_HPP_

#include <functional>
#include <optional>

#include "dpmestim/loss.hpp"

namespace dpmestim {

// Monotone one-dimensional recursion map. Decreasing maps satisfy
// R(lambda) <= lambda and accelerate toward the floor; increasing maps
// satisfy R(lambda) >= lambda and clip at the cap. Maps already fold in
// their domain guard and clamping, so iteration never leaves the valid range.
struct Recursion {
  enum class Direction { kDecreasing, kIncreasing };
  std::function<double(double)> map;
  double floor = 0.0;
  Direction direction = Direction::kDecreasing;
  std::optional<double> cap;  // release threshold for increasing recursions
  std::function<bool(double)> domain_guard;  // false => hard-threshold branch
};

// R(lambda) = (lambda/2)[1 + sqrt(1 - a/lambda^2)] - b on lambda^2 > a,
// hard-thresholded to the floor outside and clamped at the floor from below.
Recursion make_sqrt_recursion(double a, double b, double floor);

// R(lambda) = lambda [2 - exp(b(1 - sqrt(1 - a/(lambda + lambda0))))] - c on
// lambda + lambda0 > a, thresholded otherwise.
Recursion make_exp_recursion(double a, double b, double c, double lambda0,
                             double floor);

// R(lambda) = max{ (lambda/2)[1 + sqrt(1 - 8 L0 L2/(n lambda^2))] - L1/n,
//                  lambda_reg },
// with sqrt(x) = -inf for x <= 0; floor = lambda_reg.
Recursion make_generic_min_recursion(const LipschitzConstants& L, int n,
                                     double lambda_reg);

// R(lambda) = lambda [1 - kappa(r t(lambda + lambda_reg))]_+ - L1/n when
// lambda passes Condition C1, else 0; clamped at the floor 0.
Recursion make_qsc_min_recursion(const GlmLoss& loss,
                                 const LipschitzConstants& L, int n,
                                 double lambda_reg);

// Increasing recursion for the maximal eigenvalue, anchored at a certified
// lower bound lambda_hat (regularized):
// R(lambda) = min{ lambda (1 + kappa(t(lambda_hat) r)) + L1/n, L1 }.
Recursion make_qsc_max_recursion(double lambda_hat, const GlmLoss& loss,
                                 const LipschitzConstants& L, int n);

// k-fold composition R^k(lambda); R^0 is the identity.
double iterate(const Recursion& R, double lambda, long k);

// Smallest N with R^N(lambda) <= floor (decreasing) or >= cap (increasing);
// cap_iters if never reached within the budget.
long hitting_time(const Recursion& R, double lambda, long cap_iters = 10000000);

struct InversionResult {
  double value = 0.0;
  bool saturated = false;
};

// Decreasing: sup{ lambda >= floor : R^m(lambda) <= floor }, located by
// bisection so that R^m(value) <= floor < R^m(value + tol). Increasing:
// inf{ lambda : R^m(lambda) >= cap }, clamped at the cap. m = 0 returns the
// floor (resp. cap). Saturates at hi when R^m(hi) <= floor.
InversionResult invert_composition(const Recursion& R, long m, double hi,
                                   double tol);

// Parameter-change bound t(lambda) = [1 - sqrt(1 - 8 a r L0/(lambda n))] /
// (2 a r) with a the linear self-concordance constant; for a r = 0 the
// analytic limit 2 L0/(lambda n). Throws when the discriminant is negative.
double t_param_change(double lambda, double alpha, double r, double L0, int n);

// Condition C1: lambda_min + lambda_reg/rho >=
//   4 L0 alpha r/(rho (1 - rho) n) + L1/(rho n).
bool check_condition_C1(double lambda_min, double lambda_reg,
                        const GlmLoss& loss, const LipschitzConstants& L,
                        int n);

// Condition C2: lambda_min + lambda_reg >= max{3 L1/n, sqrt(12 L0 L2/n)}.
bool check_condition_C2(double lambda_min, double lambda_reg,
                        const LipschitzConstants& L, int n);

}  // namespace dpmestim

#endif  // DPMESTIM_RECURSIONS_HPP_
