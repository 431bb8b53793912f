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

#include "dpmestim/recursions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dpmestim {

Recursion make_sqrt_recursion(double a, double b, double floor) {
  if (a < 0.0 || b < 0.0) {
    throw std::invalid_argument("make_sqrt_recursion: a, b must be nonnegative");
  }
  Recursion R;
  R.floor = floor;
  R.direction = Recursion::Direction::kDecreasing;
  R.domain_guard = [a](double lam) { return a == 0.0 || lam * lam > a; };
  R.map = [a, b, floor, guard = R.domain_guard](double lam) {
    if (lam <= floor) return floor;
    if (!guard(lam)) return floor;
    const double v = a == 0.0
                         ? lam - b
                         : 0.5 * lam * (1.0 + std::sqrt(1.0 - a / (lam * lam))) - b;
    return std::max(v, floor);
  };
  return R;
}

Recursion make_exp_recursion(double a, double b, double c, double lambda0,
                             double floor) {
  if (a < 0.0 || b < 0.0 || c < 0.0) {
    throw std::invalid_argument("make_exp_recursion: a, b, c must be nonnegative");
  }
  Recursion R;
  R.floor = floor;
  R.direction = Recursion::Direction::kDecreasing;
  R.domain_guard = [a, lambda0](double lam) { return lam + lambda0 > a; };
  R.map = [a, b, c, lambda0, floor, guard = R.domain_guard](double lam) {
    if (lam <= floor) return floor;
    if (!guard(lam)) return floor;
    const double root = std::sqrt(1.0 - a / (lam + lambda0));
    const double v = lam * (2.0 - std::exp(b * (1.0 - root))) - c;
    return std::max(v, floor);
  };
  return R;
}

Recursion make_generic_min_recursion(const LipschitzConstants& L, int n,
                                     double lambda_reg) {
  if (n < 1) throw std::invalid_argument("make_generic_min_recursion: n >= 1");
  const double a = 8.0 * L.L0 * L.L2 / n;
  const double b = L.L1 / n;
  Recursion R;
  R.floor = lambda_reg;
  R.direction = Recursion::Direction::kDecreasing;
  R.domain_guard = [a](double lam) { return lam * lam > a; };
  R.map = [a, b, lambda_reg, guard = R.domain_guard](double lam) {
    if (lam <= lambda_reg) return lambda_reg;
    if (!guard(lam)) return lambda_reg;  // sqrt of a nonpositive argument
    const double v = 0.5 * lam * (1.0 + std::sqrt(1.0 - a / (lam * lam))) - b;
    return std::max(v, lambda_reg);
  };
  return R;
}

Recursion make_qsc_min_recursion(const GlmLoss& loss,
                                 const LipschitzConstants& L, int n,
                                 double lambda_reg) {
  if (n < 1) throw std::invalid_argument("make_qsc_min_recursion: n >= 1");
  const double alpha = loss.alpha;
  const double r = L.radius2;
  const double L0 = L.L0;
  const double grad_term = L.L1 / n;
  const double disc_threshold = 8.0 * alpha * r * L0 / n;
  Recursion R;
  R.floor = 0.0;
  R.direction = Recursion::Direction::kDecreasing;
  R.domain_guard = [loss, L, n, lambda_reg, disc_threshold](double lam) {
    return check_condition_C1(lam, lambda_reg, loss, L, n) &&
           lam + lambda_reg >= disc_threshold;
  };
  R.map = [loss, alpha, r, L0, n, grad_term, lambda_reg,
           guard = R.domain_guard](double lam) {
    if (lam <= 0.0) return 0.0;
    if (!guard(lam)) return 0.0;
    const double t = t_param_change(lam + lambda_reg, alpha, r, L0, n);
    const double shrink = std::max(0.0, 1.0 - loss.kappa(r * t));
    return std::max(lam * shrink - grad_term, 0.0);
  };
  return R;
}

Recursion make_qsc_max_recursion(double lambda_hat, const GlmLoss& loss,
                                 const LipschitzConstants& L, int n) {
  if (!(lambda_hat > 0.0)) {
    throw std::invalid_argument("make_qsc_max_recursion: lambda_hat must be positive");
  }
  const double t = t_param_change(lambda_hat, loss.alpha, L.radius2, L.L0, n);
  const double growth = loss.kappa(t * L.radius2);
  const double grad_term = L.L1 / n;
  const double cap = L.L1;
  Recursion R;
  R.floor = cap;  // release threshold of the increasing recursion
  R.direction = Recursion::Direction::kIncreasing;
  R.cap = cap;
  R.domain_guard = [](double) { return true; };
  R.map = [growth, grad_term, cap](double lam) {
    return std::min(lam * (1.0 + growth) + grad_term, cap);
  };
  return R;
}

double iterate(const Recursion& R, double lambda, long k) {
  if (k < 0) throw std::invalid_argument("iterate: k must be nonnegative");
  double v = lambda;
  for (long i = 0; i < k; ++i) {
    const double next = R.map(v);
    if (next == v) return v;  // fixed point (floor and cap are absorbing)
    v = next;
  }
  return v;
}

long hitting_time(const Recursion& R, double lambda, long cap_iters) {
  if (cap_iters <= 0) throw std::invalid_argument("hitting_time: cap_iters > 0");
  const bool decreasing = R.direction == Recursion::Direction::kDecreasing;
  const double threshold = decreasing ? R.floor : R.cap.value_or(R.floor);
  // Crossing tolerance absorbs accumulated rounding on unclamped affine maps;
  // the mechanism recursions clamp exactly, so it is inert for them.
  const double tol = 1e-9 * std::max(1.0, std::abs(threshold));
  double v = lambda;
  for (long k = 0; k < cap_iters; ++k) {
    if (decreasing ? v <= threshold + tol : v >= threshold - tol) return k;
    v = R.map(v);
  }
  return cap_iters;
}

InversionResult invert_composition(const Recursion& R, long m, double hi,
                                   double tol) {
  if (m < 0) throw std::invalid_argument("invert_composition: m >= 0");
  if (!(tol > 0.0)) throw std::invalid_argument("invert_composition: tol > 0");
  if (R.direction == Recursion::Direction::kDecreasing) {
    if (m == 0) return {R.floor, false};
    if (iterate(R, hi, m) <= R.floor) return {hi, true};
    // Invariant: R^m(lo) <= floor < R^m(hi_b).
    double lo = R.floor;
    double hi_b = hi;
    while (hi_b - lo > tol) {
      const double mid = 0.5 * (lo + hi_b);
      if (iterate(R, mid, m) <= R.floor) {
        lo = mid;
      } else {
        hi_b = mid;
      }
    }
    return {lo, false};
  }
  // Increasing direction: find the smallest lambda that reaches the cap.
  const double cap = R.cap.value_or(R.floor);
  if (m == 0) return {cap, false};
  double lo = std::min(0.0, cap);
  if (iterate(R, lo, m) >= cap) return {lo, true};
  double hi_b = cap;  // the cap is absorbing, hence always feasible
  while (hi_b - lo > tol) {
    const double mid = 0.5 * (lo + hi_b);
    if (iterate(R, mid, m) >= cap) {
      hi_b = mid;
    } else {
      lo = mid;
    }
  }
  return {hi_b, false};
}

double t_param_change(double lambda, double alpha, double r, double L0,
                      int n) {
  if (!(lambda > 0.0)) {
    throw std::domain_error("t_param_change: lambda must be positive");
  }
  const double ar = alpha * r;
  if (ar == 0.0 || L0 == 0.0) return 2.0 * L0 / (lambda * n);
  const double u = 8.0 * ar * L0 / (lambda * n);
  if (u > 1.0) {
    throw std::domain_error("t_param_change: negative discriminant (lambda too small)");
  }
  return (1.0 - std::sqrt(1.0 - u)) / (2.0 * ar);
}

bool check_condition_C1(double lambda_min, double lambda_reg,
                        const GlmLoss& loss, const LipschitzConstants& L,
                        int n) {
  const double rho = loss.rho;
  const double lhs = lambda_min + lambda_reg / rho;
  const double rhs = 4.0 * L.L0 * loss.alpha * L.radius2 / (rho * (1.0 - rho) * n) +
                     L.L1 / (rho * n);
  return lhs >= rhs;
}

bool check_condition_C2(double lambda_min, double lambda_reg,
                        const LipschitzConstants& L, int n) {
  const double lhs = lambda_min + lambda_reg;
  const double rhs =
      std::max(3.0 * L.L1 / n, std::sqrt(12.0 * L.L0 * L.L2 / n));
  return lhs >= rhs;
}

}  // namespace dpmestim
