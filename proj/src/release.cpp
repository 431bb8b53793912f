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

#include "dpmestim/release.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "dpmestim/normal.hpp"

namespace dpmestim {

double PNorm::dual() const {
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

double PNorm::d_p(int d) const {
  if (std::isinf(p)) return static_cast<double>(d);
  return std::pow(static_cast<double>(d), 1.0 - 2.0 / p);
}

double PNorm::scale(int d) const {
  if (std::isinf(p)) return 1.0 / std::sqrt(static_cast<double>(d));
  return std::pow(static_cast<double>(d), 1.0 / p - 0.5);
}

namespace {

double dual_norm(const Eigen::VectorXd& v, PNorm pnorm) {
  const double q = pnorm.dual();
  if (q == 1.0) return v.lpNorm<1>();
  if (q == 2.0) return v.norm();
  double s = 0.0;
  for (int i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]), q);
  return std::pow(s, 1.0 / q);
}

Eigen::VectorXd solve_spd(const Eigen::MatrixXd& H, const Eigen::VectorXd& u) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw std::invalid_argument("directional_sensitivity: H must be positive definite");
  }
  return ldlt.solve(u);
}

}  // namespace

double directional_sensitivity(const Eigen::MatrixXd& H,
                               const Eigen::VectorXd& u, PNorm pnorm,
                               double L0, int n, int d) {
  if (std::abs(u.norm() - 1.0) > 1e-8) {
    throw std::invalid_argument("directional_sensitivity: u must be a unit vector");
  }
  const Eigen::VectorXd hu = solve_spd(H, u);
  return 2.0 * pnorm.scale(d) * L0 / n * dual_norm(hu, pnorm);
}

double vector_sensitivity(const Eigen::MatrixXd& H, PNorm pnorm, double L0,
                          int n, int d) {
  const double s = pnorm.scale(d) * L0;
  if (pnorm.is_l2()) {
    // sup over the l2 gradient ball: operator norm of H^{-1}.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    const double lmin = es.eigenvalues().minCoeff();
    if (lmin <= 0.0) {
      throw std::invalid_argument("vector_sensitivity: H must be positive definite");
    }
    return 2.0 * s / (n * lmin);
  }
  if (!std::isinf(pnorm.p)) {
    throw std::invalid_argument("vector_sensitivity: closed form only for p in {2, inf}");
  }
  if (d > 20) {
    throw std::invalid_argument("vector_sensitivity: vertex enumeration limited to d <= 20");
  }
  // ||H^{-1} g||_2 is convex in g, so the sup over the cube sits at a vertex.
  const Eigen::MatrixXd Hinv = H.ldlt().solve(Eigen::MatrixXd::Identity(d, d));
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (1ULL << d); ++mask) {
    Eigen::VectorXd g(d);
    for (int i = 0; i < d; ++i) g[i] = (mask >> i) & 1 ? s : -s;
    best = std::max(best, (Hinv * g).norm());
  }
  return 2.0 * best / n;
}

RatioConstants ratio_constants(double lambda0, double lambda1,
                               const GlmLoss& loss,
                               const LipschitzConstants& L, int n,
                               const Recursion& recursion) {
  if (!(lambda0 > 0.0)) {
    throw std::invalid_argument("ratio_constants: lambda0 must be positive");
  }
  if (!check_condition_C1(lambda0, 0.0, loss, L, n)) {
    throw std::invalid_argument("ratio_constants: Condition C1 fails at lambda0");
  }
  RatioConstants rc;
  rc.lambda0 = lambda0;
  rc.lambda1 = lambda1;
  rc.r = L.radius2;
  rc.kappa = lambda1 / lambda0;
  rc.t_change = t_param_change(lambda0, loss.alpha, rc.r, L.L0, n);
  const double art = loss.alpha * rc.r * rc.t_change;
  rc.gamma = art;
  const double hinge = std::max(0.0, 1.0 - art);
  rc.a_tilde = hinge > 0.0
                   ? loss.hpp_sup * rc.r * rc.r / (hinge * n * lambda0)
                   : std::numeric_limits<double>::infinity();
  rc.kappa1 = hinge > 0.0 ? 1.0 / hinge - 1.0
                          : std::numeric_limits<double>::infinity();
  rc.kappa2 = (hinge > 0.0 && rc.a_tilde < 1.0)
                  ? loss.hpp_sup / (n * (1.0 - rc.a_tilde) * hinge)
                  : std::numeric_limits<double>::infinity();
  rc.recurse_lambda0 = recursion.map(lambda0);
  rc.valid = rc.a_tilde < 1.0 && hinge > 0.0;
  if (rc.recurse_lambda0 > 0.0) {
    try {
      rc.gamma_prime = loss.alpha * rc.r *
                       t_param_change(rc.recurse_lambda0, loss.alpha, rc.r,
                                      L.L0, n);
    } catch (const std::domain_error&) {
      rc.gamma_prime = std::numeric_limits<double>::infinity();
    }
  } else {
    rc.gamma_prime = std::numeric_limits<double>::infinity();
  }
  rc.valid = rc.valid && rc.gamma_prime < 1.0 && rc.gamma < 1.0;
  return rc;
}

double sigma_bar(const FitResult& fitted, const Eigen::VectorXd& u,
                 PNorm pnorm, const GlmLoss& loss,
                 const LipschitzConstants& L, int n) {
  const double lam = fitted.lambda_min;  // lambda_min_unreg + lambda_reg
  if (!check_condition_C1(fitted.lambda_min_unreg, fitted.lambda_reg, loss, L,
                          n)) {
    throw std::invalid_argument("sigma_bar: Condition C1 fails at the fit");
  }
  const double delta_u = directional_sensitivity(
      fitted.hessian, u, pnorm, L.L0, n, static_cast<int>(u.size()));
  const double gamma =
      loss.alpha * t_param_change(lam, loss.alpha, L.radius2, L.L0, n) *
      L.radius2;
  if (gamma >= 1.0) {
    throw std::domain_error("sigma_bar: gamma >= 1 (Condition C1 should preclude this)");
  }
  return delta_u + 2.0 * L.L0 / (n * lam) * gamma / (1.0 - gamma);
}

bool check_ratio_condition(const PrivacyParams& p, const RatioConstants& rc,
                           PNorm pnorm, int d) {
  if (!rc.valid || rc.recurse_lambda0 <= 0.0) return false;
  const double budget =
      2.0 * p.epsilon /
      (1.0 + std::pow(std_normal_quantile(1.0 - p.delta / 2.0), 2));
  // gamma/(1 - gamma) in both branches, the conservative form.
  const double g = rc.gamma / (1.0 - rc.gamma);
  const double gp = rc.gamma_prime / (1.0 - rc.gamma_prime);
  double up, down;
  if (pnorm.is_l2()) {
    const double self_sim = rc.kappa * (rc.kappa1 + rc.kappa2 * rc.r);
    down = 1.0 - self_sim;
    if (down <= 0.0) return false;
    up = std::max((1.0 + rc.kappa * g) / down,
                  1.0 + self_sim + rc.lambda1 / rc.recurse_lambda0 * gp);
  } else {
    const double sdp = std::sqrt(pnorm.d_p(d));
    const double dp = pnorm.d_p(d);
    down = 1.0 - sdp * rc.kappa * rc.kappa1 - 2.0 * dp * rc.kappa2 / rc.lambda0;
    if (down <= 0.0) return false;
    up = std::max(
        (1.0 + sdp * rc.kappa * g) / down,
        1.0 + sdp * rc.kappa * rc.kappa1 + 2.0 * dp * rc.kappa2 / rc.lambda0 +
            sdp * rc.lambda1 / rc.recurse_lambda0 * gp);
  }
  return up * up - 1.0 <= budget;
}

ReleaseOutcome release_theta_generic(const Dataset& data, const GlmLoss& loss,
                                     double lambda_reg,
                                     const Eigen::VectorXd& theta0,
                                     const PrivacyParams& p, RngStream& rng) {
  p.validate();
  const FitResult fitted =
      fit(data, loss, {.lambda_reg = lambda_reg, .theta0 = theta0});
  const LipschitzConstants L = lipschitz_constants(loss, data.domain, data.d());
  const int n = data.n();
  const PrivacyParams half{p.epsilon / 2.0, p.delta / 2.0};

  ReleaseOutcome out;
  const EigenRelease er =
      release_lambda_min_generic_at(fitted, loss, L, n, half, rng);
  out.diagnostics.lambda_min_hat = er.lambda_hat;
  out.ledger = compose(out.ledger, {"lambda-min-generic", half.epsilon, 0.0,
                                    half.delta, BudgetEntry::Rule::kConditional});
  out.ledger = compose(out.ledger, {"gaussian-release", half.epsilon,
                                    half.delta, 0.0,
                                    BudgetEntry::Rule::kConditional});
  // er.lambda_hat certifies lambda_min + lambda_reg; gate on Condition C2.
  out.diagnostics.c2_ok = check_condition_C2(er.lambda_hat, 0.0, L, n);
  if (!out.diagnostics.c2_ok) {
    out.diagnostics.note = "lambda_hat fails Condition C2";
    return out;
  }
  double width;
  if (L.L2 == 0.0) {
    width = 2.0 * L.L0 / (n * er.lambda_hat);
  } else {
    const double disc =
        er.lambda_hat * er.lambda_hat - 8.0 * L.L0 * L.L2 / n;
    width = (er.lambda_hat - std::sqrt(std::max(disc, 0.0))) / (2.0 * L.L2);
  }
  out.noise_std = width * gaussian_sigma(half);
  auto noise_rng = rng.derive("release-noise");
  out.vector =
      fitted.theta + noise_rng.sample_gaussian_vector(out.noise_std, data.d());
  return out;
}

ReleaseOutcome release_theta_qsc(const Dataset& data, const GlmLoss& loss,
                                 double lambda_reg,
                                 const Eigen::VectorXd& theta0,
                                 const PrivacyParams& p, RngStream& rng) {
  p.validate();
  const FitResult fitted =
      fit(data, loss, {.lambda_reg = lambda_reg, .theta0 = theta0});
  const LipschitzConstants L = lipschitz_constants(loss, data.domain, data.d());
  const int n = data.n();

  ReleaseOutcome out;
  const EigenRelease er = release_lambda_min_qsc_at(fitted, loss, L, n, p, rng);
  out.diagnostics.lambda_min_hat = er.lambda_hat;
  out.ledger = compose(out.ledger, {"lambda-min-qsc", p.epsilon, 0.0, p.delta,
                                    BudgetEntry::Rule::kConditional});
  out.ledger = compose(out.ledger, {"gaussian-release", p.epsilon, p.delta,
                                    0.0, BudgetEntry::Rule::kConditional});
  const double lam = er.lambda_hat + lambda_reg;
  if (lam <= 0.0) {
    out.diagnostics.note = "lambda_hat + lambda_reg = 0";
    return out;
  }
  double t;
  try {
    t = t_param_change(lam, loss.alpha, L.radius2, L.L0, n);
  } catch (const std::domain_error&) {
    out.diagnostics.note = "parameter-change bound undefined at lambda_hat";
    return out;
  }
  out.noise_std = t * gaussian_sigma(p);
  auto noise_rng = rng.derive("release-noise");
  out.vector =
      fitted.theta + noise_rng.sample_gaussian_vector(out.noise_std, data.d());
  return out;
}

ReleaseOutcome release_functional_at(const FitResult& fitted,
                                     const GlmLoss& loss,
                                     const LipschitzConstants& L, int n,
                                     const Eigen::VectorXd& u,
                                     const PrivacyParams& p, PNorm pnorm,
                                     RngStream& rng) {
  p.validate();
  if (std::abs(u.norm() - 1.0) > 1e-8) {
    throw std::invalid_argument("release_functional: u must be a unit vector");
  }
  const double lambda_reg = fitted.lambda_reg;
  const int d = static_cast<int>(u.size());

  ReleaseOutcome out;
  const EigenRelease er_min =
      release_lambda_min_qsc_at(fitted, loss, L, n, p, rng);
  const EigenRelease er_max = release_lambda_max_at(
      fitted, loss, L, n, er_min.lambda_hat, p, rng);
  out.diagnostics.lambda_min_hat = er_min.lambda_hat;
  out.diagnostics.lambda_max_hat = er_max.lambda_hat;
  // The eigenvalue pair composes to (2 eps, delta): each Laplace release is
  // pure eps-DP, and the max release conditions on the min certificate, whose
  // failure mass delta enters as gamma.
  out.ledger = compose(out.ledger, {"lambda-min-qsc", p.epsilon, 0.0, 0.0,
                                    BudgetEntry::Rule::kConditional});
  out.ledger = compose(out.ledger, {"lambda-max-qsc", p.epsilon, 0.0, p.delta,
                                    BudgetEntry::Rule::kConditional});
  // Gaussian on top through test/release: mean shift (eps, delta) composed
  // with the variance-ratio closeness (eps, e^eps delta).
  out.ledger = compose(out.ledger,
                       {"functional-gaussian", p.epsilon,
                        (1.0 + std::exp(p.epsilon)) * p.delta, 0.0,
                        BudgetEntry::Rule::kTestRelease});

  out.diagnostics.c1_ok =
      check_condition_C1(er_min.lambda_hat, lambda_reg, loss, L, n);
  if (!out.diagnostics.c1_ok) {
    out.diagnostics.note = "lambda_hat_min fails Condition C1";
    return out;
  }
  const double lambda0 = er_min.lambda_hat + lambda_reg;
  const double lambda1 = er_max.lambda_hat + lambda_reg;
  // R evaluated on the regularized eigenvalue, hence lambda_reg = 0 here.
  const Recursion recursion = make_qsc_min_recursion(loss, L, n, 0.0);
  RatioConstants rc;
  try {
    rc = ratio_constants(lambda0, lambda1, loss, L, n, recursion);
  } catch (const std::invalid_argument&) {
    out.diagnostics.note = "ratio constants unavailable at lambda_hat";
    return out;
  }
  out.diagnostics.ratio_ok = check_ratio_condition(p, rc, pnorm, d);
  if (!out.diagnostics.ratio_ok) {
    out.diagnostics.note = "ratio condition fails at the certified bounds";
    return out;
  }
  double sbar;
  try {
    sbar = sigma_bar(fitted, u, pnorm, loss, L, n);
  } catch (const std::exception&) {
    out.diagnostics.note = "sigma_bar undefined at the fit";
    return out;
  }
  out.sigma_bar = sbar;
  out.noise_std = sbar * gaussian_sigma(p);
  auto noise_rng = rng.derive("release-noise");
  out.scalar = u.dot(fitted.theta) + noise_rng.sample_gaussian(out.noise_std);
  return out;
}

ReleaseOutcome release_functional(const Dataset& data, const GlmLoss& loss,
                                  const Eigen::VectorXd& u, double lambda_reg,
                                  const Eigen::VectorXd& theta0,
                                  const PrivacyParams& p, PNorm pnorm,
                                  RngStream& rng) {
  const FitResult fitted =
      fit(data, loss, {.lambda_reg = lambda_reg, .theta0 = theta0});
  const LipschitzConstants L = lipschitz_constants(loss, data.domain, data.d());
  return release_functional_at(fitted, loss, L, data.n(), u, p, pnorm, rng);
}

}  // namespace dpmestim
