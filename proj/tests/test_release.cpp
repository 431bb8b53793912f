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

#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "dpmestim/harness.hpp"
#include "dpmestim/normal.hpp"
#include "dpmestim/release.hpp"
#include "test_support.hpp"

using namespace dpmestim;

namespace {
const GlmLoss kLoss = GlmLoss::robust_log();
}

TEST_CASE("directional sensitivity closed forms") {
  const double L0 = 1.7;
  const int n = 50;
  SUBCASE("identity hessian, p = 2") {
    const int d = 4;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(d);
    u[2] = 1.0;
    CHECK(directional_sensitivity(Eigen::MatrixXd::Identity(d, d), u,
                                  PNorm::l2(), L0, n, d) ==
          doctest::Approx(2.0 * L0 / n).epsilon(1e-12));
  }
  SUBCASE("identity hessian, p = inf") {
    const int d = 9;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(d);
    u[0] = 1.0;
    CHECK(directional_sensitivity(Eigen::MatrixXd::Identity(d, d), u,
                                  PNorm::linf(), L0, n, d) ==
          doctest::Approx(2.0 * L0 / (std::sqrt(9.0) * n)).epsilon(1e-12));
  }
  SUBCASE("diagonal hessian matches vertex enumeration") {
    const int d = 2;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d, d);
    H(0, 0) = 1.0;
    H(1, 1) = 4.0;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(d);
    u[1] = 1.0;
    const double closed =
        directional_sensitivity(H, u, PNorm::linf(), L0, n, d);
    // Brute-force max of u^T H^{-1}(g0 - g1) over the scaled cube's vertices.
    const double s = L0 / std::sqrt(2.0);
    double best = 0.0;
    const Eigen::MatrixXd Hinv = H.inverse();
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        Eigen::VectorXd g0(d), g1(d);
        g0 << (a & 1 ? s : -s), (a & 2 ? s : -s);
        g1 << (b & 1 ? s : -s), (b & 2 ? s : -s);
        best = std::max(best, u.dot(Hinv * (g0 - g1)) / n);
      }
    }
    CHECK(closed == doctest::Approx(best).epsilon(1e-10));
  }
  SUBCASE("rejects non-unit directions and singular hessians") {
    Eigen::VectorXd u(2);
    u << 1.0, 1.0;
    CHECK_THROWS(directional_sensitivity(Eigen::MatrixXd::Identity(2, 2), u,
                                         PNorm::l2(), L0, n, 2));
  }
}

TEST_CASE("vector sensitivity closed forms") {
  const double L0 = 2.0;
  const int n = 100, d = 3;
  CHECK(vector_sensitivity(Eigen::MatrixXd::Identity(d, d), PNorm::l2(), L0, n,
                           d) == doctest::Approx(2.0 * L0 / n).epsilon(1e-12));
  // p = inf vertex form against the direct formula for a diagonal matrix:
  // max ||H^{-1} g|| over the cube is attained at the all-ones vertex.
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(d, d);
  H(0, 0) = 0.5;
  const double s = L0 / std::sqrt(static_cast<double>(d));
  const double expect =
      2.0 / n * std::sqrt(3 * s * s + (s / 0.5) * (s / 0.5) - s * s);
  CHECK(vector_sensitivity(H, PNorm::linf(), L0, n, d) ==
        doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("ratio constants") {
  const LipschitzConstants L =
      lipschitz_constants(kLoss, CovariateDomain::hypercube(1.0), 3);
  SUBCASE("large n limits") {
    const int n = 100000000;
    const Recursion R = make_qsc_min_recursion(kLoss, L, n, 0.0);
    const RatioConstants rc = ratio_constants(0.2, 0.4, kLoss, L, n, R);
    CHECK(rc.valid);
    CHECK(rc.kappa == doctest::Approx(2.0));
    CHECK(rc.kappa1 < 1e-5);
    CHECK(rc.kappa2 < 1e-6);
    CHECK(rc.gamma < 1e-5);
    CHECK(rc.gamma_prime < 1e-5);
  }
  SUBCASE("degenerate L0 = 0 removes every t-driven inflation") {
    LipschitzConstants L0free = L;
    L0free.L0 = 0.0;
    const int n = 1000;
    const Recursion R = make_qsc_min_recursion(kLoss, L0free, n, 0.0);
    const RatioConstants rc = ratio_constants(0.3, 0.5, kLoss, L0free, n, R);
    CHECK(rc.t_change == 0.0);
    CHECK(rc.gamma == 0.0);
    CHECK(rc.kappa1 == 0.0);
    CHECK(rc.kappa2 ==
          doctest::Approx(kLoss.hpp_sup / (n * (1.0 - rc.a_tilde)))
              .epsilon(1e-12));
  }
  SUBCASE("precondition C1") {
    const int n = 100;
    const Recursion R = make_qsc_min_recursion(kLoss, L, n, 0.0);
    CHECK_THROWS_AS(ratio_constants(1e-4, 1.0, kLoss, L, n, R),
                    std::invalid_argument);
  }
}

TEST_CASE("sigma_bar") {
  const int n = 2000, d = 3;
  const SyntheticData gen = gen_robust_data(n, d, 1.0, 0.5, 61);
  const FitResult f = fit(gen.data, kLoss, {.lambda_reg = 0.05});
  const LipschitzConstants L = lipschitz_constants(kLoss, gen.data.domain, d);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(d);
  u[0] = 1.0;
  SUBCASE("reduces to the directional sensitivity as gamma -> 0") {
    const double sbar = sigma_bar(f, u, PNorm::l2(), kLoss, L, n);
    const double delta_u =
        directional_sensitivity(f.hessian, u, PNorm::l2(), L.L0, n, d);
    CHECK(sbar >= delta_u);
    CHECK(sbar <= delta_u * 1.25);  // small-gamma regime at this n
  }
  SUBCASE("L0 = 0 collapses to zero") {
    LipschitzConstants L0free = L;
    L0free.L0 = 0.0;
    CHECK(sigma_bar(f, u, PNorm::l2(), kLoss, L0free, n) == 0.0);
  }
  SUBCASE("dominates sampled neighbor changes") {
    const double sbar = sigma_bar(f, u, PNorm::l2(), kLoss, L, n);
    RngStream cand(99);
    for (int rep = 0; rep < 500; ++rep) {
      const int i = static_cast<int>(cand.uniform() * n) % n;
      auto [x, y] = testing::random_robust_row(d, cand);
      const FitResult fp =
          fit(gen.data.with_row_replaced(i, x, y), kLoss, {.lambda_reg = 0.05});
      CHECK(std::abs(u.dot(f.theta - fp.theta)) <= sbar);
    }
  }
}

TEST_CASE("ratio condition") {
  const LipschitzConstants L =
      lipschitz_constants(kLoss, CovariateDomain::hypercube(1.0), 5);
  const int n = 100000;
  const Recursion R = make_qsc_min_recursion(kLoss, L, n, 0.0);
  const RatioConstants rc = ratio_constants(0.15, 0.2, kLoss, L, n, R);
  SUBCASE("passes easily at large n, fails at eps = 0") {
    CHECK(check_ratio_condition({1.0, 1e-6}, rc, PNorm::linf(), 5));
    CHECK_FALSE(check_ratio_condition({1e-12, 1e-6}, rc, PNorm::linf(), 5));
  }
  SUBCASE("closed inequality at the exact boundary") {
    // Solve for the eps making the budget match the left side exactly.
    const double delta = 1e-6;
    const double q = std_normal_quantile(1.0 - delta / 2.0);
    const double g = rc.gamma / (1.0 - rc.gamma);
    const double gp = rc.gamma_prime / (1.0 - rc.gamma_prime);
    const double sdp = std::sqrt(5.0), dp = 5.0;
    const double down =
        1.0 - sdp * rc.kappa * rc.kappa1 - 2.0 * dp * rc.kappa2 / rc.lambda0;
    const double up = std::max(
        (1.0 + sdp * rc.kappa * g) / down,
        1.0 + sdp * rc.kappa * rc.kappa1 + 2.0 * dp * rc.kappa2 / rc.lambda0 +
            sdp * rc.lambda1 / rc.recurse_lambda0 * gp);
    const double eps_boundary = (up * up - 1.0) * (1.0 + q * q) / 2.0;
    CHECK(check_ratio_condition({eps_boundary, delta}, rc, PNorm::linf(), 5));
    CHECK_FALSE(check_ratio_condition({eps_boundary * (1.0 - 1e-9), delta}, rc,
                                      PNorm::linf(), 5));
  }
  SUBCASE("invalid constants never pass") {
    RatioConstants bad = rc;
    bad.valid = false;
    CHECK_FALSE(check_ratio_condition({8.0, 1e-6}, bad, PNorm::linf(), 5));
  }
}

TEST_CASE("release_theta_generic") {
  SUBCASE("gate: certified lambda below Condition C2 refuses") {
    const SyntheticData gen = gen_robust_data(60, 3, 1.0, 0.5, 71);
    RngStream rng(2);
    const ReleaseOutcome out = release_theta_generic(
        gen.data, kLoss, 0.0, Eigen::VectorXd::Zero(3), {1.0, 1e-6}, rng);
    CHECK(out.is_bot());
    CHECK(out.ledger.epsilon_total == doctest::Approx(1.0));
    CHECK(out.ledger.delta_total == doctest::Approx(1e-6));
  }
  SUBCASE("derandomized release returns theta exactly; W within bounds") {
    const int n = 10000, d = 5;
    const double reg = 0.7;
    const SyntheticData gen = gen_robust_data(n, d, 1.0, 0.5, 73);
    const FitResult f = fit(gen.data, kLoss, {.lambda_reg = reg});
    const LipschitzConstants L = lipschitz_constants(kLoss, gen.data.domain, d);
    auto zeros = RngStream::zeros();
    const ReleaseOutcome out = release_theta_generic(
        gen.data, kLoss, reg, Eigen::VectorXd::Zero(d), {1.0, 1.0 - 1e-9},
        zeros);
    REQUIRE_FALSE(out.is_bot());
    CHECK((*out.vector - f.theta).norm() == 0.0);
    // With delta ~ 1 the backoff k is ~0, so lambda_hat ~ lambda_min + reg.
    const double lam_hat = out.diagnostics.lambda_min_hat;
    const double W = out.noise_std / gaussian_sigma({0.5, 0.5 * (1.0 - 1e-9)});
    CHECK(W <= lam_hat / (2.0 * L.L2) * (1.0 + 1e-9));
    if (lam_hat * lam_hat >= 10.0 * 8.0 * L.L0 * L.L2 / n) {
      CHECK(W == doctest::Approx(2.0 * L.L0 / (n * lam_hat)).epsilon(0.3));
    }
  }
}

TEST_CASE("release_theta_qsc") {
  SUBCASE("zero certificate with zero ridge refuses") {
    const SyntheticData gen = gen_robust_data(50, 5, 1.0, 0.5, 83);
    RngStream rng(3);
    const ReleaseOutcome out = release_theta_qsc(
        gen.data, kLoss, 0.0, Eigen::VectorXd::Zero(5), {1.0, 1e-6}, rng);
    CHECK(out.is_bot());
  }
  SUBCASE("derandomized release returns theta exactly") {
    const SyntheticData gen = gen_robust_data(3000, 3, 1.0, 0.5, 89);
    const FitResult f = fit(gen.data, kLoss, {.lambda_reg = 0.0});
    auto zeros = RngStream::zeros();
    const ReleaseOutcome out = release_theta_qsc(
        gen.data, kLoss, 0.0, Eigen::VectorXd::Zero(3), {1.0, 0.5}, zeros);
    REQUIRE_FALSE(out.is_bot());
    CHECK((*out.vector - f.theta).norm() == 0.0);
  }
  SUBCASE("ledger totals (2 eps, 2 delta)") {
    const SyntheticData gen = gen_robust_data(500, 3, 1.0, 0.5, 97);
    RngStream rng(4);
    const double eps = 0.9, delta = 1e-5;
    const ReleaseOutcome out = release_theta_qsc(
        gen.data, kLoss, 0.1, Eigen::VectorXd::Zero(3), {eps, delta}, rng);
    CHECK(out.ledger.epsilon_total == doctest::Approx(2.0 * eps).epsilon(1e-12));
    CHECK(out.ledger.delta_total == doctest::Approx(2.0 * delta).epsilon(1e-12));
  }
  SUBCASE("error norm concentrates near t sigma sqrt(d)") {
    const int n = 20000, d = 5;
    const SyntheticData gen = gen_robust_data(n, d, 1.0, 1.0, 101);
    const FitResult f = fit(gen.data, kLoss, {.lambda_reg = 0.0});
    const PrivacyParams p{1.0, 1e-6};
    std::vector<double> errs;
    double noise_scale = 0.0;
    for (int i = 0; i < 200; ++i) {
      RngStream rng(30000 + i);
      const LipschitzConstants L =
          lipschitz_constants(kLoss, gen.data.domain, d);
      ReleaseOutcome out;
      // reuse the fit: the qsc release refits internally, so go through the
      // mechanism only once in a while to keep this quick
      const EigenRelease er = release_lambda_min_qsc_at(f, kLoss, L, n, p, rng);
      REQUIRE(er.lambda_hat > 0.0);
      const double t =
          t_param_change(er.lambda_hat, kLoss.alpha, L.radius2, L.L0, n);
      noise_scale = t * gaussian_sigma(p);
      auto noise_rng = rng.derive("release-noise");
      errs.push_back(noise_rng.sample_gaussian_vector(noise_scale, d).norm());
    }
    const double med = testing::median(errs);
    const double predicted = noise_scale * std::sqrt(static_cast<double>(d));
    CHECK(med >= predicted / 2.0);
    CHECK(med <= predicted * 2.0);
  }
}

TEST_CASE("release_functional") {
  const int d = 5;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(d);
  u[0] = 1.0;
  SUBCASE("tiny n refuses") {
    const SyntheticData gen = gen_robust_data(400, d, 1.0, 0.5, 103);
    RngStream rng(5);
    const ReleaseOutcome out =
        release_functional(gen.data, kLoss, u, 0.0, Eigen::VectorXd::Zero(d),
                           {1.0, 1e-6}, PNorm::linf(), rng);
    CHECK(out.is_bot());
    CHECK(out.ledger.epsilon_total == doctest::Approx(3.0));
  }
  SUBCASE("derandomized release returns the exact functional") {
    const int n = 20000;
    const SyntheticData gen = gen_robust_data(n, d, 1.0, 1.0, 107);
    const FitResult f = fit(gen.data, kLoss, {.lambda_reg = 0.0});
    auto zeros = RngStream::zeros();
    const LipschitzConstants L = lipschitz_constants(kLoss, gen.data.domain, d);
    const ReleaseOutcome out = release_functional_at(
        f, kLoss, L, n, u, {4.0, 1e-6}, PNorm::linf(), zeros);
    REQUIRE_FALSE(out.is_bot());
    CHECK(*out.scalar == u.dot(f.theta));
    CHECK(out.sigma_bar > 0.0);
  }
  SUBCASE("ledger totals (3 eps, (1 + e^eps + e^{2 eps}) delta)") {
    const SyntheticData gen = gen_robust_data(500, d, 1.0, 0.5, 109);
    RngStream rng(6);
    const double eps = 1.3, delta = 1e-5;
    const ReleaseOutcome out =
        release_functional(gen.data, kLoss, u, 0.0, Eigen::VectorXd::Zero(d),
                           {eps, delta}, PNorm::linf(), rng);
    CHECK(out.ledger.epsilon_total == doctest::Approx(3.0 * eps).epsilon(1e-12));
    CHECK(out.ledger.delta_total ==
          doctest::Approx((1.0 + std::exp(eps) + std::exp(2.0 * eps)) * delta)
              .epsilon(1e-12));
  }
  SUBCASE("same seed, same outcome") {
    const int n = 20000;
    const SyntheticData gen = gen_robust_data(n, d, 1.0, 1.0, 113);
    const FitResult f = fit(gen.data, kLoss, {.lambda_reg = 0.0});
    const LipschitzConstants L = lipschitz_constants(kLoss, gen.data.domain, d);
    RngStream a(77), b(77);
    const ReleaseOutcome oa =
        release_functional_at(f, kLoss, L, n, u, {4.0, 1e-6}, PNorm::linf(), a);
    const ReleaseOutcome ob =
        release_functional_at(f, kLoss, L, n, u, {4.0, 1e-6}, PNorm::linf(), b);
    REQUIRE_FALSE(oa.is_bot());
    CHECK(*oa.scalar == *ob.scalar);
  }
}

TEST_CASE("neighbor stability sweep (reduced)") {
  // Smaller cousin of the acceptance sweep: every certified bound holds on
  // sampled single-row swaps when C1/C2 hold.
  const int n = 200, d = 3;
  const double reg = 0.25;
  const SyntheticData gen = gen_robust_data(n, d, 1.0, 0.5, 127);
  const FitResult f = fit(gen.data, kLoss, {.lambda_reg = reg});
  const LipschitzConstants L = lipschitz_constants(kLoss, gen.data.domain, d);
  REQUIRE(check_condition_C1(f.lambda_min_unreg, reg, kLoss, L, n));
  REQUIRE(check_condition_C2(f.lambda_min_unreg, reg, L, n));
  const double lam = f.lambda_min;
  const double t_bound = t_param_change(lam, kLoss.alpha, L.radius2, L.L0, n);
  const double qsc_growth = kLoss.kappa(t_bound * L.radius2);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(d);
  u[0] = 1.0;
  const double sbar = sigma_bar(f, u, PNorm::l2(), kLoss, L, n);
  const Eigen::MatrixXd H0inv =
      f.hessian.ldlt().solve(Eigen::MatrixXd::Identity(d, d));
  const double art = kLoss.alpha * L.radius2 * t_bound;
  const double atilde =
      kLoss.hpp_sup / (1.0 - art) * L.radius2 * L.radius2 / (lam * n);
  REQUIRE(atilde < 1.0);
  // Noise-scale ratio interval from the true eigenvalue pair (p = 2 form).
  const RatioConstants rc =
      ratio_constants(f.lambda_min, f.lambda_max_unreg + reg, kLoss, L, n,
                      make_qsc_min_recursion(kLoss, L, n, 0.0));
  REQUIRE(rc.valid);
  const double ratio_hi = (1.0 + rc.kappa * rc.gamma / (1.0 - rc.gamma)) /
                          (1.0 - rc.kappa * (rc.kappa1 + rc.kappa2 * rc.r));
  const double ratio_lo =
      1.0 / (1.0 + rc.kappa * (rc.kappa1 + rc.kappa2 * rc.r) +
             rc.kappa * rc.lambda0 / rc.recurse_lambda0 * rc.gamma_prime /
                 (1.0 - rc.gamma_prime));

  RngStream cand(131);
  for (int rep = 0; rep < 50; ++rep) {
    const int i = static_cast<int>(cand.uniform() * n) % n;
    auto [x, y] = testing::random_robust_row(d, cand);
    const Dataset nb = gen.data.with_row_replaced(i, x, y);
    const FitResult fp = fit(nb, kLoss, {.lambda_reg = reg});
    const double move = (f.theta - fp.theta).norm();
    CHECK(move <= t_bound);
    CHECK(move <= 12.0 * L.L0 / (n * lam));
    CHECK(std::abs(u.dot(f.theta - fp.theta)) <= sbar);
    const double ratio = sbar / sigma_bar(fp, u, PNorm::l2(), kLoss, L, n);
    CHECK(ratio >= ratio_lo - 1e-12);
    CHECK(ratio <= ratio_hi + 1e-12);
    for (double pair : {f.lambda_min_unreg, f.lambda_max_unreg}) {
      const double other =
          pair == f.lambda_min_unreg ? fp.lambda_min_unreg : fp.lambda_max_unreg;
      CHECK(std::abs(other - pair) <= pair * qsc_growth + L.L1 / n + 1e-12);
    }
    // Hessian self-similarity sandwich with the swapped rows as witnesses.
    const Eigen::MatrixXd H1inv =
        fp.hessian.ldlt().solve(Eigen::MatrixXd::Identity(d, d));
    const Eigen::VectorXd x_old = gen.data.covariates.row(i).transpose();
    const double c_up =
        kLoss.hpp_sup / (n * (1.0 - art) * (1.0 - art) * (1.0 - atilde));
    const double c_dn =
        kLoss.hpp_sup / (n * (1.0 + art) * (1.0 + art) * (1.0 - atilde));
    const Eigen::MatrixXd upper = H0inv / (1.0 - art) +
                                  c_up * (H0inv * x_old) *
                                      (H0inv * x_old).transpose() -
                                  H1inv;
    const Eigen::MatrixXd lower =
        H1inv - (H0inv / (1.0 + art) -
                 c_dn * (H0inv * x) * (H0inv * x).transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eu(upper), el(lower);
    CHECK(eu.eigenvalues().minCoeff() >= -1e-9);
    CHECK(el.eigenvalues().minCoeff() >= -1e-9);
  }
}
