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

#ifndef DPMESTIM_RELEASE_HPP_
#define DPMESTIM_RELEASE_HPP_

#include <limits>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "dpmestim/eigen_release.hpp"
#include "dpmestim/fit.hpp"
#include "dpmestim/privacy.hpp"
#include "dpmestim/recursions.hpp"

namespace dpmestim {

// Norm index of the gradient set G_p = { ||g||_p <= d^{1/p - 1/2} L0 },
// p in [2, inf].
struct PNorm {
  double p = 2.0;
  static PNorm l2() { return {2.0}; }
  static PNorm linf() { return {std::numeric_limits<double>::infinity()}; }
  bool is_l2() const { return p == 2.0; }
  double dual() const;          // q = p/(p-1)
  double d_p(int d) const;      // d^{1 - 2/p}
  double scale(int d) const;    // d^{1/p - 1/2}
};

// Constants controlling the stability of the noise-scale ratio across
// neighboring samples, all derived from certified eigenvalue bounds
// (lambda0, lambda1) ~ (lambda_min, lambda_max) + lambda_reg.
struct RatioConstants {
  double t_change = 0.0;        // t(lambda0)
  double r = 0.0;               // l2 radius of the covariate domain
  double a_tilde = 0.0;         // ||h''|| r^2 / ([1 - a r t]_+ n lambda0)
  double gamma = 0.0;           // a r t(lambda0)
  double gamma_prime = 0.0;     // a r t(R(lambda0))
  double kappa1 = 0.0;          // 1/[1 - a r t]_+ - 1
  double kappa2 = 0.0;          // ||h''|| / (n (1 - a_tilde) [1 - a r t]_+)
  double kappa = 0.0;           // lambda1 / lambda0
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  double recurse_lambda0 = 0.0;  // R(lambda0)
  bool valid = false;            // false when a_tilde >= 1 or gamma' >= 1
};

struct ReleaseDiagnostics {
  double lambda_min_hat = 0.0;
  std::optional<double> lambda_max_hat;
  bool c1_ok = false;
  bool c2_ok = false;
  bool ratio_ok = false;
  std::string note;
};

// Mechanism output: a released scalar or vector, or the refusal symbol
// (neither member set) when a gate failed.
struct ReleaseOutcome {
  std::optional<double> scalar;
  std::optional<Eigen::VectorXd> vector;
  double noise_std = 0.0;
  double sigma_bar = 0.0;  // functional case only
  BudgetLedger ledger;
  ReleaseDiagnostics diagnostics;
  bool is_bot() const { return !scalar && !vector; }
};

// Directional sensitivity Delta(P_n, u) =
//   (2 d^{1/p - 1/2} L0 / n) ||H^{-1} u||_q with q conjugate to p.
double directional_sensitivity(const Eigen::MatrixXd& H,
                               const Eigen::VectorXd& u, PNorm pnorm,
                               double L0, int n, int d);

// Full-vector local sensitivity sup ||H^{-1}(g0 - g1)|| over the gradient
// set; closed form for p = 2, vertex enumeration for p = inf (d <= 20).
double vector_sensitivity(const Eigen::MatrixXd& H, PNorm pnorm, double L0,
                          int n, int d);

// Populates the ratio constants at certified bounds (lambda0, lambda1); the
// recursion supplies R(lambda0). Throws unless lambda0 > 0 and lambda0 passes
// Condition C1 as a regularized eigenvalue (lambda_reg = 0 convention).
RatioConstants ratio_constants(double lambda0, double lambda1,
                               const GlmLoss& loss,
                               const LipschitzConstants& L, int n,
                               const Recursion& recursion);

// Certified modulus bound sigma_bar = Delta(P_n, u) +
//   (2 L0/(n Lambda)) gamma/(1 - gamma), Lambda = lambda_min + lambda_reg.
double sigma_bar(const FitResult& fitted, const Eigen::VectorXd& u,
                 PNorm pnorm, const GlmLoss& loss,
                 const LipschitzConstants& L, int n);

// Ratio test max{...}^2 - 1 <= 2 eps / (1 + Phi^{-1}(1 - delta/2)^2), in its
// l2 or lp form.
bool check_ratio_condition(const PrivacyParams& p, const RatioConstants& rc,
                           PNorm pnorm, int d);

// Full-parameter release for generic smooth losses: certify lambda via the
// generic recursion at (eps/2, delta/2), gate on Condition C2, then add
// Gaussian noise with the certified local sensitivity W. Ledger (eps, delta).
ReleaseOutcome release_theta_generic(const Dataset& data, const GlmLoss& loss,
                                     double lambda_reg,
                                     const Eigen::VectorXd& theta0,
                                     const PrivacyParams& p, RngStream& rng);

// Full-parameter release for q.s.c. GLMs: certify lambda via the q.s.c.
// recursion at (eps, delta), then perturb with scale t(lambda_hat +
// lambda_reg). Ledger (2 eps, 2 delta).
ReleaseOutcome release_theta_qsc(const Dataset& data, const GlmLoss& loss,
                                 double lambda_reg,
                                 const Eigen::VectorXd& theta0,
                                 const PrivacyParams& p, RngStream& rng);

// Linear-functional release with ratio certification. Ledger
// (3 eps, (1 + e^eps + e^{2 eps}) delta).
ReleaseOutcome release_functional(const Dataset& data, const GlmLoss& loss,
                                  const Eigen::VectorXd& u, double lambda_reg,
                                  const Eigen::VectorXd& theta0,
                                  const PrivacyParams& p, PNorm pnorm,
                                  RngStream& rng);
ReleaseOutcome release_functional_at(const FitResult& fitted,
                                     const GlmLoss& loss,
                                     const LipschitzConstants& L, int n,
                                     const Eigen::VectorXd& u,
                                     const PrivacyParams& p, PNorm pnorm,
                                     RngStream& rng);

}  // namespace dpmestim

#endif  // DPMESTIM_RELEASE_HPP_
