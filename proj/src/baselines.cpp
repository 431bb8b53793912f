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

#include "dpmestim/baselines.hpp"

#include <cmath>

namespace dpmestim {

ReleaseOutcome objective_perturbation(const Dataset& data, const GlmLoss& loss,
                                      const Eigen::VectorXd& theta0,
                                      const PrivacyParams& p, RngStream& rng) {
  p.validate();
  const int n = data.n();
  const int d = data.d();
  const LipschitzConstants L = lipschitz_constants(loss, data.domain, data.d());
  const double lambda_reg = 4.0 * L.L1 / (n * p.epsilon);
  const double log_term = 2.0 * std::log(4.0 / p.delta);
  const double sigma2 = 2.0 * L.radius2 / (n * p.epsilon) *
                        (std::sqrt(log_term) +
                         std::sqrt(2.0 * p.epsilon + log_term));
  auto tilt_rng = rng.derive("objective-tilt");
  const Eigen::VectorXd w = tilt_rng.sample_gaussian_vector(std::sqrt(sigma2), d);

  FitOptions opts;
  opts.lambda_reg = lambda_reg;
  opts.theta0 = Eigen::VectorXd::Zero(d);  // ridge anchored at the origin
  opts.tilt = w;
  opts.init = theta0;  // warm start only
  const FitResult fitted = fit(data, loss, opts);

  ReleaseOutcome out;
  out.vector = fitted.theta;
  out.noise_std = std::sqrt(sigma2);
  out.ledger = compose(out.ledger, {"objective-perturbation", p.epsilon,
                                    p.delta, 0.0,
                                    BudgetEntry::Rule::kConditional});
  out.diagnostics.note = "lambda_reg=" + std::to_string(lambda_reg);
  return out;
}

ReleaseOutcome naive_output_perturbation(const Dataset& data,
                                         const GlmLoss& loss,
                                         const PrivacyParams& p,
                                         RngStream& rng) {
  p.validate();
  constexpr double kRidge = 1e-2;
  const int n = data.n();
  const LipschitzConstants L = lipschitz_constants(loss, data.domain, data.d());
  const FitResult fitted = fit(data, loss, {.lambda_reg = kRidge});
  const double sensitivity = 2.0 * L.L0 / (n * kRidge);

  ReleaseOutcome out;
  out.noise_std = sensitivity * gaussian_sigma(p);
  auto noise_rng = rng.derive("release-noise");
  out.vector =
      fitted.theta + noise_rng.sample_gaussian_vector(out.noise_std, data.d());
  out.ledger = compose(out.ledger, {"naive-output-perturbation", p.epsilon,
                                    p.delta, 0.0,
                                    BudgetEntry::Rule::kConditional});
  return out;
}

ReleaseOutcome nonprivate_idealized(const Dataset& data, const GlmLoss& loss,
                                    const std::optional<Eigen::VectorXd>& u,
                                    double lambda_reg, const PrivacyParams& p,
                                    PNorm pnorm, RngStream& rng) {
  p.validate();
  const int n = data.n();
  const int d = data.d();
  const LipschitzConstants L = lipschitz_constants(loss, data.domain, d);
  const FitResult fitted = fit(data, loss, {.lambda_reg = lambda_reg});

  ReleaseOutcome out;
  out.ledger = compose(out.ledger, {"nonprivate-idealized", 0.0, 0.0, 0.0,
                                    BudgetEntry::Rule::kConditional});
  auto noise_rng = rng.derive("release-noise");
  const double sigma = gaussian_sigma(p);
  if (u) {
    const double delta_u =
        directional_sensitivity(fitted.hessian, *u, pnorm, L.L0, n, d);
    out.sigma_bar = delta_u;
    out.noise_std = delta_u * sigma;
    out.scalar = u->dot(fitted.theta) + noise_rng.sample_gaussian(out.noise_std);
  } else {
    const double delta = vector_sensitivity(fitted.hessian, pnorm, L.L0, n, d);
    out.noise_std = delta * sigma;
    out.vector =
        fitted.theta + noise_rng.sample_gaussian_vector(out.noise_std, d);
  }
  return out;
}

ReleaseOutcome dpsgd(const Dataset& data, const GlmLoss& loss,
                     const PrivacyParams& p, const DpsgdHyper& hyper,
                     RngStream& rng) {
  // epsilon = inf switches the noise off (non-private SGD for calibration
  // tests); finite parameters are validated as usual.
  if (!std::isinf(p.epsilon)) p.validate();
  const int n = data.n();
  const int d = data.d();
  const LipschitzConstants L = lipschitz_constants(loss, data.domain, d);
  const int batch = hyper.batch > 0 ? hyper.batch : std::max(1, n / 10);
  const int steps = hyper.steps;
  const double clip = hyper.clip >= 0.0 ? hyper.clip : L.L0;
  const double lr = hyper.lr > 0.0 ? hyper.lr : 1.0 / L.L1;
  const PrivacyParams per_step{p.epsilon / steps, p.delta / steps};
  // One-record replacement shifts the averaged clipped gradient by at most
  // 2 clip / batch.
  const double noise_std =
      clip > 0.0 ? 2.0 * clip / batch *
                       (std::isinf(p.epsilon) ? 0.0 : gaussian_sigma(per_step))
                 : 0.0;

  auto batch_rng = rng.derive("dpsgd-batch");
  auto noise_rng = rng.derive("dpsgd-noise");
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(d);
  for (int s = 0; s < steps; ++s) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
    for (int b = 0; b < batch; ++b) {
      const int i = batch == n
                        ? b
                        : static_cast<int>(batch_rng.uniform() * n) % n;
      const Eigen::VectorXd xi = data.covariates.row(i).transpose();
      const LinkDerivatives ld =
          h_derivatives(loss, xi.dot(theta), data.responses[i]);
      Eigen::VectorXd gi = ld.h1 * xi;
      const double norm = gi.norm();
      if (norm > clip) gi *= clip / std::max(norm, 1e-300);
      if (clip == 0.0) gi.setZero();
      g += gi;
    }
    g /= batch;
    g += noise_rng.sample_gaussian_vector(noise_std, d);
    theta -= lr * g;
  }

  ReleaseOutcome out;
  out.vector = theta;
  out.noise_std = noise_std;
  out.ledger = compose(out.ledger,
                       {"dpsgd: " + std::to_string(steps) +
                            "-step simple composition (loose)",
                        p.epsilon, p.delta, 0.0,
                        BudgetEntry::Rule::kConditional});
  return out;
}

}  // namespace dpmestim
