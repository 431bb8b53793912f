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

#include "dpmestim/loss.hpp"

#include <cmath>
#include <stdexcept>

namespace dpmestim {

namespace {

// log(1 + e^t) without overflow.
double softplus(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

// sigma(t) = 1/(1 + e^t); decreasing, sigma(0) = 1/2. Evaluated through
// e^{-|t|} so it stays positive (subnormal) out to |t| ~ 700.
double sigma_neg(double t) {
  if (t >= 0.0) {
    const double z = std::exp(-t);
    return z / (1.0 + z);
  }
  return 1.0 / (1.0 + std::exp(t));
}

// Shared second-derivative kernel e^{-|t|} / (1 + e^{-|t|})^2
//   = 2 e^t / (1 + e^t)^2 / 2 ... equal to sigma(t) (1 - sigma(t)).
double sigmoid_curvature(double t) {
  const double z = std::exp(-std::abs(t));
  const double denom = 1.0 + z;
  return z / (denom * denom);
}

// phi(t) = log(1 + e^t) + log(1 + e^{-t}); the smoothed absolute error.
// phi' = tanh(t/2), phi'' = 2 e^t/(1 + e^t)^2 in (0, 1/2], phi''' = -phi' phi''.
LinkDerivatives robust_link(double t, double y) {
  const double s = t - y;
  const double phi1 = std::tanh(0.5 * s);
  const double phi2 = 2.0 * sigmoid_curvature(s);
  return {softplus(s) + softplus(-s), phi1, phi2, -phi1 * phi2};
}

LinkDerivatives logistic_link(double t, double y) {
  if (y != 1.0 && y != -1.0) {
    throw std::domain_error("logistic loss: response must be +1 or -1");
  }
  const double u = y * t;
  const double sg = sigma_neg(u);                  // sigma(u)
  const double curv = sigmoid_curvature(u);        // sigma(u)(1 - sigma(u))
  // h(t, y) = softplus(-u); derivatives in t carry chain factors of y.
  return {softplus(-u), -y * sg, curv, -y * curv * (1.0 - 2.0 * sg)};
}

}  // namespace

GlmLoss GlmLoss::robust_log() {
  GlmLoss l;
  l.kind = Kind::kRobustLog;
  l.name = "robust-log";
  l.derivs = robust_link;
  l.hp_sup = 1.0;
  l.hpp_sup = 0.5;
  l.hppp_sup = 1.0 / (3.0 * std::sqrt(3.0));  // ~= 0.19245, attained sup
  l.alpha = 1.234;
  l.rho = 0.5;
  return l;
}

GlmLoss GlmLoss::logistic() {
  GlmLoss l;
  l.kind = Kind::kLogistic;
  l.name = "logistic";
  l.derivs = logistic_link;
  l.hp_sup = 1.0;
  l.hpp_sup = 0.25;
  l.hppp_sup = 0.1;  // stated bound; the attained sup is 1/(6 sqrt 3) ~= 0.0962
  l.alpha = 1.234;
  l.rho = 0.5;
  return l;
}

GlmLoss GlmLoss::custom(std::string name,
                        std::function<LinkDerivatives(double, double)> derivs,
                        double hp_sup, double hpp_sup, double hppp_sup,
                        double alpha, double rho) {
  GlmLoss l;
  l.kind = Kind::kCustom;
  l.name = std::move(name);
  l.derivs = std::move(derivs);
  l.hp_sup = hp_sup;
  l.hpp_sup = hpp_sup;
  l.hppp_sup = hppp_sup;
  l.alpha = alpha;
  l.rho = rho;
  return l;
}

double GlmLoss::kappa(double s) const { return std::expm1(alpha * s); }

LinkDerivatives h_derivatives(const GlmLoss& loss, double t, double y) {
  if (!std::isfinite(t)) throw std::domain_error("h_derivatives: non-finite t");
  return loss.derivs(t, y);
}

LipschitzConstants lipschitz_constants(const GlmLoss& loss,
                                       const CovariateDomain& domain, int d) {
  if (!std::isfinite(domain.radius) || domain.radius <= 0.0) {
    throw std::invalid_argument("lipschitz_constants: domain must be bounded");
  }
  const double r2 = domain.radius2(d);
  LipschitzConstants c;
  c.radius2 = r2;
  c.L0 = loss.hp_sup * r2;
  c.L1 = loss.hpp_sup * r2 * r2;
  if (loss.kind == GlmLoss::Kind::kRobustLog &&
      domain.kind != CovariateDomain::Kind::kHypercube) {
    c.L2 = r2 * r2 * r2 / 5.0;  // stated ball-domain constant
  } else {
    c.L2 = loss.hppp_sup * r2 * r2 * r2;
  }
  return c;
}

}  // namespace dpmestim
