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

#ifndef DPMESTIM_LOSS_HPP_
#define DPMESTIM_LOSS_HPP_

#include <array>
#include <functional>
#include <string>

#include "dpmestim/dataset.hpp"

namespace dpmestim {

// Value and first three derivatives of the scalar link t -> h(t, y).
struct LinkDerivatives {
  double h;
  double h1;
  double h2;
  double h3;
};

// GLM link loss h(t, y) with analytic derivative evaluators and the constants
// the release machinery consumes:
//   hp_sup/hpp_sup/hppp_sup  sup norms of h', h'', h'''
//   alpha, rho               linear quasi-self-concordance constants, i.e.
//                            kappa(s) = e^{alpha s} - 1 with
//                            kappa(t) <= alpha t for t <= (1 - rho)/alpha
struct GlmLoss {
  enum class Kind { kRobustLog, kLogistic, kCustom };
  Kind kind = Kind::kRobustLog;
  std::string name;
  std::function<LinkDerivatives(double t, double y)> derivs;
  double hp_sup = 1.0;
  double hpp_sup = 0.5;
  double hppp_sup = 0.19245;
  double alpha = 1.234;
  double rho = 0.5;

  // Smoothed absolute-error loss h(t, y) = phi(t - y) with
  // phi(t) = log(1 + e^t) + log(1 + e^{-t}).
  static GlmLoss robust_log();
  // Binary logistic loss h(t, y) = log(1 + e^{-y t}), y in {-1, +1}.
  static GlmLoss logistic();
  // Extension point for user-supplied links; the caller owns the constants.
  static GlmLoss custom(std::string name,
                        std::function<LinkDerivatives(double, double)> derivs,
                        double hp_sup, double hpp_sup, double hppp_sup,
                        double alpha, double rho);

  double kappa(double s) const;  // e^{alpha s} - 1
};

// Evaluates h and its first three derivatives in t. Throws on non-finite t
// or, for the logistic loss, a label outside {-1, +1}.
LinkDerivatives h_derivatives(const GlmLoss& loss, double t, double y);

// Lipschitz constants of the induced loss theta -> h(<theta, x>, y) over the
// domain, together with the domain's l2 radius.
struct LipschitzConstants {
  double L0 = 0.0;
  double L1 = 0.0;
  double L2 = 0.0;
  double radius2 = 0.0;
};

LipschitzConstants lipschitz_constants(const GlmLoss& loss,
                                       const CovariateDomain& domain, int d);

}  // namespace dpmestim

#endif  // DPMESTIM_LOSS_HPP_
