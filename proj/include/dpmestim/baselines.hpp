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

#ifndef DPMESTIM_BASELINES_HPP_
#define DPMESTIM_BASELINES_HPP_

#include <optional>

#include "dpmestim/release.hpp"

namespace dpmestim {

// Objective perturbation: ridge objective tilted by W^T theta with
// lambda_reg = 4 L1/(n eps) and W ~ N(0, sigma^2 I),
// sigma^2 = (2 r/(n eps)) (sqrt(2 log(4/delta)) + sqrt(2 eps + 2 log(4/delta))).
// The noise formula is the stated one, used as-is rather than re-derived.
ReleaseOutcome objective_perturbation(const Dataset& data, const GlmLoss& loss,
                                      const Eigen::VectorXd& theta0,
                                      const PrivacyParams& p, RngStream& rng);

// Output perturbation of a ridge fit at lambda_reg = 1e-2 with the trivial
// sensitivity 2 L0/(n lambda_reg).
ReleaseOutcome naive_output_perturbation(const Dataset& data,
                                         const GlmLoss& loss,
                                         const PrivacyParams& p,
                                         RngStream& rng);

// Non-private idealized release: noise scaled exactly by the local parameter
// sensitivity (directional when u is given). Not differentially private; the
// comparison target for the local mechanisms.
ReleaseOutcome nonprivate_idealized(const Dataset& data, const GlmLoss& loss,
                                    const std::optional<Eigen::VectorXd>& u,
                                    double lambda_reg, const PrivacyParams& p,
                                    PNorm pnorm, RngStream& rng);

struct DpsgdHyper {
  int batch = 0;   // 0 => n/10
  int steps = 100;
  double clip = -1.0;  // < 0 => L0
  double lr = -1.0;    // < 0 => 1/L1
};

// Clipped-gradient SGD with per-step Gaussian noise and simple composition
// over steps (deliberately loose accounting). Returns the final iterate.
ReleaseOutcome dpsgd(const Dataset& data, const GlmLoss& loss,
                     const PrivacyParams& p, const DpsgdHyper& hyper,
                     RngStream& rng);

}  // namespace dpmestim

#endif  // DPMESTIM_BASELINES_HPP_
