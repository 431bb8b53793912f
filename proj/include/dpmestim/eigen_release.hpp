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

#ifndef DPMESTIM_EIGEN_RELEASE_HPP_
#define DPMESTIM_EIGEN_RELEASE_HPP_

#include "dpmestim/fit.hpp"
#include "dpmestim/privacy.hpp"
#include "dpmestim/recursions.hpp"

namespace dpmestim {

// Output of a recursive eigenvalue release: the Laplace-noised hitting time
// N_hat, the certified bound lambda_hat, and the budget consumed.
struct EigenRelease {
  double n_hat = 0.0;
  double lambda_hat = 0.0;
  bool saturated = false;
  PrivacyParams budget;
};

// The noised hitting time N_hat = N + Laplace(1)/eps is real-valued while the
// inversion needs an integer exponent. We use m = max(0, ceil(N_hat - k) - 1):
// for non-integer N_hat - k this is the plain floor, and at integers it rounds
// down one extra step, which keeps the one-sided certificate
// lambda_hat <= lambda exact on the noiseless path as well.
long inversion_exponent(double n_hat, double k);

// Lower bound on lambda_min(P_n) + lambda_reg via the generic smooth-loss
// recursion; eps-DP, and lambda_hat <= lambda_min + lambda_reg with
// probability at least 1 - delta.
EigenRelease release_lambda_min_generic(const Dataset& data,
                                        const GlmLoss& loss, double lambda_reg,
                                        const PrivacyParams& p, RngStream& rng);
EigenRelease release_lambda_min_generic_at(const FitResult& fitted,
                                           const GlmLoss& loss,
                                           const LipschitzConstants& L, int n,
                                           const PrivacyParams& p,
                                           RngStream& rng);

// Lower bound on lambda_min(P_n) (unregularized) via the
// quasi-self-concordant recursion; floor 0.
EigenRelease release_lambda_min_qsc(const Dataset& data, const GlmLoss& loss,
                                    double lambda_reg, const PrivacyParams& p,
                                    RngStream& rng);
EigenRelease release_lambda_min_qsc_at(const FitResult& fitted,
                                       const GlmLoss& loss,
                                       const LipschitzConstants& L, int n,
                                       const PrivacyParams& p, RngStream& rng);

// Upper bound on lambda_max(P_n) through the increasing recursion anchored at
// a released lower bound lambda_hat_min. When lambda_hat_min + lambda_reg
// fails Condition C1 the release saturates at L1.
EigenRelease release_lambda_max(const Dataset& data, const GlmLoss& loss,
                                double lambda_reg, double lambda_hat_min,
                                const PrivacyParams& p, RngStream& rng);
EigenRelease release_lambda_max_at(const FitResult& fitted,
                                   const GlmLoss& loss,
                                   const LipschitzConstants& L, int n,
                                   double lambda_hat_min,
                                   const PrivacyParams& p, RngStream& rng);

}  // namespace dpmestim

#endif  // DPMESTIM_EIGEN_RELEASE_HPP_
