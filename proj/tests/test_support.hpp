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

#ifndef DPMESTIM_TESTS_TEST_SUPPORT_HPP_
#define DPMESTIM_TESTS_TEST_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

#include "dpmestim/fit.hpp"
#include "dpmestim/harness.hpp"
#include "dpmestim/privacy.hpp"

namespace dpmestim::testing {

// Independent fixed-step gradient-descent oracle for the fit contract. Stays
// deliberately naive: constant step 1/(L1 + lambda_reg), no line search, no
// curvature information.
inline Eigen::VectorXd gradient_descent_oracle(const Dataset& data,
                                               const GlmLoss& loss,
                                               const FitOptions& opts,
                                               double step, double tol,
                                               long max_iter = 2000000) {
  Eigen::VectorXd theta =
      opts.theta0 ? *opts.theta0 : Eigen::VectorXd::Zero(data.d());
  for (long i = 0; i < max_iter; ++i) {
    const Eigen::VectorXd g = objective_gradient(data, loss, opts, theta);
    if (g.norm() <= tol) break;
    theta -= step * g;
  }
  return theta;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t k = v.size() / 2;
  return v.size() % 2 == 1 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

// Random row drawn from the same generator family as the dataset; used to
// build neighboring samples.
inline std::pair<Eigen::VectorXd, double> random_robust_row(int d,
                                                            RngStream& rng) {
  Eigen::VectorXd x(d);
  for (int j = 0; j < d; ++j) x[j] = 2.0 * rng.uniform() - 1.0;
  const double y = 4.0 * rng.uniform() - 2.0;
  return {x, y};
}

}  // namespace dpmestim::testing

#endif  // DPMESTIM_TESTS_TEST_SUPPORT_HPP_
