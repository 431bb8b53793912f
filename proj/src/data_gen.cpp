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

#include <cmath>

#include "dpmestim/harness.hpp"

namespace dpmestim {

namespace {

Eigen::VectorXd sphere_point(int d, double radius, RngStream& rng) {
  Eigen::VectorXd v(d);
  do {
    for (int i = 0; i < d; ++i) v[i] = rng.sample_gaussian(1.0);
  } while (v.norm() == 0.0);
  return radius / v.norm() * v;
}

Eigen::MatrixXd uniform_cube(int n, int d, RngStream& rng) {
  Eigen::MatrixXd x(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) x(i, j) = 2.0 * rng.uniform() - 1.0;
  }
  return x;
}

}  // namespace

SyntheticData gen_robust_data(int n, int d, double r_theta, double sigma_noise,
                              std::uint64_t seed) {
  RngStream rng(seed);
  auto theta_rng = rng.derive("theta-star");
  auto x_rng = rng.derive("covariates");
  auto noise_rng = rng.derive("response-noise");
  const Eigen::VectorXd theta_star =
      r_theta > 0.0 ? sphere_point(d, r_theta, theta_rng)
                    : Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd x = uniform_cube(n, d, x_rng);
  Eigen::VectorXd y = x * theta_star;
  for (int i = 0; i < n; ++i) y[i] += noise_rng.sample_laplace(sigma_noise);
  return {Dataset(std::move(x), std::move(y), CovariateDomain::hypercube(1.0),
                  ResponseKind::kReal),
          theta_star};
}

SyntheticData gen_logistic_data(int n, int d, double r_theta,
                                std::uint64_t seed) {
  RngStream rng(seed);
  auto theta_rng = rng.derive("theta-star");
  auto x_rng = rng.derive("covariates");
  auto label_rng = rng.derive("labels");
  const Eigen::VectorXd theta_star =
      r_theta > 0.0 ? sphere_point(d, r_theta, theta_rng)
                    : Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd x = uniform_cube(n, d, x_rng);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double t = x.row(i).dot(theta_star);
    const double prob = 1.0 / (1.0 + std::exp(-t));
    y[i] = label_rng.uniform() < prob ? 1.0 : -1.0;
  }
  return {Dataset(std::move(x), std::move(y), CovariateDomain::hypercube(1.0),
                  ResponseKind::kBinary),
          theta_star};
}

}  // namespace dpmestim
