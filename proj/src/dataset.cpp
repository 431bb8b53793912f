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

#include "dpmestim/dataset.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dpmestim {

CovariateDomain CovariateDomain::hypercube(double half_width) {
  return {Kind::kHypercube, half_width, 2.0};
}

CovariateDomain CovariateDomain::l2_ball(double radius) {
  return {Kind::kL2Ball, radius, 2.0};
}

CovariateDomain CovariateDomain::lp_ball(double radius, double p) {
  if (p < 2.0) throw std::invalid_argument("CovariateDomain: lp ball requires p >= 2");
  return {Kind::kLpBall, radius, p};
}

double CovariateDomain::radius2(int d) const {
  switch (kind) {
    case Kind::kHypercube:
      return radius * std::sqrt(static_cast<double>(d));
    case Kind::kL2Ball:
      return radius;
    case Kind::kLpBall:
      // max l2 norm on an lp ball: r * d^{1/2 - 1/p} for p >= 2
      return radius * std::pow(static_cast<double>(d), 0.5 - 1.0 / p);
  }
  return radius;
}

bool CovariateDomain::contains(const Eigen::VectorXd& x) const {
  constexpr double kSlack = 1e-12;
  switch (kind) {
    case Kind::kHypercube:
      return x.lpNorm<Eigen::Infinity>() <= radius * (1.0 + kSlack) + kSlack;
    case Kind::kL2Ball:
      return x.norm() <= radius * (1.0 + kSlack) + kSlack;
    case Kind::kLpBall: {
      if (std::isinf(p)) return x.lpNorm<Eigen::Infinity>() <= radius * (1.0 + kSlack) + kSlack;
      double s = 0.0;
      for (int i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]), p);
      return std::pow(s, 1.0 / p) <= radius * (1.0 + kSlack) + kSlack;
    }
  }
  return false;
}

Dataset::Dataset(Eigen::MatrixXd x, Eigen::VectorXd y, CovariateDomain dom,
                 ResponseKind kind)
    : covariates(std::move(x)),
      responses(std::move(y)),
      domain(dom),
      response_kind(kind) {
  if (covariates.rows() != responses.size()) {
    throw std::invalid_argument("Dataset: covariate/response length mismatch");
  }
  if (covariates.rows() < 1 || covariates.cols() < 1) {
    throw std::invalid_argument("Dataset: n and d must be positive");
  }
  for (int i = 0; i < covariates.rows(); ++i) {
    if (!covariates.row(i).allFinite()) {
      throw std::invalid_argument("Dataset: non-finite covariate in row " +
                                  std::to_string(i));
    }
    if (!domain.contains(covariates.row(i).transpose())) {
      throw std::invalid_argument("Dataset: row " + std::to_string(i) +
                                  " lies outside the declared domain");
    }
    const double yi = responses[i];
    if (!std::isfinite(yi)) {
      throw std::invalid_argument("Dataset: non-finite response in row " +
                                  std::to_string(i));
    }
    if (response_kind == ResponseKind::kBinary && yi != 1.0 && yi != -1.0) {
      throw std::invalid_argument("Dataset: binary response in row " +
                                  std::to_string(i) + " must be +1 or -1");
    }
  }
}

Dataset Dataset::with_row_replaced(int i, const Eigen::VectorXd& x,
                                   double y) const {
  if (i < 0 || i >= n()) throw std::out_of_range("with_row_replaced: bad row index");
  Eigen::MatrixXd xs = covariates;
  Eigen::VectorXd ys = responses;
  xs.row(i) = x.transpose();
  ys[i] = y;
  return Dataset(std::move(xs), std::move(ys), domain, response_kind);
}

}  // namespace dpmestim
