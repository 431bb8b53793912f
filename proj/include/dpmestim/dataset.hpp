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

#ifndef DPMESTIM_DATASET_HPP_
#define DPMESTIM_DATASET_HPP_

#include <Eigen/Core>

namespace dpmestim {

// Covariate domain: a hypercube [-r, r]^d, an l2 ball, or an lp ball (p >= 2).
struct CovariateDomain {
  enum class Kind { kHypercube, kL2Ball, kLpBall };
  Kind kind = Kind::kHypercube;
  double radius = 1.0;  // half-width for the hypercube, radius otherwise
  double p = 2.0;       // only meaningful for kLpBall

  static CovariateDomain hypercube(double half_width);
  static CovariateDomain l2_ball(double radius);
  static CovariateDomain lp_ball(double radius, double p);

  // Largest l2 norm attainable in the domain for dimension d.
  double radius2(int d) const;
  bool contains(const Eigen::VectorXd& x) const;
};

enum class ResponseKind { kReal, kBinary };

// Sample of n labeled covariate rows; rows are validated against the domain
// at construction. Replacing a single row yields a neighboring sample.
struct Dataset {
  Eigen::MatrixXd covariates;  // n x d
  Eigen::VectorXd responses;   // length n; in {-1, +1} for kBinary
  CovariateDomain domain;
  ResponseKind response_kind = ResponseKind::kReal;

  Dataset(Eigen::MatrixXd x, Eigen::VectorXd y, CovariateDomain dom,
          ResponseKind kind);

  int n() const { return static_cast<int>(covariates.rows()); }
  int d() const { return static_cast<int>(covariates.cols()); }

  // Neighboring sample with row i replaced by (x, y). Test utility only;
  // mechanisms never enumerate neighbors.
  Dataset with_row_replaced(int i, const Eigen::VectorXd& x, double y) const;
};

}  // namespace dpmestim

#endif  // DPMESTIM_DATASET_HPP_
