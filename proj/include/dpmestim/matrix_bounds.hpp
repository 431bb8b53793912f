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

#ifndef DPMESTIM_MATRIX_BOUNDS_HPP_
#define DPMESTIM_MATRIX_BOUNDS_HPP_

#include <Eigen/Core>

namespace dpmestim {

// Closed-form upper bound on sup{tr(X C) : A <= X <= B} (semidefinite order):
//   (1/2) <B, [C + C^T]_+> + (1/2) <A, [C + C^T]_->
// where [.]_+/[.]_- are the positive/negative semidefinite parts. Exact when
// A and B are invariant in the eigenspaces of the two parts. Requires A <= B
// (verified through an eigensolve of B - A).
double sup_trace_box(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                     const Eigen::MatrixXd& C);

// Positive semidefinite part of a symmetric matrix; exposed because tests
// build the attaining X from the same decomposition.
Eigen::MatrixXd psd_part(const Eigen::MatrixXd& S);

}  // namespace dpmestim

#endif  // DPMESTIM_MATRIX_BOUNDS_HPP_
