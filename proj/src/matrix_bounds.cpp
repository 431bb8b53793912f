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

#include "dpmestim/matrix_bounds.hpp"

#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace dpmestim {

Eigen::MatrixXd psd_part(const Eigen::MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  const Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
}

double sup_trace_box(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                     const Eigen::MatrixXd& C) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || C.rows() != C.cols() ||
      A.rows() != B.rows() || A.rows() != C.rows()) {
    throw std::invalid_argument("sup_trace_box: dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gap(B - A);
  if (gap.eigenvalues().minCoeff() < -1e-10 * (1.0 + B.norm() + A.norm())) {
    throw std::invalid_argument("sup_trace_box: A must precede B in the semidefinite order");
  }
  const Eigen::MatrixXd sym = C + C.transpose();
  const Eigen::MatrixXd pos = psd_part(sym);
  const Eigen::MatrixXd neg = sym - pos;  // negative semidefinite part
  return 0.5 * (B.cwiseProduct(pos).sum() + A.cwiseProduct(neg).sum());
}

}  // namespace dpmestim
