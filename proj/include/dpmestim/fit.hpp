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

#ifndef DPMESTIM_FIT_HPP_
#define DPMESTIM_FIT_HPP_

#include <optional>
#include <stdexcept>

#include <Eigen/Core>

#include "dpmestim/dataset.hpp"
#include "dpmestim/loss.hpp"

namespace dpmestim {

// Regularized M-estimate together with the Hessian and its eigenvalue
// extremes at the solution.
struct FitResult {
  Eigen::VectorXd theta;
  Eigen::MatrixXd hessian;        // (1/n) sum h'' x x^T + lambda_reg I
  double lambda_min = 0.0;        // lambda_min_unreg + lambda_reg
  double lambda_min_unreg = 0.0;  // smallest eigenvalue of the data part
  double lambda_max_unreg = 0.0;
  double grad_norm = 0.0;
  double lambda_reg = 0.0;
  Eigen::VectorXd theta0;
  int iterations = 0;
};

struct FitOptions {
  double lambda_reg = 0.0;
  std::optional<Eigen::VectorXd> theta0;  // regularizer anchor, default 0
  double tol = 1e-9;
  int max_iter = 500;
  // Optional linear tilt w added to the objective as <w, theta>; used by
  // objective perturbation.
  std::optional<Eigen::VectorXd> tilt;
  // Starting iterate; defaults to the anchor.
  std::optional<Eigen::VectorXd> init;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, Eigen::VectorXd last_iterate,
                   double grad_norm)
      : std::runtime_error(what),
        last_iterate(std::move(last_iterate)),
        grad_norm(grad_norm) {}
  Eigen::VectorXd last_iterate;
  double grad_norm;
};

// Minimizes (1/n) sum h(<theta, x_i>, y_i) + <tilt, theta>
//           + (lambda_reg/2) ||theta - theta0||^2
// by damped Newton with backtracking, falling back to gradient steps when the
// Newton system is unusable. Throws ConvergenceError past max_iter.
FitResult fit(const Dataset& data, const GlmLoss& loss, const FitOptions& opts);

FitResult fit(const Dataset& data, const GlmLoss& loss, double lambda_reg,
              const Eigen::VectorXd& theta0, double tol);

// Hessian (1/n) sum h''(<theta, x_i>, y_i) x_i x_i^T + lambda_reg I at an
// arbitrary theta, with its extreme eigenvalues (of the full matrix).
struct HessianExtremes {
  Eigen::MatrixXd hessian;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

HessianExtremes hessian_extremes(const Dataset& data, const GlmLoss& loss,
                                 const Eigen::VectorXd& theta,
                                 double lambda_reg);

// Objective value and gradient at theta; shared by the solver, the
// gradient-descent test oracle, and the DP-SGD baseline.
double objective_value(const Dataset& data, const GlmLoss& loss,
                       const FitOptions& opts, const Eigen::VectorXd& theta);
Eigen::VectorXd objective_gradient(const Dataset& data, const GlmLoss& loss,
                                   const FitOptions& opts,
                                   const Eigen::VectorXd& theta);

}  // namespace dpmestim

#endif  // DPMESTIM_FIT_HPP_
