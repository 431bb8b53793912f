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

#include "dpmestim/fit.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace dpmestim {

namespace {

Eigen::VectorXd anchor_or_zero(const FitOptions& opts, int d) {
  if (opts.theta0) return *opts.theta0;
  return Eigen::VectorXd::Zero(d);
}

// Hessian of the data term only (no regularizer).
Eigen::MatrixXd data_hessian(const Dataset& data, const GlmLoss& loss,
                             const Eigen::VectorXd& theta) {
  const int n = data.n();
  const int d = data.d();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd xi = data.covariates.row(i).transpose();
    const double t = xi.dot(theta);
    const LinkDerivatives ld = h_derivatives(loss, t, data.responses[i]);
    h.selfadjointView<Eigen::Lower>().rankUpdate(xi, ld.h2 / n);
  }
  return Eigen::MatrixXd(h.selfadjointView<Eigen::Lower>());
}

}  // namespace

double objective_value(const Dataset& data, const GlmLoss& loss,
                       const FitOptions& opts, const Eigen::VectorXd& theta) {
  const int n = data.n();
  double v = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = data.covariates.row(i).dot(theta);
    v += h_derivatives(loss, t, data.responses[i]).h;
  }
  v /= n;
  if (opts.tilt) v += opts.tilt->dot(theta);
  if (opts.lambda_reg > 0.0) {
    v += 0.5 * opts.lambda_reg *
         (theta - anchor_or_zero(opts, data.d())).squaredNorm();
  }
  return v;
}

Eigen::VectorXd objective_gradient(const Dataset& data, const GlmLoss& loss,
                                   const FitOptions& opts,
                                   const Eigen::VectorXd& theta) {
  const int n = data.n();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(data.d());
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd xi = data.covariates.row(i).transpose();
    const double t = xi.dot(theta);
    g.noalias() += (h_derivatives(loss, t, data.responses[i]).h1 / n) * xi;
  }
  if (opts.tilt) g += *opts.tilt;
  if (opts.lambda_reg > 0.0) {
    g += opts.lambda_reg * (theta - anchor_or_zero(opts, data.d()));
  }
  return g;
}

FitResult fit(const Dataset& data, const GlmLoss& loss,
              const FitOptions& opts) {
  if (opts.lambda_reg < 0.0) throw std::invalid_argument("fit: lambda_reg < 0");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("fit: tol must be positive");
  const int d = data.d();
  const Eigen::VectorXd theta0 = anchor_or_zero(opts, d);
  Eigen::VectorXd theta = opts.init ? *opts.init : theta0;

  double fval = objective_value(data, loss, opts, theta);
  Eigen::VectorXd grad = objective_gradient(data, loss, opts, theta);
  int iter = 0;
  for (; iter < opts.max_iter && grad.norm() > opts.tol; ++iter) {
    Eigen::MatrixXd hess = data_hessian(data, loss, theta);
    hess.diagonal().array() += opts.lambda_reg;

    // Newton direction, with a Levenberg-style boost when the factorization
    // fails or produces a non-descent direction; plain gradient descent as the
    // last resort.
    Eigen::VectorXd step;
    bool have_newton = false;
    double boost = 0.0;
    for (int attempt = 0; attempt < 3 && !have_newton; ++attempt) {
      Eigen::MatrixXd sys = hess;
      if (boost > 0.0) sys.diagonal().array() += boost;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(sys);
      if (ldlt.info() == Eigen::Success) {
        step = -ldlt.solve(grad);
        if (step.allFinite() && grad.dot(step) < 0.0) have_newton = true;
      }
      boost = boost == 0.0 ? 1e-10 * (1.0 + hess.trace() / d) : boost * 1e4;
    }
    if (!have_newton) step = -grad;

    // Backtracking line search (Armijo, c = 1e-4). The acceptance test gets a
    // few ulps of slack so the final Newton steps, whose true decrease sits
    // below the objective's floating-point resolution, still pass.
    const double slope = grad.dot(step);
    const double f_slack =
        4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(fval));
    double t = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Eigen::VectorXd cand = theta + t * step;
      const double fcand = objective_value(data, loss, opts, cand);
      if (std::isfinite(fcand) && fcand <= fval + 1e-4 * t * slope + f_slack) {
        theta = cand;
        fval = fcand;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) {
      throw ConvergenceError("fit: line search failed to make progress", theta,
                             grad.norm());
    }
    grad = objective_gradient(data, loss, opts, theta);
  }
  if (grad.norm() > opts.tol) {
    throw ConvergenceError("fit: iteration cap exceeded", theta, grad.norm());
  }

  FitResult res;
  res.theta = theta;
  res.lambda_reg = opts.lambda_reg;
  res.theta0 = theta0;
  res.grad_norm = grad.norm();
  res.iterations = iter;
  Eigen::MatrixXd hd = data_hessian(data, loss, theta);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hd);
  res.lambda_min_unreg = es.eigenvalues().minCoeff();
  res.lambda_max_unreg = es.eigenvalues().maxCoeff();
  res.lambda_min = res.lambda_min_unreg + opts.lambda_reg;
  hd.diagonal().array() += opts.lambda_reg;
  res.hessian = std::move(hd);
  return res;
}

FitResult fit(const Dataset& data, const GlmLoss& loss, double lambda_reg,
              const Eigen::VectorXd& theta0, double tol) {
  FitOptions opts;
  opts.lambda_reg = lambda_reg;
  opts.theta0 = theta0;
  opts.tol = tol;
  return fit(data, loss, opts);
}

HessianExtremes hessian_extremes(const Dataset& data, const GlmLoss& loss,
                                 const Eigen::VectorXd& theta,
                                 double lambda_reg) {
  if (!theta.allFinite()) {
    throw std::domain_error("hessian_extremes: non-finite theta");
  }
  HessianExtremes out;
  out.hessian = data_hessian(data, loss, theta);
  out.hessian.diagonal().array() += lambda_reg;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.hessian);
  out.lambda_min = es.eigenvalues().minCoeff();
  out.lambda_max = es.eigenvalues().maxCoeff();
  return out;
}

}  // namespace dpmestim
