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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dpmestim/harness.hpp"

namespace dpmestim {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string opt_str(const std::optional<double>& v) {
  return v ? format_double(*v) : "";
}

GlmLoss loss_for(const std::string& kind) {
  if (kind == "robust") return GlmLoss::robust_log();
  if (kind == "logistic") return GlmLoss::logistic();
  throw std::invalid_argument("ExperimentConfig: unknown loss kind '" + kind + "'");
}

double median_of(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const size_t k = v.size() / 2;
  return v.size() % 2 == 1 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

struct MechanismResult {
  std::optional<double> scalar_error;
  std::optional<double> vector_error;
  bool bot = false;
  std::optional<double> lmin_hat, lmax_hat;
  std::optional<double> error_to_star;
};

}  // namespace

void ExperimentConfig::validate() const {
  if (mechanisms.empty()) throw std::invalid_argument("config: mechanism list empty");
  if (n_grid.empty()) throw std::invalid_argument("config: n grid empty");
  if (eps_grid.empty()) throw std::invalid_argument("config: eps grid empty");
  if (seeds < 1) throw std::invalid_argument("config: seeds must be >= 1");
  if (d < 1) throw std::invalid_argument("config: d must be >= 1");
  (void)loss_for(loss_kind);
}

ExperimentConfig ExperimentConfig::from_json_string(const std::string& text) {
  const json j = json::parse(text);
  ExperimentConfig cfg;
  if (j.contains("mechanisms")) cfg.mechanisms = j["mechanisms"].get<std::vector<std::string>>();
  if (j.contains("loss")) cfg.loss_kind = j["loss"].get<std::string>();
  if (j.contains("n_grid")) cfg.n_grid = j["n_grid"].get<std::vector<int>>();
  if (j.contains("d")) cfg.d = j["d"].get<int>();
  if (j.contains("eps_grid")) cfg.eps_grid = j["eps_grid"].get<std::vector<double>>();
  if (j.contains("delta")) cfg.delta = j["delta"].get<double>();
  if (j.contains("lambda_reg")) cfg.lambda_reg = j["lambda_reg"].get<double>();
  if (j.contains("theta_star_norm")) cfg.theta_star_norm = j["theta_star_norm"].get<double>();
  if (j.contains("noise_sigma")) cfg.noise_sigma = j["noise_sigma"].get<double>();
  if (j.contains("seeds")) cfg.seeds = j["seeds"].get<int>();
  if (j.contains("p")) {
    if (j["p"].is_string()) {
      const std::string s = j["p"].get<std::string>();
      cfg.pnorm = s == "inf" ? std::numeric_limits<double>::infinity()
                             : std::stod(s);
    } else {
      cfg.pnorm = j["p"].get<double>();
    }
  }
  if (j.contains("functional_coordinate")) cfg.functional_coordinate = j["functional_coordinate"].get<int>();
  if (j.contains("fallback_objective")) cfg.fallback_objective = j["fallback_objective"].get<bool>();
  if (j.contains("master_seed")) cfg.master_seed = j["master_seed"].get<std::uint64_t>();
  if (j.contains("out")) cfg.out_path = j["out"].get<std::string>();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_string(ss.str());
}

namespace {

MechanismResult run_mechanism(const std::string& mech,
                              const ExperimentConfig& cfg, const Dataset& data,
                              const FitResult& target, const GlmLoss& loss,
                              const Eigen::VectorXd& theta_star, double eps,
                              RngStream& cell_rng) {
  const PrivacyParams p{eps, cfg.delta};
  const PNorm pnorm{cfg.pnorm};
  Eigen::VectorXd u = Eigen::VectorXd::Zero(cfg.d);
  u[cfg.functional_coordinate % cfg.d] = 1.0;
  const LipschitzConstants L = lipschitz_constants(loss, data.domain, data.d());

  MechanismResult res;
  auto record_scalar = [&](const ReleaseOutcome& out) {
    if (out.is_bot()) {
      res.bot = true;
    } else {
      res.scalar_error = std::abs(*out.scalar - u.dot(target.theta));
      res.error_to_star = std::abs(*out.scalar - u.dot(theta_star));
    }
    res.lmin_hat = out.diagnostics.lambda_min_hat;
    res.lmax_hat = out.diagnostics.lambda_max_hat;
  };
  auto record_vector = [&](const ReleaseOutcome& out) {
    if (out.is_bot()) {
      res.bot = true;
    } else {
      res.vector_error = (*out.vector - target.theta).norm();
      res.error_to_star = (*out.vector - theta_star).norm();
    }
    res.lmin_hat = out.diagnostics.lambda_min_hat;
    res.lmax_hat = out.diagnostics.lambda_max_hat;
  };

  if (mech == "local-functional") {
    ReleaseOutcome out = release_functional_at(target, loss, L, data.n(), u, p,
                                               pnorm, cell_rng);
    if (out.is_bot() && cfg.fallback_objective) {
      // Folktables-style fallback: objective perturbation at half budget.
      const PrivacyParams half{eps / 2.0, cfg.delta};
      ReleaseOutcome fb = objective_perturbation(
          data, loss, Eigen::VectorXd::Zero(cfg.d), half, cell_rng);
      fb.diagnostics = out.diagnostics;
      fb.scalar = u.dot(*fb.vector);
      fb.vector.reset();
      record_scalar(fb);
      res.bot = false;
    } else {
      record_scalar(out);
    }
  } else if (mech == "local-theta") {
    record_vector(release_theta_qsc(data, loss, cfg.lambda_reg,
                                    Eigen::VectorXd::Zero(cfg.d), p, cell_rng));
  } else if (mech == "local-theta-generic") {
    record_vector(release_theta_generic(data, loss, cfg.lambda_reg,
                                        Eigen::VectorXd::Zero(cfg.d), p,
                                        cell_rng));
  } else if (mech == "nonprivate") {
    record_scalar(nonprivate_idealized(data, loss, u, cfg.lambda_reg, p, pnorm,
                                       cell_rng));
  } else if (mech == "nonprivate-theta") {
    record_vector(nonprivate_idealized(data, loss, std::nullopt,
                                       cfg.lambda_reg, p, pnorm, cell_rng));
  } else if (mech == "naive") {
    ReleaseOutcome out = naive_output_perturbation(data, loss, p, cell_rng);
    out.scalar = u.dot(*out.vector);
    out.vector.reset();
    record_scalar(out);
  } else if (mech == "naive-theta") {
    record_vector(naive_output_perturbation(data, loss, p, cell_rng));
  } else if (mech == "objective") {
    ReleaseOutcome out = objective_perturbation(
        data, loss, Eigen::VectorXd::Zero(cfg.d), p, cell_rng);
    out.scalar = u.dot(*out.vector);
    out.vector.reset();
    record_scalar(out);
  } else if (mech == "objective-theta") {
    record_vector(objective_perturbation(data, loss,
                                         Eigen::VectorXd::Zero(cfg.d), p,
                                         cell_rng));
  } else if (mech == "dpsgd") {
    ReleaseOutcome out = dpsgd(data, loss, p, {}, cell_rng);
    out.scalar = u.dot(*out.vector);
    out.vector.reset();
    record_scalar(out);
  } else if (mech == "dpsgd-theta") {
    record_vector(dpsgd(data, loss, p, {}, cell_rng));
  } else {
    throw std::invalid_argument("unknown mechanism '" + mech + "'");
  }
  return res;
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const GlmLoss loss = loss_for(cfg.loss_kind);
  std::vector<ResultRow> rows;

  for (int n : cfg.n_grid) {
    for (int s = 0; s < cfg.seeds; ++s) {
      // One data draw and one base noise stream per (n, seed) cell; the eps
      // grid and the mechanisms reuse the stream so comparisons are paired
      // (common random numbers).
      const std::uint64_t cell_seed =
          cfg.master_seed ^ (static_cast<std::uint64_t>(n) << 20) ^
          static_cast<std::uint64_t>(s);
      const SyntheticData gen =
          cfg.loss_kind == "logistic"
              ? gen_logistic_data(n, cfg.d, cfg.theta_star_norm, cell_seed)
              : gen_robust_data(n, cfg.d, cfg.theta_star_norm, cfg.noise_sigma,
                                cell_seed);
      FitResult target;
      try {
        target = fit(gen.data, loss, {.lambda_reg = cfg.lambda_reg});
      } catch (const std::exception& e) {
        for (double eps : cfg.eps_grid) {
          for (const auto& mech : cfg.mechanisms) {
            ResultRow row{mech, n, cfg.d, eps, cell_seed};
            row.released_bot = true;
            row.failure = std::string("fit: ") + e.what();
            rows.push_back(std::move(row));
          }
        }
        continue;
      }
      for (double eps : cfg.eps_grid) {
        for (const auto& mech : cfg.mechanisms) {
          RngStream cell_rng(cell_seed);
          ResultRow row{mech, n, cfg.d, eps, cell_seed};
          const auto start = std::chrono::steady_clock::now();
          try {
            const MechanismResult res =
                run_mechanism(mech, cfg, gen.data, target, loss,
                              gen.theta_star, eps, cell_rng);
            row.error = res.scalar_error ? res.scalar_error : res.vector_error;
            row.released_bot = res.bot;
            row.lambda_min_hat = res.lmin_hat;
            row.lambda_max_hat = res.lmax_hat;
            row.error_to_star = res.error_to_star;
          } catch (const std::exception& e) {
            row.released_bot = true;
            row.failure = e.what();
          }
          row.wall_time_ms =
              std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - start)
                  .count();
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows,
                        bool include_wall_time) {
  std::string out =
      "mechanism,n,d,eps,seed,error,released_bot,lambda_min_hat,"
      "lambda_max_hat,wall_time_ms,error_to_star,failure\n";
  for (const auto& r : rows) {
    out += r.mechanism + ',' + std::to_string(r.n) + ',' + std::to_string(r.d) +
           ',' + format_double(r.eps) + ',' + std::to_string(r.seed) + ',' +
           opt_str(r.error) + ',' + (r.released_bot ? "1" : "0") + ',' +
           opt_str(r.lambda_min_hat) + ',' + opt_str(r.lambda_max_hat) + ',' +
           (include_wall_time ? format_double(r.wall_time_ms) : std::string()) +
           ',' + opt_str(r.error_to_star) + ',' + r.failure.value_or("") + '\n';
  }
  return out;
}

void emit_report(const std::vector<ResultRow>& rows, const std::string& path) {
  {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_report: cannot write '" + path + "'");
    out << rows_to_csv(rows);
  }

  // Aggregate per (mechanism, n, d, eps) cell, in first-seen order.
  struct Cell {
    std::string mechanism;
    int n;
    int d;
    double eps;
    std::vector<double> errors;
    int bot = 0;
    int count = 0;
  };
  std::vector<Cell> cells;
  auto find_cell = [&](const ResultRow& r) -> Cell& {
    for (auto& c : cells) {
      if (c.mechanism == r.mechanism && c.n == r.n && c.d == r.d &&
          c.eps == r.eps) {
        return c;
      }
    }
    cells.push_back({r.mechanism, r.n, r.d, r.eps, {}, 0, 0});
    return cells.back();
  };
  for (const auto& r : rows) {
    Cell& c = find_cell(r);
    ++c.count;
    if (r.released_bot || !r.error) {
      ++c.bot;
    } else {
      c.errors.push_back(*r.error);
    }
  }

  std::ofstream agg(path + ".agg.csv");
  if (!agg) throw std::runtime_error("emit_report: cannot write aggregate file");
  agg << "mechanism,n,d,eps,count,bot_count,median_error,se_error,lo,hi\n";
  for (const auto& c : cells) {
    const double med = median_of(c.errors);
    double se = 0.0;
    if (c.errors.size() > 1) {
      double mean = 0.0;
      for (double e : c.errors) mean += e;
      mean /= c.errors.size();
      double var = 0.0;
      for (double e : c.errors) var += (e - mean) * (e - mean);
      var /= (c.errors.size() - 1);
      se = std::sqrt(var / c.errors.size());
    }
    agg << c.mechanism << ',' << c.n << ',' << c.d << ',' << format_double(c.eps)
        << ',' << c.count << ',' << c.bot << ','
        << (c.errors.empty() ? "" : format_double(med)) << ','
        << (c.errors.empty() ? "" : format_double(se)) << ','
        << (c.errors.empty() ? "" : format_double(med - 2.0 * se)) << ','
        << (c.errors.empty() ? "" : format_double(med + 2.0 * se)) << '\n';
  }
}

}  // namespace dpmestim
