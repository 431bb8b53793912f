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

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dpmestim/baselines.hpp"
#include "dpmestim/eigen_release.hpp"
#include "dpmestim/harness.hpp"
#include "dpmestim/release.hpp"

namespace {

using nlohmann::json;
using namespace dpmestim;

struct CommonArgs {
  std::string loss = "robust";
  std::string csv_path;
  std::string label_column = "y";
  std::vector<std::string> feature_columns;
  std::optional<double> label_threshold;
  double domain_radius = 1.0;
  int n = 1000;
  int d = 5;
  double theta_star_norm = 1.0;
  double noise_sigma = 1.0;
  double lambda_reg = 0.0;
  double eps = 1.0;
  double delta = 1e-6;
  std::string pnorm = "inf";
  std::uint64_t seed = 0;
  std::string out;
};

GlmLoss make_loss(const CommonArgs& a) {
  if (a.loss == "robust") return GlmLoss::robust_log();
  if (a.loss == "logistic") return GlmLoss::logistic();
  throw CLI::ValidationError("--loss must be robust or logistic");
}

PNorm make_pnorm(const CommonArgs& a) {
  if (a.pnorm == "inf") return PNorm::linf();
  return PNorm{std::stod(a.pnorm)};
}

Dataset make_data(const CommonArgs& a) {
  if (!a.csv_path.empty()) {
    CsvSchema schema;
    schema.feature_columns = a.feature_columns;
    schema.label_column = a.label_column;
    schema.label_threshold = a.label_threshold;
    schema.domain = CovariateDomain::hypercube(a.domain_radius);
    schema.response_kind =
        a.loss == "logistic" ? ResponseKind::kBinary : ResponseKind::kReal;
    return load_csv(a.csv_path, schema);
  }
  if (a.loss == "logistic") {
    return gen_logistic_data(a.n, a.d, a.theta_star_norm, a.seed).data;
  }
  return gen_robust_data(a.n, a.d, a.theta_star_norm, a.noise_sigma, a.seed).data;
}

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--loss", a.loss, "Loss kind: robust or logistic");
  cmd->add_option("--csv", a.csv_path, "Load data from a headered CSV file");
  cmd->add_option("--label-col", a.label_column, "CSV label column");
  cmd->add_option("--feature-cols", a.feature_columns,
                  "CSV feature columns (repeatable)");
  cmd->add_option("--label-threshold", a.label_threshold,
                  "Map label to +1 when above this threshold, else -1");
  cmd->add_option("--domain-radius", a.domain_radius,
                  "Hypercube half-width of the covariate domain");
  cmd->add_option("--n", a.n, "Synthetic sample size");
  cmd->add_option("--d", a.d, "Synthetic dimension");
  cmd->add_option("--theta-norm", a.theta_star_norm, "Synthetic ||theta*||");
  cmd->add_option("--noise-sigma", a.noise_sigma,
                  "Synthetic response noise scale");
  cmd->add_option("--lambda-reg", a.lambda_reg, "Ridge weight lambda_reg");
  cmd->add_option("--eps", a.eps, "Privacy epsilon");
  cmd->add_option("--delta", a.delta, "Privacy delta");
  cmd->add_option("--p", a.pnorm, "Gradient-set norm: 2 or inf");
  cmd->add_option("--seed", a.seed, "RNG seed");
  cmd->add_option("--out", a.out, "Write JSON/CSV output to this path");
}

void write_or_print(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream f(path);
  f << text << '\n';
}

json outcome_to_json(const ReleaseOutcome& out) {
  json j;
  if (out.scalar) {
    j["value"] = *out.scalar;
  } else if (out.vector) {
    j["value"] = std::vector<double>(out.vector->data(),
                                     out.vector->data() + out.vector->size());
  } else {
    j["value"] = nullptr;  // the refusal symbol
  }
  j["bot"] = out.is_bot();
  j["noise_std"] = out.noise_std;
  if (out.sigma_bar > 0.0) j["sigma_bar"] = out.sigma_bar;
  j["epsilon_total"] = out.ledger.epsilon_total;
  j["delta_total"] = out.ledger.delta_total;
  j["lambda_min_hat"] = out.diagnostics.lambda_min_hat;
  if (out.diagnostics.lambda_max_hat) {
    j["lambda_max_hat"] = *out.diagnostics.lambda_max_hat;
  }
  if (!out.diagnostics.note.empty()) j["note"] = out.diagnostics.note;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dpmestim: differentially private M-estimation toolkit"};
  app.require_subcommand(1);

  CommonArgs a;
  std::string config_path;
  std::string which = "min-qsc";
  std::string method = "qsc";
  std::string baseline = "objective";
  int coordinate = 0;
  std::string report_in;

  auto* c_fit = app.add_subcommand("fit", "Fit the regularized M-estimator");
  add_common(c_fit, a);

  auto* c_lambda = app.add_subcommand("release-lambda",
                                      "Privately bound an extreme eigenvalue");
  add_common(c_lambda, a);
  c_lambda->add_option("--which", which, "min-qsc, min-generic, or max");

  auto* c_theta = app.add_subcommand("release-theta",
                                     "Privately release the full parameter");
  add_common(c_theta, a);
  c_theta->add_option("--method", method, "qsc or generic");

  auto* c_func = app.add_subcommand("release-functional",
                                    "Privately release u^T theta");
  add_common(c_func, a);
  c_func->add_option("--coordinate", coordinate, "Index j of u = e_j");

  auto* c_base = app.add_subcommand("baseline", "Run a comparison mechanism");
  add_common(c_base, a);
  c_base->add_option("--method", baseline,
                     "objective, naive, nonprivate, or dpsgd");

  auto* c_exp = app.add_subcommand("experiment", "Run a configured sweep");
  c_exp->add_option("--config", config_path, "JSON experiment config")
      ->required();
  c_exp->add_option("--seed", a.seed, "Master seed override");
  c_exp->add_option("--out", a.out, "Results CSV path override");
  c_exp->add_option("--eps", a.eps, "Collapse the eps grid to this value");
  c_exp->add_option("--delta", a.delta, "Delta override");
  c_exp->add_option("--loss", a.loss, "Loss kind override");
  c_exp->add_option("--p", a.pnorm, "Gradient-set norm override: 2 or inf");

  auto* c_rep = app.add_subcommand("report", "Aggregate a results CSV");
  c_rep->add_option("--in", report_in, "Results CSV produced by 'experiment'")
      ->required();
  c_rep->add_option("--out", a.out, "Output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const PrivacyParams p{a.eps, a.delta};
    if (c_fit->parsed()) {
      const Dataset data = make_data(a);
      const FitResult f = fit(data, make_loss(a), {.lambda_reg = a.lambda_reg});
      json j;
      j["theta"] = std::vector<double>(f.theta.data(),
                                       f.theta.data() + f.theta.size());
      j["lambda_min"] = f.lambda_min;
      j["lambda_min_unreg"] = f.lambda_min_unreg;
      j["lambda_max_unreg"] = f.lambda_max_unreg;
      j["grad_norm"] = f.grad_norm;
      j["iterations"] = f.iterations;
      write_or_print(j.dump(2), a.out);
    } else if (c_lambda->parsed()) {
      const Dataset data = make_data(a);
      const GlmLoss loss = make_loss(a);
      RngStream rng(a.seed);
      EigenRelease er;
      if (which == "min-qsc") {
        er = release_lambda_min_qsc(data, loss, a.lambda_reg, p, rng);
      } else if (which == "min-generic") {
        er = release_lambda_min_generic(data, loss, a.lambda_reg, p, rng);
      } else if (which == "max") {
        RngStream rng_min = rng.derive("standalone-min");
        const EigenRelease lo =
            release_lambda_min_qsc(data, loss, a.lambda_reg, p, rng_min);
        er = release_lambda_max(data, loss, a.lambda_reg, lo.lambda_hat, p, rng);
      } else {
        throw CLI::ValidationError("--which must be min-qsc, min-generic, or max");
      }
      json j;
      j["n_hat"] = er.n_hat;
      j["lambda_hat"] = er.lambda_hat;
      j["saturated"] = er.saturated;
      write_or_print(j.dump(2), a.out);
    } else if (c_theta->parsed()) {
      const Dataset data = make_data(a);
      RngStream rng(a.seed);
      const Eigen::VectorXd theta0 = Eigen::VectorXd::Zero(data.d());
      const ReleaseOutcome out =
          method == "generic"
              ? release_theta_generic(data, make_loss(a), a.lambda_reg, theta0,
                                      p, rng)
              : release_theta_qsc(data, make_loss(a), a.lambda_reg, theta0, p,
                                  rng);
      write_or_print(outcome_to_json(out).dump(2), a.out);
    } else if (c_func->parsed()) {
      const Dataset data = make_data(a);
      RngStream rng(a.seed);
      Eigen::VectorXd u = Eigen::VectorXd::Zero(data.d());
      u[coordinate % data.d()] = 1.0;
      const ReleaseOutcome out = release_functional(
          data, make_loss(a), u, a.lambda_reg,
          Eigen::VectorXd::Zero(data.d()), p, make_pnorm(a), rng);
      write_or_print(outcome_to_json(out).dump(2), a.out);
    } else if (c_base->parsed()) {
      const Dataset data = make_data(a);
      RngStream rng(a.seed);
      ReleaseOutcome out;
      if (baseline == "objective") {
        out = objective_perturbation(data, make_loss(a),
                                     Eigen::VectorXd::Zero(data.d()), p, rng);
      } else if (baseline == "naive") {
        out = naive_output_perturbation(data, make_loss(a), p, rng);
      } else if (baseline == "nonprivate") {
        out = nonprivate_idealized(data, make_loss(a), std::nullopt,
                                   a.lambda_reg, p, make_pnorm(a), rng);
      } else if (baseline == "dpsgd") {
        out = dpsgd(data, make_loss(a), p, {}, rng);
      } else {
        throw CLI::ValidationError(
            "--method must be objective, naive, nonprivate, or dpsgd");
      }
      write_or_print(outcome_to_json(out).dump(2), a.out);
    } else if (c_exp->parsed()) {
      ExperimentConfig cfg = ExperimentConfig::from_json_file(config_path);
      if (c_exp->count("--seed") > 0) cfg.master_seed = a.seed;
      if (!a.out.empty()) cfg.out_path = a.out;
      if (c_exp->count("--eps") > 0) cfg.eps_grid = {a.eps};
      if (c_exp->count("--delta") > 0) cfg.delta = a.delta;
      if (c_exp->count("--loss") > 0) cfg.loss_kind = a.loss;
      if (c_exp->count("--p") > 0) {
        cfg.pnorm = a.pnorm == "inf" ? std::numeric_limits<double>::infinity()
                                     : std::stod(a.pnorm);
      }
      const std::vector<ResultRow> rows = run_experiment(cfg);
      emit_report(rows, cfg.out_path);
      std::cout << "wrote " << rows.size() << " rows to " << cfg.out_path
                << " (+ .agg.csv)\n";
    } else if (c_rep->parsed()) {
      // Re-aggregate an existing results file.
      std::ifstream in(report_in);
      if (!in) throw std::runtime_error("cannot open '" + report_in + "'");
      std::vector<ResultRow> rows;
      std::string line;
      std::getline(in, line);  // header
      while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string f;
        ResultRow r;
        std::getline(ss, r.mechanism, ',');
        std::getline(ss, f, ',');
        r.n = std::stoi(f);
        std::getline(ss, f, ',');
        r.d = std::stoi(f);
        std::getline(ss, f, ',');
        r.eps = std::stod(f);
        std::getline(ss, f, ',');
        r.seed = std::stoull(f);
        std::getline(ss, f, ',');
        if (!f.empty()) r.error = std::stod(f);
        std::getline(ss, f, ',');
        r.released_bot = f == "1";
        rows.push_back(std::move(r));
      }
      emit_report(rows, a.out);
      std::cout << "aggregated " << rows.size() << " rows into " << a.out
                << " (+ .agg.csv)\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
