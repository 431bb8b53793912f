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

#ifndef DPMESTIM_HARNESS_HPP_
#define DPMESTIM_HARNESS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dpmestim/baselines.hpp"
#include "dpmestim/dataset.hpp"
#include "dpmestim/loss.hpp"
#include "dpmestim/privacy.hpp"
#include "dpmestim/release.hpp"

namespace dpmestim {

// Synthetic robust-regression data: theta* uniform on the sphere of radius
// r_theta, x ~ U[-1,1]^d, y = <theta*, x> + sigma_noise * Laplace(1).
struct SyntheticData {
  Dataset data;
  Eigen::VectorXd theta_star;
};

SyntheticData gen_robust_data(int n, int d, double r_theta, double sigma_noise,
                              std::uint64_t seed);

// Synthetic logistic data: x ~ U[-1,1]^d, y = +1 with probability
// sigmoid(<theta*, x>), else -1.
SyntheticData gen_logistic_data(int n, int d, double r_theta,
                                std::uint64_t seed);

// CSV ingestion schema: named feature columns, a label column, an optional
// threshold rule mapping the label to {-1, +1}, and the covariate domain.
struct CsvSchema {
  std::vector<std::string> feature_columns;
  std::string label_column;
  std::optional<double> label_threshold;  // y = +1 iff label > threshold
  CovariateDomain domain = CovariateDomain::hypercube(1.0);
  ResponseKind response_kind = ResponseKind::kReal;
};

class CsvError : public std::runtime_error {
 public:
  CsvError(const std::string& what, long row) : std::runtime_error(what), row(row) {}
  long row;  // 1-based data row index; 0 for header problems
};

Dataset load_csv(const std::string& path, const CsvSchema& schema);

struct ExperimentConfig {
  std::vector<std::string> mechanisms;  // local-functional, local-theta,
                                        // nonprivate, naive, objective, dpsgd
  std::string loss_kind = "robust";     // robust | logistic
  std::vector<int> n_grid;
  int d = 5;
  std::vector<double> eps_grid;
  double delta = 1e-6;
  double lambda_reg = 0.0;
  double theta_star_norm = 1.0;
  double noise_sigma = 1.0;
  int seeds = 25;
  double pnorm = std::numeric_limits<double>::infinity();
  int functional_coordinate = 0;  // u = e_{coordinate}
  bool fallback_objective = false;  // replace bot with objective pert at eps/2
  std::uint64_t master_seed = 0;
  std::string out_path = "results.csv";

  void validate() const;
  static ExperimentConfig from_json_file(const std::string& path);
  static ExperimentConfig from_json_string(const std::string& text);
};

struct ResultRow {
  std::string mechanism;
  int n = 0;
  int d = 0;
  double eps = 0.0;
  std::uint64_t seed = 0;
  std::optional<double> error;       // vs the empirical target theta(P_n)
  bool released_bot = false;
  std::optional<double> lambda_min_hat;
  std::optional<double> lambda_max_hat;
  double wall_time_ms = 0.0;
  std::optional<double> error_to_star;  // secondary, vs theta*
  std::optional<std::string> failure;
};

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

// Writes the raw rows and an aggregate CSV (suffix ".agg.csv") holding per
// (mechanism, n, d, eps) cell the count, bot count, median error, standard
// error of the mean, and median +/- 2 SE.
void emit_report(const std::vector<ResultRow>& rows, const std::string& path);

std::string rows_to_csv(const std::vector<ResultRow>& rows,
                        bool include_wall_time = true);

}  // namespace dpmestim

#endif  // DPMESTIM_HARNESS_HPP_
