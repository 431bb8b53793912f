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
#include <fstream>
#include <sstream>

#include "dpmestim/harness.hpp"

namespace dpmestim {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim surrounding whitespace
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back("");
  return fields;
}

double parse_number(const std::string& s, long row, const std::string& col) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    if (std::isnan(v)) throw std::invalid_argument("NaN");
    return v;
  } catch (const std::exception&) {
    throw CsvError("row " + std::to_string(row) + ": cannot parse '" + s +
                       "' in column '" + col + "'",
                   row);
  }
}

}  // namespace

Dataset load_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open '" + path + "'", 0);
  std::string line;
  if (!std::getline(in, line)) throw CsvError("empty file '" + path + "'", 0);
  const std::vector<std::string> header = split_csv_line(line);

  auto column_index = [&](const std::string& name) -> int {
    for (size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    throw CsvError("missing column '" + name + "'", 0);
  };

  std::vector<int> feature_idx;
  feature_idx.reserve(schema.feature_columns.size());
  for (const auto& c : schema.feature_columns) feature_idx.push_back(column_index(c));
  const int label_idx = column_index(schema.label_column);
  const int d = static_cast<int>(feature_idx.size());
  if (d == 0) throw CsvError("schema lists no feature columns", 0);

  std::vector<Eigen::VectorXd> rows;
  std::vector<double> labels;
  long row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++row;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw CsvError("row " + std::to_string(row) + ": expected " +
                         std::to_string(header.size()) + " fields, got " +
                         std::to_string(fields.size()),
                     row);
    }
    Eigen::VectorXd x(d);
    for (int j = 0; j < d; ++j) {
      x[j] = parse_number(fields[feature_idx[j]], row, schema.feature_columns[j]);
    }
    if (!schema.domain.contains(x)) {
      throw CsvError("row " + std::to_string(row) +
                         ": covariates outside the declared domain",
                     row);
    }
    double y = parse_number(fields[label_idx], row, schema.label_column);
    if (schema.label_threshold) {
      y = y > *schema.label_threshold ? 1.0 : -1.0;
    } else if (schema.response_kind == ResponseKind::kBinary &&
               y != 1.0 && y != -1.0) {
      throw CsvError("row " + std::to_string(row) +
                         ": binary label must be +1 or -1 (or use a threshold rule)",
                     row);
    }
    rows.push_back(std::move(x));
    labels.push_back(y);
  }
  if (rows.empty()) throw CsvError("no data rows in '" + path + "'", 0);

  Eigen::MatrixXd x(rows.size(), d);
  Eigen::VectorXd y(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    x.row(i) = rows[i].transpose();
    y[i] = labels[i];
  }
  const ResponseKind kind =
      schema.label_threshold ? ResponseKind::kBinary : schema.response_kind;
  return Dataset(std::move(x), std::move(y), schema.domain, kind);
}

}  // namespace dpmestim
