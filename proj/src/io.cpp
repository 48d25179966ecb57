// Copyright 2026 The qpt-fgd Authors
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


#include "qpt/io.hpp"

#include <cmath>
#include <fstream>

namespace qpt {

namespace {

nlohmann::json rows_of(const Eigen::MatrixXd &m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd parse_rows(const nlohmann::json &rows, const char *field) {
    if (!rows.is_array() || rows.empty()) {
        throw DimensionError(std::string("matrix JSON: '") + field + "' must be a non-empty array of rows");
    }
    const auto n_rows = static_cast<Eigen::Index>(rows.size());
    const auto n_cols = static_cast<Eigen::Index>(rows[0].size());
    Eigen::MatrixXd out(n_rows, n_cols);
    for (Eigen::Index i = 0; i < n_rows; ++i) {
        const auto &row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n_cols) {
            throw DimensionError(std::string("matrix JSON: ragged rows in '") + field + "'");
        }
        for (Eigen::Index j = 0; j < n_cols; ++j) {
            out(i, j) = row[static_cast<std::size_t>(j)].get<double>();
        }
    }
    return out;
}

}  // namespace

nlohmann::json matrix_to_json(const CMatrix &m) {
    return nlohmann::json{{"d", m.rows()}, {"re", rows_of(m.real())}, {"im", rows_of(m.imag())}};
}

CMatrix matrix_from_json(const nlohmann::json &j) {
    if (!j.is_object() || !j.contains("re") || !j.contains("im")) {
        throw DimensionError("matrix JSON: expected an object with 're' and 'im'");
    }
    const Eigen::MatrixXd re = parse_rows(j.at("re"), "re");
    const Eigen::MatrixXd im = parse_rows(j.at("im"), "im");
    if (re.rows() != im.rows() || re.cols() != im.cols()) {
        throw DimensionError("matrix JSON: 're' and 'im' shapes differ");
    }
    if (j.contains("d") && j.at("d").get<Eigen::Index>() != re.rows()) {
        throw DimensionError("matrix JSON: 'd' does not match the row count");
    }
    CMatrix out(re.rows(), re.cols());
    out.real() = re;
    out.imag() = im;
    return out;
}

nlohmann::json process_to_json(const ProcessMatrix &p) {
    nlohmann::json j = matrix_to_json(p.chi);
    j["d"] = p.dim;
    return j;
}

ProcessMatrix process_from_json(const nlohmann::json &j) {
    if (!j.is_object() || !j.contains("d")) {
        throw DimensionError("process JSON: missing 'd'");
    }
    const auto d = j.at("d").get<std::size_t>();
    nlohmann::json body = j;
    body.erase("d");
    return ProcessMatrix(d, matrix_from_json(body));
}

void write_json_file(const std::filesystem::path &path, const nlohmann::json &j) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << j.dump(2) << '\n';
}

nlohmann::json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return nlohmann::json::parse(in);
}

}  // namespace qpt
