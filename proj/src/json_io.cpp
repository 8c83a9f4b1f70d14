/*
 Copyright 2026 The dfo Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include "dfo/json_io.hpp"

#include <fstream>

namespace dfo {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& M) {
    nlohmann::json rows = nlohmann::json::array();
    for (long i = 0; i < M.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (long j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j,
                                 const std::string& field) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw ConfigError("field '" + field +
                          "' must be a non-empty nested array");
    const long rows = static_cast<long>(j.size());
    const long cols = static_cast<long>(j[0].size());
    Eigen::MatrixXd M(rows, cols);
    for (long i = 0; i < rows; ++i) {
        if (!j[i].is_array() || static_cast<long>(j[i].size()) != cols)
            throw ConfigError("field '" + field + "' row " +
                              std::to_string(i) + " has inconsistent length");
        for (long k = 0; k < cols; ++k) {
            if (!j[i][k].is_number())
                throw ConfigError("field '" + field + "' entry (" +
                                  std::to_string(i) + "," + std::to_string(k) +
                                  ") is not a number");
            M(i, k) = j[i][k].get<double>();
        }
    }
    return M;
}

nlohmann::json lti_to_json(const LtiSystem& sys) {
    return {{"A", matrix_to_json(sys.A())}, {"B", matrix_to_json(sys.B())},
            {"C", matrix_to_json(sys.C())}, {"D", matrix_to_json(sys.D())},
            {"E", matrix_to_json(sys.E())}};
}

LtiSystem lti_from_json(const nlohmann::json& j) {
    for (const char* field : {"A", "B", "C", "D", "E"})
        if (!j.contains(field))
            throw ConfigError(std::string("system document missing field '") +
                              field + "'");
    return LtiSystem(matrix_from_json(j["A"], "A"), matrix_from_json(j["B"], "B"),
                     matrix_from_json(j["C"], "C"), matrix_from_json(j["D"], "D"),
                     matrix_from_json(j["E"], "E"));
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open JSON file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return j;
}

void save_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write JSON file: " + path);
    out << j.dump(2) << "\n";
}

LtiSystem load_lti_json(const std::string& path) {
    return lti_from_json(load_json_file(path));
}

void save_lti_json(const std::string& path, const LtiSystem& sys) {
    save_json_file(path, lti_to_json(sys));
}

}  // namespace dfo
