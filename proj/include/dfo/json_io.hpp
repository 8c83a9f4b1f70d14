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
#pragma once

#include <string>

#include <json.hpp>

#include "dfo/lti_system.hpp"

namespace dfo {

/// Row-major nested-array encoding of a matrix.
nlohmann::json matrix_to_json(const Eigen::MatrixXd& M);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j,
                                 const std::string& field);

/// Plant document: {"A": [[...]], "B": ..., "C": ..., "D": ..., "E": ...};
/// dimensions are inferred from the arrays.
nlohmann::json lti_to_json(const LtiSystem& sys);
LtiSystem lti_from_json(const nlohmann::json& j);

LtiSystem load_lti_json(const std::string& path);
void save_lti_json(const std::string& path, const LtiSystem& sys);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace dfo
