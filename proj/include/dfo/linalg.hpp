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

#include <Eigen/Dense>

namespace dfo {

/// Largest singular value.
double spectral_norm(const Eigen::MatrixXd& M);

/// Smallest singular value (of the thin SVD).
double min_singular_value(const Eigen::MatrixXd& M);

/// Moore-Penrose pseudo-inverse via a rank-revealing decomposition.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& M, double tol = 1e-12);

}  // namespace dfo
