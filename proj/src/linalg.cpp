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
#include "dfo/linalg.hpp"

namespace dfo {

double spectral_norm(const Eigen::MatrixXd& M) {
    if (M.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues()(0);
}

double min_singular_value(const Eigen::MatrixXd& M) {
    if (M.size() == 0) return 0.0;
    const auto sv = Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues();
    return sv(sv.size() - 1);
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& M, double tol) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(M);
    cod.setThreshold(tol);
    return cod.pseudoInverse();
}

}  // namespace dfo
