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

#include "dfo/lti_system.hpp"

namespace dfo {

/// Solution pair of the discrete Lyapunov equation A' P A - P = -Q with
/// cached eigenvalue extremes. P and Q are both symmetric positive definite.
struct LyapunovCertificate {
    Eigen::MatrixXd P;
    Eigen::MatrixXd Q;
    double lambda_min_P = 0.0;
    double lambda_max_P = 0.0;
    double lambda_min_Q = 0.0;
    double residual = 0.0;  ///< || A' P A - P + Q ||_F
};

/// Solves A' P A - P = -Q for the Schur-stable plant. Q must be symmetric
/// positive definite; the certificate residual is checked against
/// 1e-9 * ||Q||_F.
LyapunovCertificate solve_discrete_lyapunov(const LtiSystem& sys,
                                            const Eigen::MatrixXd& Q);

}  // namespace dfo
