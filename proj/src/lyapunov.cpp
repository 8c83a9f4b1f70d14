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
#include "dfo/lyapunov.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <Eigen/Eigenvalues>
#include <sstream>

namespace dfo {

LyapunovCertificate solve_discrete_lyapunov(const LtiSystem& sys,
                                            const Eigen::MatrixXd& Q) {
    const int n = sys.state_dim();
    if (Q.rows() != n || Q.cols() != n)
        throw DimensionError("Q is " + std::to_string(Q.rows()) + "x" +
                             std::to_string(Q.cols()) + ", expected " +
                             std::to_string(n) + "x" + std::to_string(n));
    if ((Q - Q.transpose()).norm() > 1e-12 * std::max(1.0, Q.norm()))
        throw NumericalError("Q is not symmetric");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> q_eigs(Q);
    const double lambda_min_Q = q_eigs.eigenvalues().minCoeff();
    if (lambda_min_Q <= 0.0)
        throw NumericalError("Q is not positive definite (lambda_min = " +
                             std::to_string(lambda_min_Q) + ")");

    // Vectorized solve: (I - A' (x) A') vec(P) = vec(Q).
    const Eigen::MatrixXd At = sys.A().transpose();
    Eigen::MatrixXd coeff = Eigen::MatrixXd::Identity(n * n, n * n) -
                            Eigen::kroneckerProduct(At, At);
    Eigen::VectorXd q_vec = Eigen::Map<const Eigen::VectorXd>(Q.data(), n * n);
    Eigen::VectorXd p_vec = coeff.partialPivLu().solve(q_vec);

    LyapunovCertificate cert;
    cert.Q = Q;
    cert.P = Eigen::Map<Eigen::MatrixXd>(p_vec.data(), n, n);
    cert.P = 0.5 * (cert.P + cert.P.transpose());  // symmetrize round-off

    cert.residual =
        (At * cert.P * sys.A() - cert.P + Q).norm();
    if (cert.residual > 1e-9 * Q.norm()) {
        std::ostringstream os;
        os << "Lyapunov residual " << cert.residual
           << " exceeds tolerance 1e-9 * ||Q||";
        throw NumericalError(os.str());
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> p_eigs(cert.P);
    cert.lambda_min_P = p_eigs.eigenvalues().minCoeff();
    cert.lambda_max_P = p_eigs.eigenvalues().maxCoeff();
    cert.lambda_min_Q = lambda_min_Q;
    if (cert.lambda_min_P <= 0.0)
        throw NumericalError("Lyapunov solution P is not positive definite");
    return cert;
}

}  // namespace dfo
