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
#include "dfo/cost_model.hpp"

#include <Eigen/Eigenvalues>

namespace dfo {

CostModel make_quadratic_cost(const QuadraticCost& quad,
                              const Eigen::VectorXd& y_box_lo,
                              const Eigen::VectorXd& y_box_hi) {
    const int m = static_cast<int>(quad.Q_u.rows());
    if (quad.Q_u.cols() != m) throw DimensionError("Q_u must be square");
    if ((quad.Q_u - quad.Q_u.transpose()).norm() >
        1e-12 * std::max(1.0, quad.Q_u.norm()))
        throw NumericalError("Q_u is not symmetric");
    if (quad.y_ref.empty())
        throw ConfigError("quadratic cost needs at least one reference point");
    const int p = static_cast<int>(quad.y_ref.front().size());
    for (const auto& ref : quad.y_ref)
        if (ref.size() != p)
            throw DimensionError("reference sequence entries differ in size");
    if (y_box_lo.size() != p || y_box_hi.size() != p)
        throw DimensionError("operating box must match the output dimension");
    if ((y_box_hi - y_box_lo).minCoeff() < 0.0)
        throw ConfigError("operating box upper bound below lower bound");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigs(quad.Q_u);
    const double mu = eigs.eigenvalues().minCoeff();
    if (mu <= 0.0)
        throw NumericalError("Q_u is not positive definite (lambda_min = " +
                             std::to_string(mu) + ")");

    // ell = sup over the box and over the reference sequence of |y - y_ref|;
    // the per-coordinate supremum is at whichever box corner is farther.
    double ell = 0.0;
    for (const auto& ref : quad.y_ref) {
        double acc = 0.0;
        for (int i = 0; i < p; ++i) {
            const double d = std::max(std::abs(y_box_lo(i) - ref(i)),
                                      std::abs(y_box_hi(i) - ref(i)));
            acc += d * d;
        }
        ell = std::max(ell, std::sqrt(acc));
    }

    CostModel cost;
    cost.u_dim = m;
    cost.y_dim = p;
    cost.mu = mu;
    cost.ell = ell;
    cost.ell_grad_u = eigs.eigenvalues().maxCoeff();
    cost.ell_grad_y = 1.0;
    cost.y_box_lo = y_box_lo;
    cost.y_box_hi = y_box_hi;

    cost.value = [quad](const Eigen::VectorXd& u, const Eigen::VectorXd& y,
                        int k) {
        const Eigen::VectorXd e = y - quad.ref(k);
        return 0.5 * u.dot(quad.Q_u * u) + 0.5 * e.squaredNorm();
    };
    cost.grad_u = [quad](const Eigen::VectorXd& u, const Eigen::VectorXd&,
                         int) -> Eigen::VectorXd { return quad.Q_u * u; };
    cost.grad_y = [quad](const Eigen::VectorXd&, const Eigen::VectorXd& y,
                         int k) -> Eigen::VectorXd { return y - quad.ref(k); };
    return cost;
}

CostModel make_quadratic_cost(const Eigen::MatrixXd& Q_u,
                              const Eigen::VectorXd& y_ref,
                              double y_box_radius) {
    QuadraticCost quad;
    quad.Q_u = Q_u;
    quad.y_ref = {y_ref};
    const Eigen::VectorXd radius =
        Eigen::VectorXd::Constant(y_ref.size(), y_box_radius);
    return make_quadratic_cost(quad, -radius, radius);
}

}  // namespace dfo
