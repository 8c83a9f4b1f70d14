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

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "dfo/errors.hpp"

namespace dfo {

/**
 * Cost phi(u, y) with gradient oracles and its regularity constants:
 * mu-strong convexity in u, and the Lipschitz constants of y -> phi and of
 * the gradient maps. The optional time index supports time-varying costs;
 * the constants must then hold uniformly in time.
 *
 * `ell` is the Lipschitz constant of y -> phi over a declared compact
 * operating box. Quadratics are not globally Lipschitz in y, so the box is
 * part of the model and is recorded next to the constant.
 */
struct CostModel {
    std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&, int)>
        value;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&,
                                  const Eigen::VectorXd&, int)>
        grad_u;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&,
                                  const Eigen::VectorXd&, int)>
        grad_y;

    double mu = 0.0;          ///< strong convexity of u -> phi
    double ell = 0.0;         ///< Lipschitz of y -> phi over the operating box
    double ell_grad_u = 0.0;  ///< Lipschitz of u -> grad phi
    double ell_grad_y = 0.0;  ///< Lipschitz of y -> grad phi

    int u_dim = 0;
    int y_dim = 0;

    /// Operating box on y used to compute `ell`.
    Eigen::VectorXd y_box_lo;
    Eigen::VectorXd y_box_hi;
};

/**
 * Quadratic tracking cost  phi_k(u, y) = 1/2 u' Q_u u + 1/2 |y - y_ref_k|^2
 * with Q_u symmetric positive definite. Constants: mu = lambda_min(Q_u),
 * ell_grad_u = lambda_max(Q_u), ell_grad_y = 1; ell is the supremum of
 * |y - y_ref| over the operating box, taken uniformly over the reference
 * sequence.
 */
struct QuadraticCost {
    Eigen::MatrixXd Q_u;
    std::vector<Eigen::VectorXd> y_ref;  ///< one entry, or one per step

    const Eigen::VectorXd& ref(int k) const {
        if (y_ref.empty()) throw ConfigError("quadratic cost has no reference");
        return y_ref[static_cast<size_t>(k) < y_ref.size() ? k
                                                           : y_ref.size() - 1];
    }
};

CostModel make_quadratic_cost(const QuadraticCost& quad,
                              const Eigen::VectorXd& y_box_lo,
                              const Eigen::VectorXd& y_box_hi);

/// Convenience overload with a symmetric operating box [-radius, radius]^p.
CostModel make_quadratic_cost(const Eigen::MatrixXd& Q_u,
                              const Eigen::VectorXd& y_ref,
                              double y_box_radius = 10.0);

}  // namespace dfo
