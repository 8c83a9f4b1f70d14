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
#include "dfo/random_system.hpp"

#include <Eigen/Eigenvalues>
#include <random>

namespace dfo {

namespace {

Eigen::MatrixXd gaussian_matrix(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd M(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) M(i, j) = gauss(rng);
    return M;
}

bool full_indices_exist(const LtiSystem& sys) {
    try {
        (void)structural_indices(sys);
        return true;
    } catch (const SystemPropertyError&) {
        return false;
    }
}

}  // namespace

LtiSystem random_system(const RandomSystemOptions& opt, uint64_t seed) {
    if (opt.n < 1 || opt.m < 1 || opt.p < 1 || opt.r < 1)
        throw ConfigError("system dimensions must be positive");
    if (!(opt.rho_min > 0.0 && opt.rho_max < 1.0 && opt.rho_min <= opt.rho_max))
        throw ConfigError("spectral radius range must satisfy 0 < min <= max < 1");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> rho_dist(opt.rho_min, opt.rho_max);

    for (int attempt = 0; attempt < 100; ++attempt) {
        Eigen::MatrixXd A = gaussian_matrix(opt.n, opt.n, rng);
        if (opt.orthogonal_A && opt.n > 1) {
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
            A = qr.householderQ();
        }
        const double rho_now = Eigen::EigenSolver<Eigen::MatrixXd>(A, false)
                                   .eigenvalues()
                                   .cwiseAbs()
                                   .maxCoeff();
        if (rho_now <= 0.0) continue;
        A *= rho_dist(rng) / rho_now;

        LtiSystem sys(A, gaussian_matrix(opt.n, opt.m, rng),
                      gaussian_matrix(opt.p, opt.n, rng),
                      gaussian_matrix(opt.p, opt.r, rng),
                      gaussian_matrix(opt.n, opt.r, rng));
        // Gaussian draws are controllable and observable almost surely;
        // resample on the degenerate exception.
        if (full_indices_exist(sys)) return sys;
    }
    throw NumericalError("failed to draw a controllable, observable system");
}

Signal random_uniform_signal(int dim, int length, double lo, double hi,
                             uint64_t seed) {
    if (dim < 1 || length < 1)
        throw DimensionError("signal dimensions must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    Signal z(dim, length);
    for (int k = 0; k < length; ++k)
        for (int i = 0; i < dim; ++i) z(i, k) = dist(rng);
    return z;
}

}  // namespace dfo
