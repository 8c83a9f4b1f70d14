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

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dfo/hankel.hpp"
#include "dfo/lti_system.hpp"

namespace dfo {

enum class EstimationMethod {
    ExactKnownNoise,     ///< requires the disturbance record alongside (u, y)
    ConstantNoise,       ///< unknown but constant disturbance
    MinNormUnknownNoise  ///< unknown, possibly time-varying disturbance
};

std::string method_name(EstimationMethod m);
EstimationMethod method_from_name(const std::string& name);

struct EstimationOptions {
    int nu = 1;           ///< observability index, sets the Hankel depth
    int state_dim = 0;    ///< assumed n; excitation is checked at order n + nu
    int block_index = 1;  ///< which block row extracts the gain (1-based)
    bool check_pe = true;
    double tau_solve = 1e-8;  ///< relative residual tolerance of the solve
    double tau_rank = kRankTolerance;
};

/// One named block of the stacked linear constraint system on the
/// combination matrix M.
struct ConstraintBlock {
    std::string name;
    long row_begin = 0;
    long rows = 0;
};

/// Stacked constraint system  lhs * M = rhs  whose solutions reproduce the
/// steady-state experiment. Row blocks appear in the declared order.
struct RegressorSystem {
    Eigen::MatrixXd lhs;
    Eigen::MatrixXd rhs;
    std::vector<ConstraintBlock> blocks;
    int nu = 0;
    int q = 0;           ///< number of columns of each Hankel block
    int input_dim = 0;   ///< m; rhs has nu * m columns
};

struct RegressorSolution {
    Eigen::MatrixXd M;  ///< q x (m * nu), minimum-Frobenius-norm solution
    std::vector<double> block_residuals;
    double max_block_residual = 0.0;
};

struct TransferEstimate {
    Eigen::MatrixXd G_hat;
    EstimationMethod method = EstimationMethod::MinNormUnknownNoise;
    int block_index = 1;
    double solve_residual = 0.0;
    /// Maximum deviation of the extracted gain across block rows; the exact
    /// characterization makes this zero up to the solve tolerance.
    double cross_block_deviation = 0.0;
    /// Norms of the disturbance blocks applied to M, populated when the
    /// ground-truth noise is supplied for audit. NaN otherwise.
    double audit_w_residual = std::numeric_limits<double>::quiet_NaN();
    double audit_w_diff_residual = std::numeric_limits<double>::quiet_NaN();
    Eigen::MatrixXd M;  ///< the combination matrix behind the estimate
};

/// Constraint system of the known-noise characterization. u provides T
/// samples; w and y must provide T+1 (the difference signals need one extra).
RegressorSystem build_exact_constraints(const Signal& u, const Signal& w,
                                        const Signal& y, int nu);

/// Constraint system of the unknown-noise relaxation (output-difference and
/// input blocks only).
RegressorSystem build_min_norm_constraints(const Signal& u, const Signal& y,
                                           int nu);

/// Minimum-norm solve of a constraint system via a rank-revealing orthogonal
/// factorization. Throws InfeasibleError naming the first inconsistent block.
RegressorSolution solve_regressor(const RegressorSystem& sys,
                                  double tau_solve = 1e-8);

/// Known-noise method: the gain is recovered exactly from one trajectory.
TransferEstimate estimate_transfer_exact(const Signal& u, const Signal& w,
                                         const Signal& y,
                                         const EstimationOptions& opt);

/// Unknown constant noise: differences the data once, then applies the exact
/// machinery to the differenced system. u needs T+1 samples, y needs T+2.
TransferEstimate estimate_transfer_constant_noise(const Signal& u,
                                                  const Signal& y,
                                                  const EstimationOptions& opt);

/// Unknown, possibly time-varying noise: minimum-norm solution of the relaxed
/// constraints. When audit_w is provided (experiment mode), the disturbance
/// block residuals are reported on the estimate.
TransferEstimate estimate_transfer_min_norm(const Signal& u, const Signal& y,
                                            const EstimationOptions& opt,
                                            const Signal* audit_w = nullptr);

/// Three-term decomposition of the estimation error (audit mode: requires the
/// true plant and the recorded state/disturbance signals).
struct ErrorDecomposition {
    Eigen::MatrixXd state_term;       ///< C A ([X]_i M - (I-A)^{-1} B)
    Eigen::MatrixXd noise_term;       ///< (C E + D) [W]_i M
    Eigen::MatrixXd noise_diff_term;  ///< D [W_diff]_i M
    Eigen::MatrixXd g_error;          ///< G_hat - G, closed form
    double identity_residual = 0.0;   ///< || sum of terms - g_error ||_F
};

ErrorDecomposition error_decomposition(const LtiSystem& sys,
                                       const Eigen::MatrixXd& M_hat,
                                       const Signal& u, const Signal& w,
                                       const Signal& y, const Signal& x,
                                       const EstimationOptions& opt);

/// Error characterization when C has full column rank (observability index
/// one): exact expression plus the norm bound that dominates the true error.
struct FullRankErrorBound {
    Eigen::MatrixXd exact_error;
    double bound = 0.0;
    double actual_error = 0.0;    ///< spectral norm of G_hat - G
    double check_residual = 0.0;  ///< || exact_error - (G_hat - G) ||_F
};

FullRankErrorBound error_bound_full_rank_C(const LtiSystem& sys,
                                           const Eigen::MatrixXd& M_hat,
                                           const Signal& u, const Signal& w,
                                           const Signal& y,
                                           const EstimationOptions& opt);

/// Default training length for excitation with comfortable slack: the
/// stacked (u, w) signal of dimension m + r excited at order n + nu needs
/// T >= (m + r + 1)(n + nu) - 1.
int default_training_length(int m, int r, int n, int nu);

}  // namespace dfo
