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

#include "dfo/errors.hpp"

namespace dfo {

/// A multivariate signal: one column per time step, one row per coordinate.
using Signal = Eigen::MatrixXd;

/// Condition estimates above this trigger an ill-conditioning warning on
/// (I - A) solves (warning, never an error: the system is still Schur).
inline constexpr double kConditionWarningThreshold = 1e12;

/**
 * Discrete-time stochastic linear plant
 *
 *   x_{k+1} = A x_k + B u_k + E w_k
 *   y_k     = C x_k + D w_k
 *
 * with state dimension n, input dimension m, output dimension p and
 * disturbance dimension r. Construction validates dimensional consistency
 * and Schur stability of A. Instances are immutable.
 */
class LtiSystem {
public:
    LtiSystem(Eigen::MatrixXd A, Eigen::MatrixXd B, Eigen::MatrixXd C,
              Eigen::MatrixXd D, Eigen::MatrixXd E);

    const Eigen::MatrixXd& A() const { return A_; }
    const Eigen::MatrixXd& B() const { return B_; }
    const Eigen::MatrixXd& C() const { return C_; }
    const Eigen::MatrixXd& D() const { return D_; }
    const Eigen::MatrixXd& E() const { return E_; }

    int state_dim() const { return static_cast<int>(A_.rows()); }
    int input_dim() const { return static_cast<int>(B_.cols()); }
    int output_dim() const { return static_cast<int>(C_.rows()); }
    int disturbance_dim() const { return static_cast<int>(E_.cols()); }

    /// Spectral radius of A, cached at construction.
    double spectral_radius() const { return spectral_radius_; }

private:
    Eigen::MatrixXd A_, B_, C_, D_, E_;
    double spectral_radius_;
};

/// An input/disturbance/state/output record, time-aligned and indexed from 0.
/// x carries one extra sample: |x| = |u| + 1, |y| = |w| = |u|.
struct Trajectory {
    Signal u;  ///< m x H
    Signal w;  ///< r x H
    Signal x;  ///< n x (H+1)
    Signal y;  ///< p x H

    int horizon() const { return static_cast<int>(u.cols()); }

    /// Largest one-step replay residual of the plant equations over the
    /// whole record (max-norm). Zero up to round-off for genuine records.
    double replay_residual(const LtiSystem& sys) const;
};

struct EquilibriumResult {
    Eigen::VectorXd x_bar;
    Eigen::VectorXd y_bar;
    double condition_estimate = 0.0;
    bool ill_conditioned = false;
};

struct TransferFunctions {
    Eigen::MatrixXd G;  ///< steady-state input gain  C (I-A)^{-1} B
    Eigen::MatrixXd H;  ///< steady-state disturbance gain  D + C (I-A)^{-1} E
    double condition_estimate = 0.0;
    bool ill_conditioned = false;
};

struct StructuralIndices {
    int observability;    ///< smallest k with rank(O_k) = n
    int controllability;  ///< smallest k with rank(C_k) = n
};

/// Simulate the plant for `horizon` steps from x0 under the given inputs
/// and disturbances (one column per step; extra columns are ignored).
Trajectory simulate(const LtiSystem& sys, const Eigen::VectorXd& x0,
                    const Signal& u, const Signal& w, int horizon);

/// Unique exponentially stable equilibrium under constant (u, w).
EquilibriumResult equilibrium_state(const LtiSystem& sys,
                                    const Eigen::VectorXd& u_bar,
                                    const Eigen::VectorXd& w_bar);

/// Closed-form steady-state gains of the plant.
TransferFunctions steady_state_transfer(const LtiSystem& sys);

/// Observability and controllability indices. Throws SystemPropertyError if
/// either matrix never reaches full rank (the plant assumptions require both).
StructuralIndices structural_indices(const LtiSystem& sys,
                                     double rank_tol = 1e-9);

}  // namespace dfo
