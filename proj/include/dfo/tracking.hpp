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

#include <vector>

#include "dfo/controller.hpp"
#include "dfo/cost_model.hpp"
#include "dfo/lti_system.hpp"
#include "dfo/lyapunov.hpp"

namespace dfo {

/// A decision that is optimal for the very output distribution it induces,
/// together with the matching plant equilibrium.
struct StableOptimizerRecord {
    Eigen::VectorXd u_so;
    Eigen::VectorXd x_so;  ///< empty when no plant audit info was provided
    int k = 0;
    double residual = 0.0;  ///< stationarity residual at the fixed point
};

/// Closed-form stable optimizer for a quadratic cost: the linear fixed point
///   (Q_u + G_hat' G) u = G_hat' (y_ref_k - H w_mean).
/// Requires audit knowledge of the true gains (experiment/oracle context);
/// the plant pointer, when given, fills in the equilibrium state.
StableOptimizerRecord stable_optimizer_quadratic(const QuadraticCost& quad,
                                                 const Eigen::MatrixXd& G_hat,
                                                 const Eigen::MatrixXd& G,
                                                 const Eigen::MatrixXd& H,
                                                 const Eigen::VectorXd& w_mean,
                                                 int k = 0,
                                                 const LtiSystem* plant = nullptr);

/// Minimizer of the ideal problem with the true gain:
///   argmin 1/2 u' Q_u u + 1/2 |G u + H w_mean - y_ref_k|^2.
Eigen::VectorXd true_optimizer_quadratic(const QuadraticCost& quad,
                                         const Eigen::MatrixXd& G,
                                         const Eigen::MatrixXd& H,
                                         const Eigen::VectorXd& w_mean,
                                         int k = 0);

/// Gap between the true and the stable optimizer:
///   |u* - u_so| <= 2 ell |G - G_hat| / (mu sigma_min(G_hat)^2).
/// Throws when G_hat is column-rank deficient (the bound is undefined).
double optimizer_gap_bound(double ell, double mu, const Eigen::MatrixXd& G,
                           const Eigen::MatrixXd& G_hat);

/// Upper bound |G - G_hat| |u - u'| on the 1-Wasserstein distance between
/// the output-noise distributions induced by two decisions.
double wasserstein_shift_bound(const Eigen::MatrixXd& G,
                               const Eigen::MatrixXd& G_hat,
                               const Eigen::VectorXd& u,
                               const Eigen::VectorXd& u_prime);

/// Constants of the per-step tracking recursion. beta1 governs the input
/// error, beta2 the state error; gamma1..gamma3 weight the gradient noise,
/// the optimizer drift and the worst-case equilibrium drift.
struct TrackingConstants {
    double beta1 = 0.0;
    double beta2 = 0.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double gamma3 = 0.0;
    double kappa = 0.0;
    double ell_grad_hat = 0.0;
    double mismatch = 0.0;    ///< |G - G_hat| (spectral)
    double state_rate = 0.0;  ///< beta2 minus the input-to-state coupling
    double coupling = 0.0;    ///< eta * ell_grad_hat * |C|
    double eta = 0.0;
};

/// Evaluates the constants from the controller configuration, cost
/// regularity, the audited plant (true gain, output map, A' P norm) and the
/// Lyapunov certificate. Requires eta <= 1/mu (otherwise the contraction
/// factor is complex).
TrackingConstants compute_tracking_constants(const ControllerConfig& cfg,
                                             const CostModel& cost,
                                             const LtiSystem& plant,
                                             const LyapunovCertificate& cert,
                                             double kappa);

/// Forward iteration of the tracking recursion, keeping the input/state
/// error pair split exactly as in the contraction analysis:
///   e_u+ = beta1 e_u + coupling e_x + gamma1 ge_k + gamma2 du_k
///   e_x+ = state_rate e_x + gamma3 sup_drift
/// and bound_k = e_u_k + e_x_k.
struct TrackingBoundSequence {
    Eigen::VectorXd bound;        ///< length H+1
    Eigen::VectorXd input_error;  ///< e_u
    Eigen::VectorXd state_error;  ///< e_x
    /// Per-step term contributions (length H), for bound breakdowns.
    Eigen::VectorXd term_input_contraction;
    Eigen::VectorXd term_state_contraction;
    Eigen::VectorXd term_gradient;
    Eigen::VectorXd term_input_drift;
    Eigen::VectorXd term_state_drift;
};

TrackingBoundSequence tracking_bound_sequence(
    const TrackingConstants& c, double e_u0, double e_x0,
    const Eigen::VectorXd& grad_error_bounds,
    const Eigen::VectorXd& input_drift, double state_drift_sup, int horizon);

/// Sample mean of |u_k - u_so_k| + |x_k - x_so_k| over a set of runs that
/// share horizon and scenario.
Eigen::VectorXd empirical_tracking_error(
    const std::vector<Trajectory>& runs,
    const std::vector<StableOptimizerRecord>& oracle);

/// Single-sample gradient error: the measured gradient expression minus its
/// conditional expectation (supplied by an oracle).
Eigen::VectorXd gradient_error_sample(const Eigen::VectorXd& u,
                                      const Eigen::VectorXd& y,
                                      const Eigen::MatrixXd& G_hat,
                                      const CostModel& cost, int k,
                                      const Eigen::VectorXd& expected_gradient);

/// Conditional expectation of the measured gradient expression at (u, x),
/// averaging the output over disturbance samples (exact for finite support
/// with matching weights; Monte Carlo otherwise). Uniform weights when the
/// weight vector is empty.
Eigen::VectorXd expected_closed_loop_gradient(
    const Eigen::VectorXd& u, const Eigen::VectorXd& x, const LtiSystem& sys,
    const Eigen::MatrixXd& G_hat, const CostModel& cost, int k,
    const Signal& w_samples, const Eigen::VectorXd& weights = {});

/// Repeated-retraining fixed point for general costs: solve the frozen
/// problem, refreeze the induced distribution, repeat. The disturbance
/// enters through finite support samples with optional weights.
struct FixedPointOptions {
    double tol = 1e-9;
    int max_outer = 10000;
    int max_inner = 100000;
};

StableOptimizerRecord stable_optimizer_fixed_point(
    const CostModel& cost, const Eigen::MatrixXd& G_hat,
    const Eigen::MatrixXd& G, const Eigen::MatrixXd& H,
    const Signal& w_support, const Eigen::VectorXd& weights = {}, int k = 0,
    const FixedPointOptions& opt = {}, const LtiSystem* plant = nullptr);

}  // namespace dfo
