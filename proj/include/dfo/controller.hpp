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

#include "dfo/convex_set.hpp"
#include "dfo/cost_model.hpp"
#include "dfo/disturbance.hpp"
#include "dfo/lti_system.hpp"
#include "dfo/lyapunov.hpp"

namespace dfo {

/// Online gradient controller configuration: gain, estimated steady-state
/// input gain, and the input constraint set.
struct ControllerConfig {
    double eta = 0.0;
    Eigen::MatrixXd G_hat;
    std::optional<ConvexSet> constraint;  ///< nullopt = unconstrained
    int horizon = 0;
};

/// One gradient step driven by the measured output:
///   u+ = u - eta * (grad_u phi(u, y) + G_hat' grad_y phi(u, y)).
Eigen::VectorXd controller_step(const Eigen::VectorXd& u,
                                const Eigen::VectorXd& y,
                                const ControllerConfig& cfg,
                                const CostModel& cost, int k = 0);

/// Gradient step followed by the orthogonal projection onto the constraint
/// set (identity when unconstrained).
Eigen::VectorXd projected_step(const Eigen::VectorXd& u,
                               const Eigen::VectorXd& y,
                               const ControllerConfig& cfg,
                               const CostModel& cost, int k = 0);

struct ClosedLoopResult {
    Trajectory trajectory;      ///< u holds the applied inputs u_0..u_{H-1}
    Eigen::VectorXd final_input;  ///< u_H, produced but not applied
};

/// Runs the plant in feedback with the (projected) gradient controller:
/// each step measures y_k, advances the plant, and updates the input.
ClosedLoopResult closed_loop_run(const LtiSystem& sys,
                                 const DisturbanceProcess& w,
                                 const ControllerConfig& cfg,
                                 const CostModel& cost,
                                 const Eigen::VectorXd& x0,
                                 const Eigen::VectorXd& u0);

/// Same with a prerecorded disturbance signal; the horizon is w.cols().
ClosedLoopResult closed_loop_run(const LtiSystem& sys, const Signal& w,
                                 const ControllerConfig& cfg,
                                 const CostModel& cost,
                                 const Eigen::VectorXd& x0,
                                 const Eigen::VectorXd& u0);

/// Feasible gain interval for contraction of both the input and the state
/// error recursions. Empty interval names the violated condition.
struct EtaFeasibility {
    bool feasible = false;
    double lower = 0.0;          ///< exclusive
    double upper = 0.0;
    bool upper_inclusive = false;
    double input_rate_cap = 0.0;  ///< 1/mu, from the input contraction
    double state_rate_cap = 0.0;  ///< strict cap from the state contraction
    double ell_grad_hat = 0.0;    ///< ell_grad_u + |G_hat| ell_grad_y
    std::string violated;         ///< empty when feasible

    bool accepts(double eta) const {
        return feasible && eta > lower &&
               (upper_inclusive ? eta <= upper : eta < upper);
    }
};

/// Evaluates the gain conditions given the transfer mismatch |G - G_hat|
/// (spectral norm), the output-map norm |C| and the Lyapunov certificate.
EtaFeasibility gain_feasibility(const CostModel& cost,
                                const Eigen::MatrixXd& G_hat,
                                double mismatch_norm, double C_norm,
                                const LyapunovCertificate& cert, double kappa);

}  // namespace dfo
