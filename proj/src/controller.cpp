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
#include "dfo/controller.hpp"

#include <sstream>

#include "dfo/linalg.hpp"

namespace dfo {

namespace {

void check_step_dims(const Eigen::VectorXd& u, const Eigen::VectorXd& y,
                     const ControllerConfig& cfg, const CostModel& cost) {
    if (cfg.eta < 0.0) throw ConfigError("controller gain eta must be >= 0");
    if (cfg.G_hat.rows() != y.size() || cfg.G_hat.cols() != u.size()) {
        std::ostringstream os;
        os << "G_hat is " << cfg.G_hat.rows() << "x" << cfg.G_hat.cols()
           << ", expected " << y.size() << "x" << u.size();
        throw DimensionError(os.str());
    }
    if (cost.u_dim != u.size())
        throw DimensionError("cost input dimension " +
                             std::to_string(cost.u_dim) + " != input size " +
                             std::to_string(u.size()));
    if (cost.y_dim != y.size())
        throw DimensionError("cost output dimension " +
                             std::to_string(cost.y_dim) + " != output size " +
                             std::to_string(y.size()));
}

}  // namespace

Eigen::VectorXd controller_step(const Eigen::VectorXd& u,
                                const Eigen::VectorXd& y,
                                const ControllerConfig& cfg,
                                const CostModel& cost, int k) {
    check_step_dims(u, y, cfg, cost);
    return u - cfg.eta * (cost.grad_u(u, y, k) +
                          cfg.G_hat.transpose() * cost.grad_y(u, y, k));
}

Eigen::VectorXd projected_step(const Eigen::VectorXd& u,
                               const Eigen::VectorXd& y,
                               const ControllerConfig& cfg,
                               const CostModel& cost, int k) {
    Eigen::VectorXd raw = controller_step(u, y, cfg, cost, k);
    if (!cfg.constraint) return raw;
    return cfg.constraint->project(raw);
}

ClosedLoopResult closed_loop_run(const LtiSystem& sys, const Signal& w,
                                 const ControllerConfig& cfg,
                                 const CostModel& cost,
                                 const Eigen::VectorXd& x0,
                                 const Eigen::VectorXd& u0) {
    const int H = static_cast<int>(w.cols());
    if (H < 1) throw DimensionError("disturbance signal is empty");
    if (w.rows() != sys.disturbance_dim())
        throw DimensionError("disturbance signal has " +
                             std::to_string(w.rows()) + " rows, expected " +
                             std::to_string(sys.disturbance_dim()));
    if (x0.size() != sys.state_dim())
        throw DimensionError("x0 size mismatch");
    if (u0.size() != sys.input_dim())
        throw DimensionError("u0 size mismatch");

    ClosedLoopResult out;
    out.trajectory.u.resize(sys.input_dim(), H);
    out.trajectory.w = w;
    out.trajectory.x.resize(sys.state_dim(), H + 1);
    out.trajectory.y.resize(sys.output_dim(), H);
    out.trajectory.x.col(0) = x0;

    Eigen::VectorXd u = u0;
    for (int k = 0; k < H; ++k) {
        out.trajectory.u.col(k) = u;
        const Eigen::VectorXd y =
            sys.C() * out.trajectory.x.col(k) + sys.D() * w.col(k);
        out.trajectory.y.col(k) = y;
        out.trajectory.x.col(k + 1) = sys.A() * out.trajectory.x.col(k) +
                                      sys.B() * u + sys.E() * w.col(k);
        u = projected_step(u, y, cfg, cost, k);
    }
    out.final_input = u;
    return out;
}

ClosedLoopResult closed_loop_run(const LtiSystem& sys,
                                 const DisturbanceProcess& w,
                                 const ControllerConfig& cfg,
                                 const CostModel& cost,
                                 const Eigen::VectorXd& x0,
                                 const Eigen::VectorXd& u0) {
    if (cfg.horizon < 1)
        throw ConfigError("controller config horizon must be >= 1");
    return closed_loop_run(sys, w.realize(cfg.horizon), cfg, cost, x0, u0);
}

EtaFeasibility gain_feasibility(const CostModel& cost,
                                const Eigen::MatrixXd& G_hat,
                                double mismatch_norm, double C_norm,
                                const LyapunovCertificate& cert,
                                double kappa) {
    if (!(kappa > 0.0 && kappa < 1.0))
        throw ConfigError("kappa must lie in (0, 1)");
    if (cost.mu <= 0.0) throw ConfigError("cost must be strongly convex");
    if (mismatch_norm < 0.0)
        throw ConfigError("mismatch norm must be >= 0");

    EtaFeasibility out;
    out.ell_grad_hat =
        cost.ell_grad_u + spectral_norm(G_hat) * cost.ell_grad_y;
    out.input_rate_cap = 1.0 / cost.mu;

    // Input-error contraction: requires the mismatch below mu / ell_grad_hat
    // (strict) and eta in (max((2d - mu)/d^2, 0), 1/mu].
    if (out.ell_grad_hat > 0.0 &&
        mismatch_norm >= cost.mu / out.ell_grad_hat) {
        std::ostringstream os;
        os << "transfer mismatch " << mismatch_norm
           << " >= mu / ell_grad_hat = " << cost.mu / out.ell_grad_hat
           << "; the gradient controller cannot contract";
        out.violated = os.str();
        return out;
    }
    double lower = 0.0;
    if (mismatch_norm > 0.0)
        lower = std::max(
            (2.0 * mismatch_norm - cost.mu) / (mismatch_norm * mismatch_norm),
            0.0);

    // State-error contraction: the open-loop Lyapunov rate must leave room,
    // and eta must stay strictly below the remaining margin.
    const double ratio =
        (cert.lambda_max_P / cert.lambda_min_P) *
        (1.0 - (1.0 - kappa) * cert.lambda_min_Q / cert.lambda_max_P);
    if (ratio >= 1.0) {
        std::ostringstream os;
        os << "open-loop state contraction unavailable: Lyapunov ratio term "
           << ratio << " >= 1";
        out.violated = os.str();
        return out;
    }
    const double margin = 1.0 - std::sqrt(ratio);
    out.state_rate_cap =
        (out.ell_grad_hat * C_norm > 0.0)
            ? margin / (out.ell_grad_hat * C_norm)
            : std::numeric_limits<double>::infinity();

    if (out.state_rate_cap <= lower) {
        std::ostringstream os;
        os << "state contraction cap " << out.state_rate_cap
           << " does not exceed the input contraction lower bound " << lower;
        out.violated = os.str();
        return out;
    }

    out.lower = lower;
    if (out.state_rate_cap > out.input_rate_cap) {
        out.upper = out.input_rate_cap;
        out.upper_inclusive = true;
    } else {
        out.upper = out.state_rate_cap;
        out.upper_inclusive = false;
    }
    if (!(out.upper > out.lower)) {
        out.violated = "empty gain interval";
        return out;
    }
    out.feasible = true;
    return out;
}

}  // namespace dfo
