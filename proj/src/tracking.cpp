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
#include "dfo/tracking.hpp"

#include <sstream>

#include "dfo/linalg.hpp"

namespace dfo {

StableOptimizerRecord stable_optimizer_quadratic(const QuadraticCost& quad,
                                                 const Eigen::MatrixXd& G_hat,
                                                 const Eigen::MatrixXd& G,
                                                 const Eigen::MatrixXd& H,
                                                 const Eigen::VectorXd& w_mean,
                                                 int k, const LtiSystem* plant) {
    const int m = static_cast<int>(quad.Q_u.rows());
    if (G_hat.cols() != m || G.cols() != m)
        throw DimensionError("gain column count does not match Q_u");
    if (G_hat.rows() != G.rows())
        throw DimensionError("G and G_hat have different output dimensions");
    if (H.cols() != w_mean.size())
        throw DimensionError("H column count does not match w_mean");

    const Eigen::VectorXd& y_ref = quad.ref(k);
    const Eigen::MatrixXd system = quad.Q_u + G_hat.transpose() * G;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    const double rc = lu.rcond();
    if (!(rc > 1e-14)) {
        std::ostringstream os;
        os << "stable-optimizer system is numerically singular (rcond " << rc
           << "); the contraction conditions exclude this regime";
        throw NumericalError(os.str());
    }

    StableOptimizerRecord rec;
    rec.k = k;
    rec.u_so = lu.solve(G_hat.transpose() * (y_ref - H * w_mean));
    // Stationarity of the frozen problem at its own induced distribution.
    rec.residual = (quad.Q_u * rec.u_so +
                    G_hat.transpose() *
                        (G * rec.u_so + H * w_mean - y_ref))
                       .norm();
    if (plant != nullptr)
        rec.x_so = equilibrium_state(*plant, rec.u_so, w_mean).x_bar;
    return rec;
}

Eigen::VectorXd true_optimizer_quadratic(const QuadraticCost& quad,
                                         const Eigen::MatrixXd& G,
                                         const Eigen::MatrixXd& H,
                                         const Eigen::VectorXd& w_mean,
                                         int k) {
    const Eigen::MatrixXd system = quad.Q_u + G.transpose() * G;
    return system.ldlt().solve(G.transpose() * (quad.ref(k) - H * w_mean));
}

double optimizer_gap_bound(double ell, double mu, const Eigen::MatrixXd& G,
                           const Eigen::MatrixXd& G_hat) {
    if (mu <= 0.0) throw ConfigError("mu must be positive");
    const double sigma_min = min_singular_value(G_hat);
    if (sigma_min <= 0.0)
        throw NumericalError(
            "gap bound undefined: G_hat has a zero singular value");
    return 2.0 * ell * spectral_norm(G - G_hat) / (mu * sigma_min * sigma_min);
}

double wasserstein_shift_bound(const Eigen::MatrixXd& G,
                               const Eigen::MatrixXd& G_hat,
                               const Eigen::VectorXd& u,
                               const Eigen::VectorXd& u_prime) {
    return spectral_norm(G - G_hat) * (u - u_prime).norm();
}

TrackingConstants compute_tracking_constants(const ControllerConfig& cfg,
                                             const CostModel& cost,
                                             const LtiSystem& plant,
                                             const LyapunovCertificate& cert,
                                             double kappa) {
    if (!(kappa > 0.0 && kappa < 1.0))
        throw ConfigError("kappa must lie in (0, 1)");
    if (cost.mu <= 0.0) throw ConfigError("cost must be strongly convex");
    const double eta = cfg.eta;
    if (eta * cost.mu > 1.0 + 1e-15)
        throw InfeasibleError(
            "eta = " + std::to_string(eta) + " exceeds 1/mu = " +
            std::to_string(1.0 / cost.mu) +
            "; the input contraction factor would be complex");

    TrackingConstants c;
    c.eta = eta;
    c.kappa = kappa;
    c.ell_grad_hat =
        cost.ell_grad_u + spectral_norm(cfg.G_hat) * cost.ell_grad_y;
    c.mismatch = spectral_norm(steady_state_transfer(plant).G - cfg.G_hat);
    c.beta1 = std::sqrt(std::max(0.0, 1.0 - eta * cost.mu)) +
              eta * c.ell_grad_hat * c.mismatch;
    c.state_rate = std::sqrt(
        (cert.lambda_max_P / cert.lambda_min_P) *
        (1.0 - (1.0 - kappa) * cert.lambda_min_Q / cert.lambda_max_P));
    c.coupling = eta * c.ell_grad_hat * spectral_norm(plant.C());
    c.beta2 = c.state_rate + c.coupling;
    c.gamma1 = eta;
    c.gamma2 = 1.0;
    const double denom = kappa * cert.lambda_min_Q;
    c.gamma3 = std::max(
        std::sqrt(2.0 * cert.lambda_max_P / denom),
        4.0 * spectral_norm(plant.A().transpose() * cert.P) / denom);
    return c;
}

TrackingBoundSequence tracking_bound_sequence(
    const TrackingConstants& c, double e_u0, double e_x0,
    const Eigen::VectorXd& grad_error_bounds,
    const Eigen::VectorXd& input_drift, double state_drift_sup, int horizon) {
    if (horizon < 1) throw DimensionError("horizon must be >= 1");
    if (grad_error_bounds.size() < horizon)
        throw DimensionError("gradient error bounds cover " +
                             std::to_string(grad_error_bounds.size()) +
                             " steps, horizon is " + std::to_string(horizon));
    if (input_drift.size() < horizon)
        throw DimensionError("input drift covers " +
                             std::to_string(input_drift.size()) +
                             " steps, horizon is " + std::to_string(horizon));

    TrackingBoundSequence seq;
    seq.bound.resize(horizon + 1);
    seq.input_error.resize(horizon + 1);
    seq.state_error.resize(horizon + 1);
    seq.term_input_contraction.resize(horizon);
    seq.term_state_contraction.resize(horizon);
    seq.term_gradient.resize(horizon);
    seq.term_input_drift.resize(horizon);
    seq.term_state_drift.resize(horizon);

    double e_u = e_u0;
    double e_x = e_x0;
    seq.input_error(0) = e_u;
    seq.state_error(0) = e_x;
    seq.bound(0) = e_u + e_x;
    for (int k = 0; k < horizon; ++k) {
        seq.term_input_contraction(k) = c.beta1 * e_u;
        seq.term_state_contraction(k) = c.beta2 * e_x;
        seq.term_gradient(k) = c.gamma1 * grad_error_bounds(k);
        seq.term_input_drift(k) = c.gamma2 * input_drift(k);
        seq.term_state_drift(k) = c.gamma3 * state_drift_sup;

        const double e_u_next = c.beta1 * e_u + c.coupling * e_x +
                                c.gamma1 * grad_error_bounds(k) +
                                c.gamma2 * input_drift(k);
        const double e_x_next =
            c.state_rate * e_x + c.gamma3 * state_drift_sup;
        e_u = e_u_next;
        e_x = e_x_next;
        seq.input_error(k + 1) = e_u;
        seq.state_error(k + 1) = e_x;
        seq.bound(k + 1) = e_u + e_x;
    }
    return seq;
}

Eigen::VectorXd empirical_tracking_error(
    const std::vector<Trajectory>& runs,
    const std::vector<StableOptimizerRecord>& oracle) {
    if (runs.empty()) throw DimensionError("empty run set");
    const int H = runs.front().horizon();
    for (const Trajectory& t : runs)
        if (t.horizon() != H)
            throw DimensionError("runs have mismatched horizons");
    if (static_cast<int>(oracle.size()) < H)
        throw DimensionError("oracle covers " +
                             std::to_string(oracle.size()) +
                             " steps, runs have horizon " + std::to_string(H));

    Eigen::VectorXd err = Eigen::VectorXd::Zero(H);
    for (const Trajectory& t : runs) {
        for (int k = 0; k < H; ++k) {
            double e = (t.u.col(k) - oracle[k].u_so).norm();
            if (oracle[k].x_so.size() > 0)
                e += (t.x.col(k) - oracle[k].x_so).norm();
            err(k) += e;
        }
    }
    return err / static_cast<double>(runs.size());
}

Eigen::VectorXd gradient_error_sample(const Eigen::VectorXd& u,
                                      const Eigen::VectorXd& y,
                                      const Eigen::MatrixXd& G_hat,
                                      const CostModel& cost, int k,
                                      const Eigen::VectorXd& expected_gradient) {
    const Eigen::VectorXd sampled =
        cost.grad_u(u, y, k) + G_hat.transpose() * cost.grad_y(u, y, k);
    if (expected_gradient.size() != sampled.size())
        throw DimensionError("expected gradient has size " +
                             std::to_string(expected_gradient.size()) +
                             ", sampled gradient has size " +
                             std::to_string(sampled.size()));
    return sampled - expected_gradient;
}

Eigen::VectorXd expected_closed_loop_gradient(
    const Eigen::VectorXd& u, const Eigen::VectorXd& x, const LtiSystem& sys,
    const Eigen::MatrixXd& G_hat, const CostModel& cost, int k,
    const Signal& w_samples, const Eigen::VectorXd& weights) {
    const long N = w_samples.cols();
    if (N == 0) throw DimensionError("no disturbance samples");
    if (weights.size() != 0 && weights.size() != N)
        throw DimensionError("weights do not match the sample count");

    Eigen::VectorXd acc = Eigen::VectorXd::Zero(u.size());
    double total = 0.0;
    for (long s = 0; s < N; ++s) {
        const double wgt = weights.size() ? weights(s) : 1.0;
        const Eigen::VectorXd y = sys.C() * x + sys.D() * w_samples.col(s);
        acc += wgt * (cost.grad_u(u, y, k) +
                      G_hat.transpose() * cost.grad_y(u, y, k));
        total += wgt;
    }
    if (total <= 0.0) throw ConfigError("sample weights sum to zero");
    return acc / total;
}

StableOptimizerRecord stable_optimizer_fixed_point(
    const CostModel& cost, const Eigen::MatrixXd& G_hat,
    const Eigen::MatrixXd& G, const Eigen::MatrixXd& H,
    const Signal& w_support, const Eigen::VectorXd& weights, int k,
    const FixedPointOptions& opt, const LtiSystem* plant) {
    const long N = w_support.cols();
    if (N == 0) throw DimensionError("no disturbance support points");
    if (weights.size() != 0 && weights.size() != N)
        throw DimensionError("weights do not match the support count");

    const double total =
        weights.size() ? weights.sum() : static_cast<double>(N);
    if (total <= 0.0) throw ConfigError("support weights sum to zero");

    // Gradient of the frozen problem at anchor point u_frozen.
    const auto frozen_gradient = [&](const Eigen::VectorXd& u_frozen,
                                     const Eigen::VectorXd& u) {
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(u.size());
        for (long s = 0; s < N; ++s) {
            const double wgt = weights.size() ? weights(s) : 1.0;
            const Eigen::VectorXd z =
                (G - G_hat) * u_frozen + H * w_support.col(s);
            const Eigen::VectorXd y = G_hat * u + z;
            acc += wgt * (cost.grad_u(u, y, k) +
                          G_hat.transpose() * cost.grad_y(u, y, k));
        }
        return Eigen::VectorXd(acc / total);
    };

    const double lipschitz =
        (1.0 + spectral_norm(G_hat)) *
        (cost.ell_grad_u + spectral_norm(G_hat) * cost.ell_grad_y);
    const double step = 1.0 / std::max(lipschitz, cost.mu);
    const double inner_tol = 0.1 * opt.tol * cost.mu;

    Eigen::VectorXd u_frozen = Eigen::VectorXd::Zero(cost.u_dim);
    Eigen::VectorXd u = u_frozen;
    for (int outer = 0; outer < opt.max_outer; ++outer) {
        // Inner solve of the frozen strongly convex problem.
        for (int inner = 0; inner < opt.max_inner; ++inner) {
            const Eigen::VectorXd g = frozen_gradient(u_frozen, u);
            if (g.norm() <= inner_tol) break;
            u -= step * g;
        }
        if ((u - u_frozen).norm() <= opt.tol) {
            StableOptimizerRecord rec;
            rec.k = k;
            rec.u_so = u;
            rec.residual = frozen_gradient(u, u).norm();
            if (plant != nullptr) {
                Eigen::VectorXd w_mean = Eigen::VectorXd::Zero(w_support.rows());
                for (long s = 0; s < N; ++s)
                    w_mean += (weights.size() ? weights(s) : 1.0) *
                              w_support.col(s);
                w_mean /= total;
                rec.x_so = equilibrium_state(*plant, rec.u_so, w_mean).x_bar;
            }
            return rec;
        }
        u_frozen = u;
    }
    throw NumericalError(
        "repeated-retraining iteration did not reach a fixed point within "
        "the iteration cap");
}

}  // namespace dfo
