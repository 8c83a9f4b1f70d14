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
#include "dfo/estimation.hpp"

#include <sstream>

#include "dfo/linalg.hpp"

namespace dfo {

std::string method_name(EstimationMethod m) {
    switch (m) {
        case EstimationMethod::ExactKnownNoise: return "exact-known-noise";
        case EstimationMethod::ConstantNoise: return "constant-noise";
        case EstimationMethod::MinNormUnknownNoise:
            return "min-norm-unknown-noise";
    }
    throw Error("unreachable estimation method");
}

EstimationMethod method_from_name(const std::string& name) {
    if (name == "exact" || name == "exact-known-noise")
        return EstimationMethod::ExactKnownNoise;
    if (name == "constant-noise") return EstimationMethod::ConstantNoise;
    if (name == "min-norm" || name == "min-norm-unknown-noise")
        return EstimationMethod::MinNormUnknownNoise;
    throw ConfigError("unknown estimation method '" + name +
                      "' (expected exact | constant-noise | min-norm)");
}

int default_training_length(int m, int r, int n, int nu) {
    return (m + r + 1) * (n + nu) + 4;
}

namespace {

void append_block(RegressorSystem& sys, const std::string& name,
                  const Eigen::MatrixXd& lhs_block,
                  const Eigen::MatrixXd& rhs_block) {
    const long row = sys.lhs.rows();
    sys.lhs.conservativeResize(row + lhs_block.rows(), Eigen::NoChange);
    sys.rhs.conservativeResize(row + rhs_block.rows(), Eigen::NoChange);
    sys.lhs.bottomRows(lhs_block.rows()) = lhs_block;
    sys.rhs.bottomRows(rhs_block.rows()) = rhs_block;
    sys.blocks.push_back({name, row, lhs_block.rows()});
}

Eigen::MatrixXd replicated_identity(int nu, int m) {
    Eigen::MatrixXd target(static_cast<long>(nu) * m, m * nu);
    target.setZero();
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nu; ++j)
            target.block(static_cast<long>(i) * m, static_cast<long>(j) * m, m,
                         m) = Eigen::MatrixXd::Identity(m, m);
    return target;
}

void check_pe_or_throw(const Signal& z, int order, const char* label,
                       double rank_tol) {
    const PersistencyResult pe = is_persistently_exciting(z, order, rank_tol);
    if (!pe.excited) {
        std::ostringstream os;
        os << label << " signal not persistently exciting of order " << order
           << ": rank " << pe.achieved_rank << " of required "
           << pe.required_rank;
        if (!pe.diagnostic.empty()) os << " (" << pe.diagnostic << ")";
        throw PersistencyError(os.str());
    }
}

void check_block_index(int i, int nu) {
    if (i < 1 || i > nu)
        throw DimensionError("block index " + std::to_string(i) +
                             " out of range [1, " + std::to_string(nu) + "]");
}

double cross_block_deviation(const HankelMatrix& Y, const Eigen::MatrixXd& M,
                             const Eigen::MatrixXd& G_hat) {
    double worst = 0.0;
    for (int i = 1; i <= Y.depth(); ++i)
        worst = std::max(worst, (Y.block_row(i) * M - G_hat).norm());
    return worst;
}

}  // namespace

RegressorSystem build_exact_constraints(const Signal& u, const Signal& w,
                                        const Signal& y, int nu) {
    const int m = static_cast<int>(u.rows());
    const int T = static_cast<int>(u.cols());
    if (nu < 1) throw DimensionError("nu must be >= 1");
    if (T < nu)
        throw DimensionError("input provides " + std::to_string(T) +
                             " samples, need at least nu = " +
                             std::to_string(nu));
    if (w.cols() < T + 1)
        throw DimensionError(
            "disturbance record needs one extra sample: have " +
            std::to_string(w.cols()) + ", need " + std::to_string(T + 1));
    if (y.cols() < T + 1)
        throw DimensionError("output record needs one extra sample: have " +
                             std::to_string(y.cols()) + ", need " +
                             std::to_string(T + 1));

    RegressorSystem sys;
    sys.nu = nu;
    sys.q = T - nu + 1;
    sys.input_dim = m;
    sys.lhs.resize(0, sys.q);
    sys.rhs.resize(0, static_cast<long>(m) * nu);

    const Signal y_diff = difference_signal(y.leftCols(T + 1));
    const Signal w_diff = difference_signal(w.leftCols(T + 1));
    const auto zeros = [&](long rows) {
        return Eigen::MatrixXd::Zero(rows, static_cast<long>(m) * nu);
    };

    const HankelMatrix Yd = build_hankel(y_diff, nu, sys.q);
    const HankelMatrix Wd = build_hankel(w_diff, nu, sys.q);
    const HankelMatrix U = build_hankel(u, nu, sys.q);
    const HankelMatrix W = build_hankel(w.leftCols(T), nu, sys.q);

    append_block(sys, "output_diff", Yd.matrix(), zeros(Yd.matrix().rows()));
    append_block(sys, "disturbance_diff", Wd.matrix(),
                 zeros(Wd.matrix().rows()));
    append_block(sys, "input", U.matrix(), replicated_identity(nu, m));
    append_block(sys, "disturbance", W.matrix(), zeros(W.matrix().rows()));
    return sys;
}

RegressorSystem build_min_norm_constraints(const Signal& u, const Signal& y,
                                           int nu) {
    const int m = static_cast<int>(u.rows());
    const int T = static_cast<int>(u.cols());
    if (nu < 1) throw DimensionError("nu must be >= 1");
    if (T < nu)
        throw DimensionError("input provides " + std::to_string(T) +
                             " samples, need at least nu = " +
                             std::to_string(nu));
    if (y.cols() < T + 1)
        throw DimensionError("output record needs one extra sample: have " +
                             std::to_string(y.cols()) + ", need " +
                             std::to_string(T + 1));

    RegressorSystem sys;
    sys.nu = nu;
    sys.q = T - nu + 1;
    sys.input_dim = m;
    sys.lhs.resize(0, sys.q);
    sys.rhs.resize(0, static_cast<long>(m) * nu);

    const Signal y_diff = difference_signal(y.leftCols(T + 1));
    const HankelMatrix Yd = build_hankel(y_diff, nu, sys.q);
    const HankelMatrix U = build_hankel(u, nu, sys.q);

    append_block(sys, "output_diff", Yd.matrix(),
                 Eigen::MatrixXd::Zero(Yd.matrix().rows(),
                                       static_cast<long>(m) * nu));
    append_block(sys, "input", U.matrix(), replicated_identity(nu, m));
    return sys;
}

RegressorSolution solve_regressor(const RegressorSystem& sys,
                                  double tau_solve) {
    RegressorSolution sol;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(sys.lhs);
    sol.M = cod.solve(sys.rhs);

    for (const ConstraintBlock& b : sys.blocks) {
        const Eigen::MatrixXd lhs_b = sys.lhs.middleRows(b.row_begin, b.rows);
        const Eigen::MatrixXd rhs_b = sys.rhs.middleRows(b.row_begin, b.rows);
        const double res = (lhs_b * sol.M - rhs_b).norm();
        sol.block_residuals.push_back(res);
        sol.max_block_residual = std::max(sol.max_block_residual, res);
        const double scale =
            std::max(1.0, lhs_b.norm() * sol.M.norm() + rhs_b.norm());
        if (res > tau_solve * scale) {
            std::ostringstream os;
            os << "constraint block '" << b.name
               << "' is inconsistent: residual " << res << " exceeds "
               << tau_solve << " * " << scale
               << "; the data does not admit a steady-state combination";
            throw InfeasibleError(os.str());
        }
    }
    return sol;
}

TransferEstimate estimate_transfer_exact(const Signal& u, const Signal& w,
                                         const Signal& y,
                                         const EstimationOptions& opt) {
    check_block_index(opt.block_index, opt.nu);
    if (opt.check_pe) {
        if (opt.state_dim < 1)
            throw ConfigError(
                "state_dim must be set for the excitation check (or disable "
                "check_pe)");
        const int order = opt.state_dim + opt.nu;
        check_pe_or_throw(u, order, "input", opt.tau_rank);
        // An identically zero record makes the disturbance blocks vacuous,
        // so its excitation is not needed (noiseless special case).
        if (w.cwiseAbs().maxCoeff() > 0.0)
            check_pe_or_throw(w.leftCols(u.cols()), order, "disturbance",
                              opt.tau_rank);
    }

    const RegressorSystem sys = build_exact_constraints(u, w, y, opt.nu);
    const RegressorSolution sol = solve_regressor(sys, opt.tau_solve);

    const int T = static_cast<int>(u.cols());
    const HankelMatrix Y = build_hankel(y.leftCols(T), opt.nu, sys.q);

    TransferEstimate est;
    est.method = EstimationMethod::ExactKnownNoise;
    est.block_index = opt.block_index;
    est.G_hat = Y.block_row(opt.block_index) * sol.M;
    est.M = sol.M;
    est.solve_residual = sol.max_block_residual;
    est.cross_block_deviation = cross_block_deviation(Y, sol.M, est.G_hat);

    const HankelMatrix W = build_hankel(w.leftCols(T), opt.nu, sys.q);
    const HankelMatrix Wd = build_hankel(
        difference_signal(w.leftCols(T + 1)), opt.nu, sys.q);
    est.audit_w_residual = (W.block_row(opt.block_index) * sol.M).norm();
    est.audit_w_diff_residual = (Wd.block_row(opt.block_index) * sol.M).norm();
    return est;
}

TransferEstimate estimate_transfer_constant_noise(
    const Signal& u, const Signal& y, const EstimationOptions& opt) {
    check_block_index(opt.block_index, opt.nu);
    const int T = static_cast<int>(u.cols()) - 1;
    if (T < opt.nu)
        throw DimensionError("input provides " + std::to_string(T + 1) +
                             " samples; the differenced method needs at least "
                             "nu + 1 = " + std::to_string(opt.nu + 1));
    if (y.cols() < T + 2)
        throw DimensionError(
            "output record needs two extra samples: have " +
            std::to_string(y.cols()) + ", need " + std::to_string(T + 2));
    if (opt.check_pe) {
        if (opt.state_dim < 1)
            throw ConfigError(
                "state_dim must be set for the excitation check (or disable "
                "check_pe)");
        check_pe_or_throw(u, opt.state_dim + opt.nu, "input", opt.tau_rank);
    }

    // Differenced data follows the same dynamics with the constant
    // disturbance cancelled, so the noiseless machinery applies verbatim.
    const Signal v = difference_signal(u);
    const Signal r = difference_signal(y.leftCols(T + 2));

    const RegressorSystem sys = build_min_norm_constraints(v, r, opt.nu);
    const RegressorSolution sol = solve_regressor(sys, opt.tau_solve);

    const HankelMatrix R = build_hankel(r.leftCols(T), opt.nu, sys.q);

    TransferEstimate est;
    est.method = EstimationMethod::ConstantNoise;
    est.block_index = opt.block_index;
    est.G_hat = R.block_row(opt.block_index) * sol.M;
    est.M = sol.M;
    est.solve_residual = sol.max_block_residual;
    est.cross_block_deviation = cross_block_deviation(R, sol.M, est.G_hat);
    return est;
}

TransferEstimate estimate_transfer_min_norm(const Signal& u, const Signal& y,
                                            const EstimationOptions& opt,
                                            const Signal* audit_w) {
    check_block_index(opt.block_index, opt.nu);
    if (opt.check_pe) {
        if (opt.state_dim < 1)
            throw ConfigError(
                "state_dim must be set for the excitation check (or disable "
                "check_pe)");
        check_pe_or_throw(u, opt.state_dim + opt.nu, "input", opt.tau_rank);
    }

    const RegressorSystem sys = build_min_norm_constraints(u, y, opt.nu);
    const RegressorSolution sol = solve_regressor(sys, opt.tau_solve);

    const int T = static_cast<int>(u.cols());
    const HankelMatrix Y = build_hankel(y.leftCols(T), opt.nu, sys.q);

    TransferEstimate est;
    est.method = EstimationMethod::MinNormUnknownNoise;
    est.block_index = opt.block_index;
    est.G_hat = Y.block_row(opt.block_index) * sol.M;
    est.M = sol.M;
    est.solve_residual = sol.max_block_residual;
    est.cross_block_deviation = cross_block_deviation(Y, sol.M, est.G_hat);

    if (audit_w != nullptr) {
        if (audit_w->cols() < T + 1)
            throw DimensionError(
                "audit disturbance record needs one extra sample: have " +
                std::to_string(audit_w->cols()) + ", need " +
                std::to_string(T + 1));
        const HankelMatrix W = build_hankel(audit_w->leftCols(T), opt.nu, sys.q);
        const HankelMatrix Wd = build_hankel(
            difference_signal(audit_w->leftCols(T + 1)), opt.nu, sys.q);
        est.audit_w_residual = (W.block_row(opt.block_index) * sol.M).norm();
        est.audit_w_diff_residual =
            (Wd.block_row(opt.block_index) * sol.M).norm();
    }
    return est;
}

ErrorDecomposition error_decomposition(const LtiSystem& sys,
                                       const Eigen::MatrixXd& M_hat,
                                       const Signal& u, const Signal& w,
                                       const Signal& y, const Signal& x,
                                       const EstimationOptions& opt) {
    const int T = static_cast<int>(u.cols());
    const int q = T - opt.nu + 1;
    check_block_index(opt.block_index, opt.nu);
    if (M_hat.rows() != q)
        throw DimensionError("M has " + std::to_string(M_hat.rows()) +
                             " rows, expected q = " + std::to_string(q));
    if (x.cols() < T)
        throw DimensionError("state record provides " +
                             std::to_string(x.cols()) + " samples, need " +
                             std::to_string(T));

    const int i = opt.block_index;
    const HankelMatrix X = build_hankel(x.leftCols(T), opt.nu, q);
    const HankelMatrix W = build_hankel(w.leftCols(T), opt.nu, q);
    const HankelMatrix Wd =
        build_hankel(difference_signal(w.leftCols(T + 1)), opt.nu, q);
    const HankelMatrix Y = build_hankel(y.leftCols(T), opt.nu, q);

    const int n = sys.state_dim();
    const Eigen::MatrixXd I_minus_A = Eigen::MatrixXd::Identity(n, n) - sys.A();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(I_minus_A);

    ErrorDecomposition dec;
    dec.state_term =
        sys.C() * sys.A() * (X.block_row(i) * M_hat - lu.solve(sys.B()));
    dec.noise_term = (sys.C() * sys.E() + sys.D()) * (W.block_row(i) * M_hat);
    dec.noise_diff_term = sys.D() * (Wd.block_row(i) * M_hat);

    const Eigen::MatrixXd G_hat = Y.block_row(i) * M_hat;
    dec.g_error = G_hat - steady_state_transfer(sys).G;
    dec.identity_residual =
        (dec.state_term + dec.noise_term + dec.noise_diff_term - dec.g_error)
            .norm();
    return dec;
}

FullRankErrorBound error_bound_full_rank_C(const LtiSystem& sys,
                                           const Eigen::MatrixXd& M_hat,
                                           const Signal& u, const Signal& w,
                                           const Signal& y,
                                           const EstimationOptions& opt) {
    if (opt.nu != 1)
        throw SystemPropertyError(
            "full-column-rank error characterization requires observability "
            "index 1, got nu = " + std::to_string(opt.nu));

    const int T = static_cast<int>(u.cols());
    const int q = T;  // nu = 1
    if (M_hat.rows() != q)
        throw DimensionError("M has " + std::to_string(M_hat.rows()) +
                             " rows, expected q = " + std::to_string(q));

    const HankelMatrix W = build_hankel(w.leftCols(T), 1, q);
    const HankelMatrix Wd =
        build_hankel(difference_signal(w.leftCols(T + 1)), 1, q);
    const HankelMatrix Y = build_hankel(y.leftCols(T), 1, q);

    const int n = sys.state_dim();
    const Eigen::MatrixXd I_minus_A = Eigen::MatrixXd::Identity(n, n) - sys.A();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(I_minus_A);
    const Eigen::MatrixXd C_pinv = pseudo_inverse(sys.C());

    const Eigen::MatrixXd WM = W.block_row(1) * M_hat;
    const Eigen::MatrixXd WdM = Wd.block_row(1) * M_hat;

    const Eigen::MatrixXd coeff_w = sys.C() * lu.solve(sys.E()) + sys.D();
    const Eigen::MatrixXd coeff_wd = sys.C() * lu.solve(C_pinv * sys.D());

    FullRankErrorBound out;
    out.exact_error = coeff_w * WM + coeff_wd * WdM;
    out.bound = spectral_norm(coeff_w) * spectral_norm(WM) +
                spectral_norm(coeff_wd) * spectral_norm(WdM);

    const Eigen::MatrixXd g_error =
        Y.block_row(1) * M_hat - steady_state_transfer(sys).G;
    out.actual_error = spectral_norm(g_error);
    out.check_residual = (out.exact_error - g_error).norm();
    return out;
}

}  // namespace dfo
