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
#include "dfo/lti_system.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>

namespace dfo {

namespace {

void check_dims(const char* field, long rows, long cols, long want_rows,
                long want_cols) {
    if (rows != want_rows || cols != want_cols) {
        std::ostringstream os;
        os << "matrix " << field << " is " << rows << "x" << cols
           << ", expected " << want_rows << "x" << want_cols;
        throw DimensionError(os.str());
    }
}

}  // namespace

LtiSystem::LtiSystem(Eigen::MatrixXd A, Eigen::MatrixXd B, Eigen::MatrixXd C,
                     Eigen::MatrixXd D, Eigen::MatrixXd E)
    : A_(std::move(A)),
      B_(std::move(B)),
      C_(std::move(C)),
      D_(std::move(D)),
      E_(std::move(E)) {
    const long n = A_.rows();
    if (n == 0) throw DimensionError("matrix A is empty");
    check_dims("A", A_.rows(), A_.cols(), n, n);
    if (B_.rows() != n) check_dims("B", B_.rows(), B_.cols(), n, B_.cols());
    if (C_.cols() != n) check_dims("C", C_.rows(), C_.cols(), C_.rows(), n);
    const long p = C_.rows();
    const long r = E_.cols();
    if (E_.rows() != n) check_dims("E", E_.rows(), E_.cols(), n, r);
    check_dims("D", D_.rows(), D_.cols(), p, r);
    if (B_.cols() < 1) throw DimensionError("matrix B has no columns");
    if (p < 1) throw DimensionError("matrix C has no rows");
    if (r < 1) throw DimensionError("matrix E has no columns");

    spectral_radius_ =
        Eigen::EigenSolver<Eigen::MatrixXd>(A_, false).eigenvalues().cwiseAbs().maxCoeff();
    if (!(spectral_radius_ < 1.0)) {
        std::ostringstream os;
        os << "A is not Schur stable: spectral radius " << spectral_radius_;
        throw SystemPropertyError(os.str());
    }
}

double Trajectory::replay_residual(const LtiSystem& sys) const {
    const int H = horizon();
    double worst = 0.0;
    for (int k = 0; k < H; ++k) {
        const Eigen::VectorXd x_next =
            sys.A() * x.col(k) + sys.B() * u.col(k) + sys.E() * w.col(k);
        const Eigen::VectorXd y_k = sys.C() * x.col(k) + sys.D() * w.col(k);
        worst = std::max(worst, (x.col(k + 1) - x_next).cwiseAbs().maxCoeff());
        worst = std::max(worst, (y.col(k) - y_k).cwiseAbs().maxCoeff());
    }
    return worst;
}

Trajectory simulate(const LtiSystem& sys, const Eigen::VectorXd& x0,
                    const Signal& u, const Signal& w, int horizon) {
    if (horizon < 1) throw DimensionError("horizon must be >= 1");
    if (x0.size() != sys.state_dim())
        throw DimensionError("x0 has size " + std::to_string(x0.size()) +
                             ", expected state dimension " +
                             std::to_string(sys.state_dim()));
    if (u.rows() != sys.input_dim())
        throw DimensionError("input signal u has " + std::to_string(u.rows()) +
                             " rows, expected " +
                             std::to_string(sys.input_dim()));
    if (w.rows() != sys.disturbance_dim())
        throw DimensionError("disturbance signal w has " +
                             std::to_string(w.rows()) + " rows, expected " +
                             std::to_string(sys.disturbance_dim()));
    if (u.cols() < horizon)
        throw DimensionError("input signal provides " +
                             std::to_string(u.cols()) + " samples, horizon is " +
                             std::to_string(horizon));
    if (w.cols() < horizon)
        throw DimensionError("disturbance signal provides " +
                             std::to_string(w.cols()) +
                             " samples, horizon is " + std::to_string(horizon));

    Trajectory traj;
    traj.u = u.leftCols(horizon);
    traj.w = w.leftCols(horizon);
    traj.x.resize(sys.state_dim(), horizon + 1);
    traj.y.resize(sys.output_dim(), horizon);
    traj.x.col(0) = x0;
    for (int k = 0; k < horizon; ++k) {
        traj.y.col(k) = sys.C() * traj.x.col(k) + sys.D() * traj.w.col(k);
        traj.x.col(k + 1) = sys.A() * traj.x.col(k) + sys.B() * traj.u.col(k) +
                            sys.E() * traj.w.col(k);
    }
    return traj;
}

EquilibriumResult equilibrium_state(const LtiSystem& sys,
                                    const Eigen::VectorXd& u_bar,
                                    const Eigen::VectorXd& w_bar) {
    if (u_bar.size() != sys.input_dim())
        throw DimensionError("u_bar has size " + std::to_string(u_bar.size()) +
                             ", expected " + std::to_string(sys.input_dim()));
    if (w_bar.size() != sys.disturbance_dim())
        throw DimensionError("w_bar has size " + std::to_string(w_bar.size()) +
                             ", expected " +
                             std::to_string(sys.disturbance_dim()));

    const int n = sys.state_dim();
    const Eigen::MatrixXd I_minus_A =
        Eigen::MatrixXd::Identity(n, n) - sys.A();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(I_minus_A);

    EquilibriumResult res;
    const double rc = lu.rcond();
    res.condition_estimate = (rc > 0.0) ? 1.0 / rc : std::numeric_limits<double>::infinity();
    res.ill_conditioned = res.condition_estimate > kConditionWarningThreshold;
    res.x_bar = lu.solve(sys.B() * u_bar + sys.E() * w_bar);
    res.y_bar = sys.C() * res.x_bar + sys.D() * w_bar;
    return res;
}

TransferFunctions steady_state_transfer(const LtiSystem& sys) {
    const int n = sys.state_dim();
    const Eigen::MatrixXd I_minus_A =
        Eigen::MatrixXd::Identity(n, n) - sys.A();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(I_minus_A);

    TransferFunctions tf;
    const double rc = lu.rcond();
    tf.condition_estimate = (rc > 0.0) ? 1.0 / rc : std::numeric_limits<double>::infinity();
    tf.ill_conditioned = tf.condition_estimate > kConditionWarningThreshold;
    tf.G = sys.C() * lu.solve(sys.B());
    tf.H = sys.D() + sys.C() * lu.solve(sys.E());
    return tf;
}

namespace {

int matrix_rank(const Eigen::MatrixXd& M, double tol) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    const double thresh = tol * sv(0);
    int rank = 0;
    for (long i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) ++rank;
    return rank;
}

}  // namespace

StructuralIndices structural_indices(const LtiSystem& sys, double rank_tol) {
    const int n = sys.state_dim();
    const int m = sys.input_dim();
    const int p = sys.output_dim();

    StructuralIndices idx{0, 0};

    Eigen::MatrixXd obs(n * p, n);
    Eigen::MatrixXd row = sys.C();
    for (int k = 1; k <= n; ++k) {
        obs.middleRows((k - 1) * p, p) = row;
        if (matrix_rank(obs.topRows(k * p), rank_tol) == n) {
            idx.observability = k;
            break;
        }
        row = row * sys.A();
    }
    if (idx.observability == 0)
        throw SystemPropertyError(
            "system is unobservable: observability matrix rank deficient at "
            "depth n");

    Eigen::MatrixXd ctrb(n, n * m);
    Eigen::MatrixXd col = sys.B();
    for (int k = 1; k <= n; ++k) {
        ctrb.middleCols((k - 1) * m, m) = col;
        if (matrix_rank(ctrb.leftCols(k * m), rank_tol) == n) {
            idx.controllability = k;
            break;
        }
        col = sys.A() * col;
    }
    if (idx.controllability == 0)
        throw SystemPropertyError(
            "system is uncontrollable: controllability matrix rank deficient "
            "at depth n");

    return idx;
}

}  // namespace dfo
