// Data-driven recovery of the steady-state gain and its error analysis.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <dfo/estimation.hpp>
#include <dfo/linalg.hpp>
#include <dfo/lti_system.hpp>
#include <dfo/random_system.hpp>

using dfo::EstimationOptions;
using dfo::LtiSystem;
using dfo::Signal;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct Experiment {
    LtiSystem sys;
    Signal u, w, y, x;
    MatrixXd G;
    int nu;
};

// Runs an open-loop excitation experiment: u gets T samples, w and y one
// extra for the difference signals.
Experiment run_experiment(const LtiSystem& sys, const Signal& w_full,
                          uint64_t input_seed, int T) {
    const int m = sys.input_dim();
    const Signal u = dfo::random_uniform_signal(m, T + 1, -1.0, 1.0, input_seed);
    const auto traj =
        dfo::simulate(sys, VectorXd::Zero(sys.state_dim()), u, w_full, T + 1);
    Experiment e{sys,
                 u.leftCols(T),
                 traj.w,
                 traj.y,
                 traj.x,
                 dfo::steady_state_transfer(sys).G,
                 dfo::structural_indices(sys).observability};
    return e;
}

Experiment make_experiment(const LtiSystem& sys, double noise_scale,
                           uint64_t seed) {
    const int nu = dfo::structural_indices(sys).observability;
    const int T = dfo::default_training_length(
        sys.input_dim(), sys.disturbance_dim(), sys.state_dim(), nu);
    const Signal w = noise_scale * dfo::random_uniform_signal(
                                       sys.disturbance_dim(), T + 1, -1.0,
                                       1.0, seed * 31 + 7);
    return run_experiment(sys, w, seed, T);
}

LtiSystem scalar_plant() {
    auto s = [](double v) { return MatrixXd::Constant(1, 1, v); };
    return LtiSystem(s(0.5), s(1), s(1), s(0), s(1));
}

}  // namespace

TEST_CASE("known-noise method recovers the scalar gain") {
    const Experiment e = make_experiment(scalar_plant(), 0.5, 3);
    EstimationOptions opt;
    opt.nu = e.nu;
    opt.state_dim = 1;
    const auto est = dfo::estimate_transfer_exact(e.u, e.w, e.y, opt);
    CHECK(est.G_hat(0, 0) == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(est.audit_w_residual <= 1e-8);
    CHECK(est.audit_w_diff_residual <= 1e-8);
}

TEST_CASE("noiseless data gives the gain exactly") {
    auto s = [](double v) { return MatrixXd::Constant(1, 1, v); };
    const LtiSystem sys(s(0.5), s(1), s(1), s(0), s(0));
    const int T = dfo::default_training_length(1, 1, 1, 1);
    const Signal w = Signal::Zero(1, T + 1);
    const Experiment e = run_experiment(sys, w, 5, T);

    EstimationOptions opt;
    opt.nu = 1;
    opt.state_dim = 1;
    const auto est = dfo::estimate_transfer_exact(e.u, e.w, e.y, opt);
    CHECK(std::abs(est.G_hat(0, 0) - e.G(0, 0)) <= 1e-10);
}

TEST_CASE("known-noise method on a seeded MIMO plant") {
    dfo::RandomSystemOptions ropt;
    ropt.n = 3;
    ropt.m = 2;
    ropt.p = 2;
    ropt.r = 2;
    const LtiSystem sys = dfo::random_system(ropt, 19);
    const Experiment e = make_experiment(sys, 0.5, 4);
    EstimationOptions opt;
    opt.nu = e.nu;
    opt.state_dim = 3;
    const auto est = dfo::estimate_transfer_exact(e.u, e.w, e.y, opt);
    CHECK((est.G_hat - e.G).norm() <= 1e-6);
}

TEST_CASE("gain extraction is block-row and input independent") {
    dfo::RandomSystemOptions ropt;
    ropt.n = 3;
    ropt.m = 1;
    ropt.p = 2;
    ropt.r = 1;
    const LtiSystem sys = dfo::random_system(ropt, 23);
    const Experiment e = make_experiment(sys, 0.4, 6);
    REQUIRE(e.nu == 2);

    EstimationOptions opt;
    opt.nu = e.nu;
    opt.state_dim = 3;
    const auto est1 = dfo::estimate_transfer_exact(e.u, e.w, e.y, opt);
    opt.block_index = 2;
    const auto est2 = dfo::estimate_transfer_exact(e.u, e.w, e.y, opt);
    CHECK((est1.G_hat - est2.G_hat).norm() <= 1e-8);
    CHECK(est1.cross_block_deviation <= 1e-8);

    // A different excitation gives the same answer.
    const Experiment e2 = make_experiment(sys, 0.4, 61);
    opt.block_index = 1;
    const auto est3 = dfo::estimate_transfer_exact(e2.u, e2.w, e2.y, opt);
    CHECK((est1.G_hat - est3.G_hat).norm() <= 1e-7);
}

TEST_CASE("constant-noise method") {
    SUBCASE("unknown constant offset cancels in the scalar plant") {
        const LtiSystem sys = scalar_plant();
        const int T = dfo::default_training_length(1, 1, 1, 1) + 1;
        const Signal w = Signal::Constant(1, T + 2, 0.7);
        const Signal u = dfo::random_uniform_signal(1, T + 2, -1.0, 1.0, 8);
        const auto traj = dfo::simulate(sys, VectorXd::Zero(1), u, w, T + 2);

        EstimationOptions opt;
        opt.nu = 1;
        opt.state_dim = 1;
        const auto est = dfo::estimate_transfer_constant_noise(
            u.leftCols(T + 1), traj.y, opt);
        CHECK(est.G_hat(0, 0) == doctest::Approx(2.0).epsilon(1e-7));
    }
    SUBCASE("zero is a constant: agrees with the known-noise method") {
        const LtiSystem sys = scalar_plant();
        const int T = dfo::default_training_length(1, 1, 1, 1) + 1;
        const Signal w = Signal::Zero(1, T + 2);
        const Signal u = dfo::random_uniform_signal(1, T + 2, -1.0, 1.0, 9);
        const auto traj = dfo::simulate(sys, VectorXd::Zero(1), u, w, T + 2);

        EstimationOptions opt;
        opt.nu = 1;
        opt.state_dim = 1;
        const auto cn = dfo::estimate_transfer_constant_noise(
            u.leftCols(T + 1), traj.y, opt);
        const auto exact = dfo::estimate_transfer_exact(
            u.leftCols(T), traj.w.leftCols(T + 1), traj.y.leftCols(T + 1),
            opt);
        CHECK((cn.G_hat - exact.G_hat).norm() <= 1e-8);
    }
    SUBCASE("vector constant noise on a seeded n = 2 plant") {
        dfo::RandomSystemOptions ropt;
        ropt.n = 2;
        ropt.m = 2;
        ropt.p = 2;
        ropt.r = 2;
        const LtiSystem sys = dfo::random_system(ropt, 29);
        const int nu = dfo::structural_indices(sys).observability;
        const int T = dfo::default_training_length(2, 2, 2, nu) + 1;
        Signal w(2, T + 2);
        w.colwise() = (VectorXd(2) << 0.3, -0.4).finished();
        const Signal u = dfo::random_uniform_signal(2, T + 2, -1.0, 1.0, 30);
        const auto traj = dfo::simulate(sys, VectorXd::Zero(2), u, w, T + 2);

        EstimationOptions opt;
        opt.nu = nu;
        opt.state_dim = 2;
        const auto est = dfo::estimate_transfer_constant_noise(
            u.leftCols(T + 1), traj.y, opt);
        CHECK((est.G_hat - dfo::steady_state_transfer(sys).G).norm() <= 1e-6);
    }
}

TEST_CASE("min-norm method under unknown noise") {
    dfo::RandomSystemOptions ropt;
    ropt.n = 3;
    ropt.m = 2;
    ropt.p = 2;
    ropt.r = 1;
    const LtiSystem sys = dfo::random_system(ropt, 41);
    const int nu = dfo::structural_indices(sys).observability;
    const int T = dfo::default_training_length(2, 1, 3, nu);

    EstimationOptions opt;
    opt.nu = nu;
    opt.state_dim = 3;

    SUBCASE("noiseless data recovers the gain") {
        const Signal w = Signal::Zero(1, T + 1);
        const Experiment e = run_experiment(sys, w, 10, T);
        const auto est =
            dfo::estimate_transfer_min_norm(e.u, e.y, opt, &e.w);
        CHECK((est.G_hat - e.G).norm() <= 1e-8);
        CHECK(est.audit_w_residual <= 1e-10);
        CHECK(est.audit_w_diff_residual <= 1e-10);
    }
    SUBCASE("error shrinks linearly with the noise scale") {
        double prev = -1.0;
        for (const double scale : {1e-2, 1e-3, 1e-4}) {
            const Signal w = scale * dfo::random_uniform_signal(1, T + 1,
                                                                -1.0, 1.0, 77);
            const Experiment e = run_experiment(sys, w, 10, T);
            const auto est = dfo::estimate_transfer_min_norm(e.u, e.y, opt);
            const double err = (est.G_hat - e.G).norm();
            if (prev >= 0.0) {
                CHECK(err < prev);
                CHECK(err >= prev / 30.0);  // roughly one decade per decade
            }
            prev = err;
        }
    }
}

TEST_CASE("error decomposition identity") {
    dfo::RandomSystemOptions ropt;
    ropt.n = 3;
    ropt.m = 2;
    ropt.p = 2;
    ropt.r = 2;
    const LtiSystem sys = dfo::random_system(ropt, 47);
    const int nu = dfo::structural_indices(sys).observability;
    const int T = dfo::default_training_length(2, 2, 3, nu);

    EstimationOptions opt;
    opt.nu = nu;
    opt.state_dim = 3;

    SUBCASE("noisy min-norm estimate: three terms sum to the gain error") {
        const Signal w =
            0.1 * dfo::random_uniform_signal(2, T + 1, -1.0, 1.0, 48);
        const Experiment e = run_experiment(sys, w, 11, T);
        const auto est = dfo::estimate_transfer_min_norm(e.u, e.y, opt);
        const auto dec = dfo::error_decomposition(sys, est.M, e.u, e.w, e.y,
                                                  e.x, opt);
        CHECK(dec.identity_residual <= 1e-8);
        CHECK((dec.g_error - (est.G_hat - e.G)).norm() <= 1e-12);
    }
    SUBCASE("known-noise solution kills the disturbance terms") {
        const Experiment e = make_experiment(sys, 0.5, 12);
        const auto est = dfo::estimate_transfer_exact(e.u, e.w, e.y, opt);
        const auto dec = dfo::error_decomposition(sys, est.M, e.u, e.w, e.y,
                                                  e.x, opt);
        CHECK(dec.noise_term.norm() <= 1e-8);
        CHECK(dec.noise_diff_term.norm() <= 1e-8);
        CHECK(dec.identity_residual <= 1e-8);
    }
    SUBCASE("noiseless data zeroes every term") {
        const Signal w = Signal::Zero(2, T + 1);
        const Experiment e = run_experiment(sys, w, 13, T);
        const auto est = dfo::estimate_transfer_min_norm(e.u, e.y, opt);
        const auto dec = dfo::error_decomposition(sys, est.M, e.u, e.w, e.y,
                                                  e.x, opt);
        CHECK(dec.state_term.norm() <= 1e-8);
        CHECK(dec.noise_term.norm() <= 1e-8);
        CHECK(dec.noise_diff_term.norm() <= 1e-8);
    }
}

TEST_CASE("full-column-rank error bound") {
    dfo::RandomSystemOptions ropt;
    ropt.n = 2;
    ropt.m = 2;
    ropt.p = 3;  // tall C, full column rank, so nu = 1
    ropt.r = 2;
    const LtiSystem sys = dfo::random_system(ropt, 53);
    REQUIRE(dfo::structural_indices(sys).observability == 1);
    const int T = dfo::default_training_length(2, 2, 2, 1);

    EstimationOptions opt;
    opt.nu = 1;
    opt.state_dim = 2;

    SUBCASE("noiseless data: zero bound, zero error") {
        const Signal w = Signal::Zero(2, T + 1);
        const Experiment e = run_experiment(sys, w, 14, T);
        const auto est = dfo::estimate_transfer_min_norm(e.u, e.y, opt);
        const auto res =
            dfo::error_bound_full_rank_C(sys, est.M, e.u, e.w, e.y, opt);
        CHECK(res.bound <= 1e-10);
        CHECK(res.actual_error <= 1e-10);
    }
    SUBCASE("noisy data: bound dominates the actual error") {
        const Signal w =
            0.2 * dfo::random_uniform_signal(2, T + 1, -1.0, 1.0, 54);
        const Experiment e = run_experiment(sys, w, 15, T);
        const auto est = dfo::estimate_transfer_min_norm(e.u, e.y, opt);
        const auto res =
            dfo::error_bound_full_rank_C(sys, est.M, e.u, e.w, e.y, opt);
        CHECK(res.check_residual <= 1e-8);
        CHECK(res.actual_error <= res.bound + 1e-12);
    }
    SUBCASE("identity output with no feedthrough kills the second addend") {
        dfo::RandomSystemOptions iopt;
        iopt.n = 2;
        iopt.m = 2;
        iopt.p = 2;
        iopt.r = 2;
        const LtiSystem base = dfo::random_system(iopt, 55);
        const LtiSystem plain(base.A(), base.B(), MatrixXd::Identity(2, 2),
                              MatrixXd::Zero(2, 2), base.E());
        const Signal w =
            0.2 * dfo::random_uniform_signal(2, T + 1, -1.0, 1.0, 56);
        const Experiment e = run_experiment(plain, w, 16, T);
        const auto est = dfo::estimate_transfer_min_norm(e.u, e.y, opt);
        const auto res =
            dfo::error_bound_full_rank_C(plain, est.M, e.u, e.w, e.y, opt);

        // With D = 0 the bound reduces to |(I-A)^{-1} E| |[W] M|.
        const MatrixXd inv_term =
            (MatrixXd::Identity(2, 2) - plain.A()).lu().solve(plain.E());
        const auto W = dfo::build_hankel(e.w.leftCols(T), 1, T);
        const double expect = dfo::spectral_norm(inv_term) *
                              dfo::spectral_norm(W.block_row(1) * est.M);
        CHECK(res.bound == doctest::Approx(expect).epsilon(1e-9));
    }
    SUBCASE("requires observability index one") {
        EstimationOptions wrong = opt;
        wrong.nu = 2;
        const Signal w = Signal::Zero(2, T + 1);
        const Experiment e = run_experiment(sys, w, 17, T);
        CHECK_THROWS_AS(dfo::error_bound_full_rank_C(sys, MatrixXd::Zero(T, 2),
                                                     e.u, e.w, e.y, wrong),
                        dfo::SystemPropertyError);
    }
}

TEST_CASE("feasible combinations are interchangeable") {
    dfo::RandomSystemOptions ropt;
    ropt.n = 2;
    ropt.m = 1;
    ropt.p = 1;
    ropt.r = 1;
    const LtiSystem sys = dfo::random_system(ropt, 59);
    const int nu = dfo::structural_indices(sys).observability;
    const Experiment e = make_experiment(sys, 0.5, 18);

    EstimationOptions opt;
    opt.nu = nu;
    opt.state_dim = 2;
    const auto reg = dfo::build_exact_constraints(e.u, e.w, e.y, nu);
    const auto sol = dfo::solve_regressor(reg);

    const MatrixXd kernel = Eigen::FullPivLU<MatrixXd>(reg.lhs).kernel();
    REQUIRE(kernel.cols() > 0);
    std::mt19937_64 rng(4);
    std::normal_distribution<double> gauss;
    MatrixXd mix(kernel.cols(), sol.M.cols());
    for (long i = 0; i < mix.rows(); ++i)
        for (long j = 0; j < mix.cols(); ++j) mix(i, j) = gauss(rng);
    const MatrixXd M_alt = sol.M + kernel * mix;

    const int T = static_cast<int>(e.u.cols());
    const auto Y = dfo::build_hankel(e.y.leftCols(T), nu, reg.q);
    CHECK((Y.block_row(1) * sol.M - Y.block_row(1) * M_alt).norm() <= 1e-7);
}

TEST_CASE("excitation and consistency failures are typed") {
    const LtiSystem sys = scalar_plant();
    const int T = dfo::default_training_length(1, 1, 1, 1);
    EstimationOptions opt;
    opt.nu = 1;
    opt.state_dim = 1;

    SUBCASE("constant input is not persistently exciting") {
        const Signal u = Signal::Ones(1, T + 1);
        const Signal w =
            0.5 * dfo::random_uniform_signal(1, T + 1, -1.0, 1.0, 20);
        const auto traj = dfo::simulate(sys, VectorXd::Zero(1), u, w, T + 1);
        CHECK_THROWS_AS(dfo::estimate_transfer_exact(u.leftCols(T), traj.w,
                                                     traj.y, opt),
                        dfo::PersistencyError);
    }
    SUBCASE("overdetermined inconsistent data names the violated block") {
        // One input sample, two output samples: the output-difference row
        // forces M = 0 while the input row demands U M = 1.
        Signal u1(1, 1);
        u1 << 1.0;
        Signal y2(1, 2);
        y2 << 0.0, 3.0;
        EstimationOptions loose = opt;
        loose.check_pe = false;
        CHECK_THROWS_WITH_AS(dfo::estimate_transfer_min_norm(u1, y2, loose),
                             doctest::Contains("block"), dfo::InfeasibleError);
    }
}
