// Plant representation, simulation, equilibria and Lyapunov certificates.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <dfo/disturbance.hpp>
#include <dfo/json_io.hpp>
#include <dfo/lti_system.hpp>
#include <dfo/lyapunov.hpp>
#include <dfo/random_system.hpp>

using dfo::DisturbanceProcess;
using dfo::LtiSystem;
using dfo::Signal;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd scalar(double v) { return MatrixXd::Constant(1, 1, v); }

LtiSystem scalar_system(double a, double b, double c, double d, double e) {
    return LtiSystem(scalar(a), scalar(b), scalar(c), scalar(d), scalar(e));
}

}  // namespace

TEST_CASE("construction validates dimensions and stability") {
    CHECK_THROWS_AS(LtiSystem(MatrixXd::Zero(2, 2), MatrixXd::Zero(3, 1),
                              MatrixXd::Identity(1, 2), MatrixXd::Zero(1, 1),
                              MatrixXd::Zero(2, 1)),
                    dfo::DimensionError);
    CHECK_THROWS_AS(scalar_system(1.0, 1, 1, 0, 0), dfo::SystemPropertyError);
    CHECK_THROWS_AS(scalar_system(-1.2, 1, 1, 0, 0), dfo::SystemPropertyError);

    try {
        LtiSystem(MatrixXd::Zero(2, 2), MatrixXd::Zero(3, 1),
                  MatrixXd::Identity(1, 2), MatrixXd::Zero(1, 1),
                  MatrixXd::Zero(2, 1));
    } catch (const dfo::DimensionError& err) {
        CHECK(std::string(err.what()).find('B') != std::string::npos);
    }
}

TEST_CASE("one-step delay plant") {
    const LtiSystem sys = scalar_system(0.0, 1, 1, 0, 0);
    Signal u(1, 3);
    u << 1, 1, 1;
    const Signal w = Signal::Zero(1, 3);
    const auto traj = dfo::simulate(sys, VectorXd::Zero(1), u, w, 3);
    CHECK(traj.y(0, 0) == doctest::Approx(0.0));
    CHECK(traj.y(0, 1) == doctest::Approx(1.0));
    CHECK(traj.y(0, 2) == doctest::Approx(1.0));
    CHECK(traj.replay_residual(sys) == doctest::Approx(0.0));
}

TEST_CASE("geometric approach to the equilibrium") {
    const LtiSystem sys = scalar_system(0.5, 1, 1, 0, 0);
    const int H = 60;
    const Signal u = Signal::Ones(1, H);
    const Signal w = Signal::Zero(1, H);
    const auto traj = dfo::simulate(sys, VectorXd::Zero(1), u, w, H);
    // Strictly increasing until the limit saturates in double precision.
    for (int k = 0; k < 45; ++k) CHECK(traj.x(0, k) < traj.x(0, k + 1));
    CHECK(traj.x(0, H) == doctest::Approx(2.0).epsilon(1e-9));

    const auto eq = dfo::equilibrium_state(sys, VectorXd::Ones(1),
                                           VectorXd::Zero(1));
    CHECK(eq.x_bar(0) == doctest::Approx(2.0));
    CHECK(eq.y_bar(0) == doctest::Approx(2.0));
    CHECK_FALSE(eq.ill_conditioned);
}

TEST_CASE("simulation settles on the equilibrium oracle") {
    dfo::RandomSystemOptions opt;
    opt.n = 3;
    opt.m = 2;
    opt.p = 2;
    opt.r = 1;
    opt.rho_max = 0.6;
    const LtiSystem sys = dfo::random_system(opt, 7);

    const VectorXd u_bar = VectorXd::Constant(2, 0.8);
    const VectorXd w_bar = VectorXd::Constant(1, -0.3);
    const auto eq = dfo::equilibrium_state(sys, u_bar, w_bar);

    const int H = 50;
    Signal u(2, H);
    u.colwise() = u_bar;
    Signal w(1, H);
    w.colwise() = w_bar;
    const auto traj = dfo::simulate(sys, VectorXd::Zero(3), u, w, H);
    CHECK((traj.x.col(H) - eq.x_bar).norm() <= 1e-6);
}

TEST_CASE("equilibrium matches a long constant-input run at n = 4") {
    dfo::RandomSystemOptions opt;
    opt.n = 4;
    opt.m = 1;
    opt.p = 2;
    opt.r = 2;
    opt.rho_max = 0.8;
    const LtiSystem sys = dfo::random_system(opt, 21);

    const VectorXd u_bar = VectorXd::Constant(1, 1.0);
    const VectorXd w_bar = (VectorXd(2) << 0.2, -0.1).finished();
    const auto eq = dfo::equilibrium_state(sys, u_bar, w_bar);

    Signal u(1, 200);
    u.colwise() = u_bar;
    Signal w(2, 200);
    w.colwise() = w_bar;
    const auto traj = dfo::simulate(sys, VectorXd::Zero(4), u, w, 200);
    CHECK((traj.x.col(200) - eq.x_bar).norm() <= 1e-8);
}

TEST_CASE("zero inputs give the zero equilibrium") {
    const LtiSystem sys = scalar_system(0.5, 1, 1, 0.3, 0.7);
    const auto eq = dfo::equilibrium_state(sys, VectorXd::Zero(1),
                                           VectorXd::Zero(1));
    CHECK(eq.x_bar(0) == doctest::Approx(0.0));
    CHECK(eq.y_bar(0) == doctest::Approx(0.0));
}

TEST_CASE("steady-state gains") {
    SUBCASE("scalar closed form") {
        const auto tf = dfo::steady_state_transfer(scalar_system(0.5, 1, 1, 0, 0));
        CHECK(tf.G(0, 0) == doctest::Approx(2.0));
    }
    SUBCASE("A = 0 reduces to direct products") {
        MatrixXd A = MatrixXd::Zero(2, 2);
        MatrixXd B = (MatrixXd(2, 1) << 1, 2).finished();
        MatrixXd C = (MatrixXd(1, 2) << 3, 4).finished();
        MatrixXd D = scalar(0.5);
        MatrixXd E = (MatrixXd(2, 1) << -1, 1).finished();
        const LtiSystem sys(A, B, C, D, E);
        const auto tf = dfo::steady_state_transfer(sys);
        CHECK((tf.G - C * B).norm() == doctest::Approx(0.0));
        CHECK((tf.H - (D + C * E)).norm() == doctest::Approx(0.0));
    }
    SUBCASE("gains agree with the equilibrium oracle at n = 5") {
        dfo::RandomSystemOptions opt;
        opt.n = 5;
        opt.m = 3;
        opt.p = 2;
        opt.r = 2;
        const LtiSystem sys = dfo::random_system(opt, 33);
        const auto tf = dfo::steady_state_transfer(sys);
        const VectorXd u_bar = (VectorXd(3) << 0.5, -1.0, 2.0).finished();
        const VectorXd w_bar = (VectorXd(2) << 0.4, 0.9).finished();
        const auto eq = dfo::equilibrium_state(sys, u_bar, w_bar);
        CHECK((eq.y_bar - (tf.G * u_bar + tf.H * w_bar)).norm() <= 1e-10);
    }
}

TEST_CASE("near-marginal plants trigger the conditioning warning") {
    MatrixXd A = MatrixXd::Zero(2, 2);
    A(0, 0) = 1.0 - 1e-13;  // (I - A) mixes scales 1e-13 and 1
    const LtiSystem sys(A, MatrixXd::Ones(2, 1), MatrixXd::Identity(2, 2),
                        MatrixXd::Zero(2, 1), MatrixXd::Ones(2, 1));
    const auto eq = dfo::equilibrium_state(sys, VectorXd::Ones(1),
                                           VectorXd::Zero(1));
    CHECK(eq.ill_conditioned);
    CHECK(dfo::steady_state_transfer(sys).ill_conditioned);

    const auto healthy = dfo::equilibrium_state(
        scalar_system(0.5, 1, 1, 0, 0), VectorXd::Ones(1), VectorXd::Zero(1));
    CHECK_FALSE(healthy.ill_conditioned);
}

TEST_CASE("discrete Lyapunov solve") {
    SUBCASE("scalar closed form P = Q / (1 - A^2)") {
        const auto cert = dfo::solve_discrete_lyapunov(
            scalar_system(0.5, 1, 1, 0, 0), scalar(1.0));
        CHECK(cert.P(0, 0) == doctest::Approx(4.0 / 3.0));
    }
    SUBCASE("A = 0 gives P = Q") {
        MatrixXd Q = (MatrixXd(2, 2) << 2, 0.5, 0.5, 1).finished();
        const LtiSystem sys(MatrixXd::Zero(2, 2), MatrixXd::Ones(2, 1),
                            MatrixXd::Identity(2, 2), MatrixXd::Zero(2, 1),
                            MatrixXd::Ones(2, 1));
        const auto cert = dfo::solve_discrete_lyapunov(sys, Q);
        CHECK((cert.P - Q).norm() <= 1e-12);
    }
    SUBCASE("residual and positivity at n = 3") {
        dfo::RandomSystemOptions opt;
        opt.n = 3;
        const LtiSystem sys = dfo::random_system(opt, 5);
        const auto cert =
            dfo::solve_discrete_lyapunov(sys, MatrixXd::Identity(3, 3));
        CHECK(cert.residual <= 1e-9 * cert.Q.norm());
        CHECK(cert.lambda_min_P > 0.0);
        CHECK(cert.lambda_min_P <= cert.lambda_max_P);
    }
    SUBCASE("non-SPD Q rejected") {
        const LtiSystem sys = scalar_system(0.5, 1, 1, 0, 0);
        CHECK_THROWS_AS(dfo::solve_discrete_lyapunov(sys, scalar(-1.0)),
                        dfo::NumericalError);
    }
    SUBCASE("quadratic-form decrease identity") {
        dfo::RandomSystemOptions opt;
        opt.n = 4;
        const LtiSystem sys = dfo::random_system(opt, 11);
        const auto cert =
            dfo::solve_discrete_lyapunov(sys, MatrixXd::Identity(4, 4));
        std::mt19937_64 rng(3);
        std::normal_distribution<double> gauss;
        for (int trial = 0; trial < 20; ++trial) {
            VectorXd x(4);
            for (int i = 0; i < 4; ++i) x(i) = gauss(rng);
            const VectorXd x_next = sys.A() * x;
            const double decrease =
                x_next.dot(cert.P * x_next) - x.dot(cert.P * x);
            CHECK(decrease == doctest::Approx(-x.dot(cert.Q * x)).epsilon(1e-9));
        }
    }
}

TEST_CASE("structural indices") {
    SUBCASE("full state output gives observability index 1") {
        dfo::RandomSystemOptions opt;
        opt.n = 3;
        opt.p = 3;
        LtiSystem base = dfo::random_system(opt, 2);
        const LtiSystem sys(base.A(), base.B(), MatrixXd::Identity(3, 3),
                            MatrixXd::Zero(3, 1), base.E());
        CHECK(dfo::structural_indices(sys).observability == 1);
    }
    SUBCASE("scalar system has both indices 1") {
        const auto idx = dfo::structural_indices(scalar_system(0.5, 1, 1, 0, 0));
        CHECK(idx.observability == 1);
        CHECK(idx.controllability == 1);
    }
    SUBCASE("single-output companion form needs full depth") {
        MatrixXd A(3, 3);
        A << 0, 1, 0, 0, 0, 1, 0.06, -0.47, 1.2;
        MatrixXd C = (MatrixXd(1, 3) << 1, 0, 0).finished();
        const LtiSystem sys(A, MatrixXd::Ones(3, 1), C, MatrixXd::Zero(1, 1),
                            MatrixXd::Ones(3, 1));

        // Brute-force oracle: stack C A^k rows until the rank fills up.
        int nu_oracle = 0;
        MatrixXd obs(0, 3);
        MatrixXd row = C;
        for (int k = 1; k <= 3; ++k) {
            obs.conservativeResize(obs.rows() + 1, Eigen::NoChange);
            obs.row(obs.rows() - 1) = row;
            if (Eigen::FullPivLU<MatrixXd>(obs).rank() == 3) {
                nu_oracle = k;
                break;
            }
            row = row * A;
        }
        CHECK(nu_oracle == 3);
        CHECK(dfo::structural_indices(sys).observability == nu_oracle);
    }
    SUBCASE("unobservable and uncontrollable plants are typed errors") {
        const LtiSystem dead_output = scalar_system(0.5, 1, 0, 0, 0);
        CHECK_THROWS_AS(dfo::structural_indices(dead_output),
                        dfo::SystemPropertyError);
        const LtiSystem dead_input = scalar_system(0.5, 0, 1, 0, 0);
        CHECK_THROWS_AS(dfo::structural_indices(dead_input),
                        dfo::SystemPropertyError);
    }
}

TEST_CASE("state converges at the spectral rate, up to conditioning") {
    dfo::RandomSystemOptions opt;
    opt.n = 4;
    const LtiSystem sys = dfo::random_system(opt, 17);
    const auto eq = dfo::equilibrium_state(sys, VectorXd::Ones(1),
                                           VectorXd::Zero(1));
    Signal u = Signal::Ones(1, 80);
    Signal w = Signal::Zero(1, 80);
    VectorXd x0 = VectorXd::Constant(4, 3.0);
    const auto traj = dfo::simulate(sys, x0, u, w, 80);
    const double rho = sys.spectral_radius();
    const double start = (x0 - eq.x_bar).norm();
    for (int k = 10; k <= 80; k += 10) {
        const double lhs = (traj.x.col(k) - eq.x_bar).norm();
        CHECK(lhs <= 1e3 * std::pow(rho, k) * start);
    }
}

TEST_CASE("plant JSON round trip") {
    dfo::RandomSystemOptions opt;
    opt.n = 3;
    opt.m = 2;
    opt.p = 2;
    opt.r = 2;
    const LtiSystem sys = dfo::random_system(opt, 9);
    const LtiSystem back = dfo::lti_from_json(dfo::lti_to_json(sys));
    CHECK((back.A() - sys.A()).norm() == 0.0);
    CHECK((back.B() - sys.B()).norm() == 0.0);
    CHECK((back.C() - sys.C()).norm() == 0.0);
    CHECK((back.D() - sys.D()).norm() == 0.0);
    CHECK((back.E() - sys.E()).norm() == 0.0);

    CHECK_THROWS_AS(dfo::lti_from_json(nlohmann::json{{"A", {{0.5}}}}),
                    dfo::ConfigError);
}

TEST_CASE("random system generator hits the requested spectral band") {
    dfo::RandomSystemOptions opt;
    opt.n = 5;
    opt.m = 2;
    opt.p = 2;
    for (uint64_t seed = 0; seed < 8; ++seed) {
        const LtiSystem sys = dfo::random_system(opt, seed);
        CHECK(sys.spectral_radius() >= 0.3 - 1e-9);
        CHECK(sys.spectral_radius() <= 0.9 + 1e-9);
        CHECK_NOTHROW(dfo::structural_indices(sys));
    }
}

TEST_CASE("disturbance processes") {
    SUBCASE("realizations are deterministic given the seed") {
        const auto p = DisturbanceProcess::iid_bounded(
            VectorXd::Constant(2, -1.0), VectorXd::Constant(2, 1.0), 42);
        CHECK((p.realize(30) - p.realize(30)).norm() == 0.0);
        CHECK(p.realize(30).cwiseAbs().maxCoeff() <= 1.0);
        CHECK((p.mean(7) - VectorXd::Zero(2)).norm() == 0.0);
    }
    SUBCASE("piecewise-constant dwell structure") {
        const auto p = DisturbanceProcess::piecewise_constant(
            VectorXd::Constant(1, -2.0), VectorXd::Constant(1, 2.0), 5, 3);
        const Signal w = p.realize(20);
        for (int k = 0; k < 20; ++k)
            CHECK(w(0, k) == w(0, (k / 5) * 5));
        CHECK(w(0, 0) != w(0, 5));  // new draw per dwell, a.s. for this seed
    }
    SUBCASE("scripted sequences must cover the horizon") {
        const auto p = DisturbanceProcess::scripted(Signal::Ones(1, 4));
        CHECK_THROWS_AS(p.realize(5), dfo::DimensionError);
        CHECK((p.realize(4) - Signal::Ones(1, 4)).norm() == 0.0);
    }
    SUBCASE("constant process is its own mean") {
        const auto p = DisturbanceProcess::constant(
            (VectorXd(2) << 0.5, -0.25).finished());
        CHECK((p.realize(3).col(2) - p.mean(2)).norm() == 0.0);
    }
}
