// Block-Hankel construction, excitation checks and difference signals.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <dfo/hankel.hpp>
#include <dfo/lti_system.hpp>
#include <dfo/random_system.hpp>

using dfo::Signal;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_CASE("scalar Hankel matrix by definition") {
    Signal z(1, 4);
    z << 1, 2, 3, 4;
    const auto H = dfo::build_hankel(z, 2, 3);
    MatrixXd expect(2, 3);
    expect << 1, 2, 3, 2, 3, 4;
    CHECK((H.matrix() - expect).norm() == 0.0);

    CHECK((H.block_row(1) - expect.row(0)).norm() == 0.0);
    CHECK((H.block_row(2) - expect.row(1)).norm() == 0.0);
    CHECK_THROWS_AS(H.block_row(0), dfo::DimensionError);
    CHECK_THROWS_AS(H.block_row(3), dfo::DimensionError);
}

TEST_CASE("depth one lays the signal out as columns") {
    const Signal z = dfo::random_uniform_signal(3, 7, -1.0, 1.0, 5);
    const auto H = dfo::build_hankel(z, 1);
    CHECK((H.matrix() - z).norm() == 0.0);
}

TEST_CASE("vector-valued blocks match the index rule") {
    const Signal z = dfo::random_uniform_signal(2, 5, -2.0, 2.0, 6);
    const auto H = dfo::build_hankel(z, 2, 2);
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j)
            for (int d = 0; d < 2; ++d)
                CHECK(H.matrix()((i - 1) * 2 + d, j - 1) ==
                      z(d, i + j - 2));
}

TEST_CASE("block rows equal Hankels of shifted signals") {
    const Signal z = dfo::random_uniform_signal(2, 9, -1.0, 1.0, 8);
    const int t = 3;
    const int q = 5;
    const auto H = dfo::build_hankel(z, t, q);
    for (int i = 1; i <= t; ++i) {
        const Signal shifted = z.middleCols(i - 1, z.cols() - (i - 1));
        const auto row = dfo::build_hankel(shifted, 1, q);
        CHECK((H.block_row(i) - row.matrix()).norm() == 0.0);
    }
}

TEST_CASE("signal too short for the requested window") {
    const Signal z = dfo::random_uniform_signal(1, 4, -1.0, 1.0, 2);
    CHECK_THROWS_AS(dfo::build_hankel(z, 3, 3), dfo::DimensionError);
}

TEST_CASE("persistency of excitation") {
    SUBCASE("constant nonzero scalar signal is rank one") {
        const auto res =
            dfo::is_persistently_exciting(Signal::Ones(1, 10), 2);
        CHECK_FALSE(res.excited);
        CHECK(res.achieved_rank == 1);
    }
    SUBCASE("zero signal has rank zero") {
        const auto res =
            dfo::is_persistently_exciting(Signal::Zero(1, 10), 2);
        CHECK_FALSE(res.excited);
        CHECK(res.achieved_rank == 0);
    }
    SUBCASE("iid uniform signal is exciting") {
        const Signal z = dfo::random_uniform_signal(1, 20, -1.0, 1.0, 4);
        const auto res = dfo::is_persistently_exciting(z, 3);
        CHECK(res.excited);
        CHECK(res.achieved_rank == 3);
    }
    SUBCASE("too-short signals report the width obstruction") {
        const Signal z = dfo::random_uniform_signal(2, 6, -1.0, 1.0, 4);
        const auto res = dfo::is_persistently_exciting(z, 3);
        CHECK_FALSE(res.excited);
        CHECK(res.diagnostic.find("q") != std::string::npos);
    }
}

TEST_CASE("difference signal") {
    SUBCASE("by definition") {
        Signal z(1, 3);
        z << 1, 2, 4;
        const Signal d = dfo::difference_signal(z);
        CHECK(d.cols() == 2);
        CHECK(d(0, 0) == doctest::Approx(1.0));
        CHECK(d(0, 1) == doctest::Approx(2.0));
    }
    SUBCASE("constant signals difference to zero") {
        const Signal d = dfo::difference_signal(Signal::Constant(2, 5, 0.7));
        CHECK(d.norm() == 0.0);
    }
    SUBCASE("cumulative sums telescope back") {
        const Signal z = dfo::random_uniform_signal(3, 12, -1.0, 1.0, 9);
        const Signal d = dfo::difference_signal(z);
        VectorXd acc = z.col(0);
        for (int k = 0; k < d.cols(); ++k) {
            acc += d.col(k);
            CHECK((acc - z.col(k + 1)).norm() <= 1e-14);
        }
    }
    SUBCASE("needs two samples") {
        CHECK_THROWS_AS(dfo::difference_signal(Signal::Ones(1, 1)),
                        dfo::DimensionError);
    }
}

TEST_CASE("excited inputs span the expected rank and behavior") {
    dfo::RandomSystemOptions opt;
    opt.n = 3;
    opt.m = 2;
    opt.p = 2;
    opt.r = 1;
    const dfo::LtiSystem sys = dfo::random_system(opt, 12);
    const int n = opt.n;
    const int m = opt.m;
    const int L = 3;

    const int T = (m + 1) * (n + L) + 6;
    const Signal u = dfo::random_uniform_signal(m, T, -1.0, 1.0, 13);
    const Signal w = Signal::Zero(1, T);
    const auto traj = dfo::simulate(sys, VectorXd::Zero(n), u, w, T);
    REQUIRE(dfo::is_persistently_exciting(u, n + L).excited);

    const int q = T - L + 1;
    const auto U = dfo::build_hankel(u, L, q);
    const auto X = dfo::build_hankel(traj.x.leftCols(T), 1, q);

    SUBCASE("input and initial-state rows reach rank L m + n") {
        MatrixXd stacked(U.matrix().rows() + X.matrix().rows(), q);
        stacked << U.matrix(), X.matrix();
        Eigen::JacobiSVD<MatrixXd> svd(stacked);
        const double tol = 1e-9 * svd.singularValues()(0);
        int rank = 0;
        for (long i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()(i) > tol) ++rank;
        CHECK(rank == L * m + n);
    }

    SUBCASE("any short trajectory lies in the data span") {
        const auto Y = dfo::build_hankel(traj.y.leftCols(T), L, q);
        MatrixXd data(U.matrix().rows() + Y.matrix().rows(), q);
        data << U.matrix(), Y.matrix();

        // Fresh trajectory from a different initial state and input.
        const Signal u2 = dfo::random_uniform_signal(m, L, -1.0, 1.0, 99);
        VectorXd x0 = (VectorXd(3) << 1.0, -2.0, 0.5).finished();
        const auto fresh =
            dfo::simulate(sys, x0, u2, Signal::Zero(1, L), L);

        VectorXd target(L * m + L * opt.p);
        for (int k = 0; k < L; ++k) target.segment(k * m, m) = fresh.u.col(k);
        for (int k = 0; k < L; ++k)
            target.segment(L * m + k * opt.p, opt.p) = fresh.y.col(k);

        const VectorXd alpha =
            data.colPivHouseholderQr().solve(target);
        CHECK((data * alpha - target).norm() <= 1e-8);
    }
}
