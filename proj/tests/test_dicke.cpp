#include <doctest.h>

#include "oracles.hpp"
#include "spinsqueeze/collective_spin.hpp"
#include "spinsqueeze/squeezing_analytics.hpp"

#include <cmath>

using namespace sqz;

namespace {
double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }
} // namespace

TEST_CASE("ladder coefficients and m grid") {
    const int n = 7;
    const double j = 3.5;
    const Eigen::VectorXd m = dicke_m_values(n);
    REQUIRE(m.size() == n + 1);
    CHECK(m(0) == doctest::Approx(-j));
    CHECK(m(n) == doctest::Approx(j));
    for (int i = 0; i < n; ++i) CHECK(m(i + 1) - m(i) == doctest::Approx(1.0));

    const Eigen::VectorXd c = dicke_ladder_coefficients(n);
    for (int i = 0; i < n; ++i)
        CHECK(c(i) == doctest::Approx(oracle::ladder_c(j, m(i))).epsilon(1e-14));
}

TEST_CASE("operator matrices match the independent construction") {
    for (const int n : {1, 2, 5, 12}) {
        const DickeOperators ops = build_dicke_operators(n);
        const oracle::DenseOps ref = oracle::dense_ops(n);
        CHECK(max_abs(ops.jx - ref.jx) < 1e-13);
        CHECK(max_abs(ops.jy - ref.jy) < 1e-13);
        CHECK(max_abs(ops.jz - ref.jz) < 1e-13);
        CHECK(max_abs(ops.jp - ref.jp) < 1e-13);
        CHECK(max_abs(ops.jm - ref.jm) < 1e-13);
        CHECK(max_abs(ops.jx_sq - ref.jx * ref.jx) < 1e-12);
        CHECK(max_abs(ops.jxy_sym - 0.5 * (ref.jx * ref.jy + ref.jy * ref.jx)) < 1e-12);
    }
}

TEST_CASE("su(2) commutators close to machine precision up to N = 30") {
    const std::complex<double> i1(0.0, 1.0);
    for (const int n : {2, 10, 21, 30}) {
        const DickeOperators ops = build_dicke_operators(n);
        CHECK(max_abs(ops.jx * ops.jy - ops.jy * ops.jx - i1 * ops.jz) < 1e-12);
        CHECK(max_abs(ops.jy * ops.jz - ops.jz * ops.jy - i1 * ops.jx) < 1e-12);
        CHECK(max_abs(ops.jz * ops.jx - ops.jx * ops.jz - i1 * ops.jy) < 1e-12);
    }
}

TEST_CASE("casimir is J(J+1) on the symmetric sector") {
    for (const int n : {1, 4, 15}) {
        const DickeOperators ops = build_dicke_operators(n);
        const double j = 0.5 * n;
        const Eigen::MatrixXcd expected =
            j * (j + 1.0) * Eigen::MatrixXcd::Identity(n + 1, n + 1);
        CHECK(max_abs(ops.j2 - expected) < 1e-11);
    }
}

TEST_CASE("coherent state along +x has textbook moments") {
    for (const int n : {2, 10, 40}) {
        const DickeOperators ops = build_dicke_operators(n);
        const SpinState css = coherent_spin_state_x(n);
        const double j = 0.5 * n;
        const Eigen::MatrixXcd rho = css.amplitudes * css.amplitudes.adjoint();
        CHECK(std::abs(oracle::real_exp(rho, ops.jx) - j) < 1e-10);
        CHECK(std::abs(oracle::real_exp(rho, ops.jy)) < 1e-10);
        CHECK(std::abs(oracle::real_exp(rho, ops.jz)) < 1e-10);
        CHECK(std::abs(oracle::real_exp(rho, ops.jy_sq) - 0.5 * j) < 1e-10);
        CHECK(std::abs(oracle::real_exp(rho, ops.jz_sq) - 0.5 * j) < 1e-10);

        const SqueezingPoint pt = xi_from_density(rho, ops);
        CHECK(std::abs(pt.xi2 - 1.0) < 1e-10);
    }
}

TEST_CASE("coherent state amplitudes stay normalized at large N") {
    const SpinState css = coherent_spin_state_x(1000);
    CHECK(std::abs(css.amplitudes.norm() - 1.0) < 1e-12);
    const Eigen::VectorXcd ref = oracle::css_x(1000);
    CHECK((css.amplitudes - ref).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("construction limits are enforced") {
    CHECK_THROWS_AS(build_dicke_operators(0), std::invalid_argument);
    CHECK_THROWS_AS(build_dicke_operators(kMaxFullMatrixSpins + 1), std::invalid_argument);
    CHECK_THROWS_AS(dicke_m_values(0), std::invalid_argument);
    CHECK_THROWS_AS(coherent_spin_state_x(-3), std::invalid_argument);
}
