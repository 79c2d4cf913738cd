#include <doctest.h>

#include "oracles.hpp"
#include "spinsqueeze/collective_spin.hpp"
#include "spinsqueeze/errors.hpp"
#include "spinsqueeze/lindblad_engine.hpp"

#include <cmath>
#include <complex>
#include <vector>

using namespace sqz;
using complexd = std::complex<double>;

namespace {

std::vector<double> grid(double t_max, int n) {
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = t_max * i / (n - 1);
    return t;
}

Eigen::MatrixXcd pure(const Eigen::VectorXcd& psi) { return psi * psi.adjoint(); }

} // namespace

TEST_CASE("zero-rate twisting evolution matches the diagonal-phase solution") {
    const int n = 20;
    const double lambda = 1.0;
    const SpinState css = coherent_spin_state_x(n);
    const LindbladSpec spec = make_oat_spec(n, lambda, 0.0, 0.0, 0.0);
    const auto times = grid(0.5, 11);

    EvolveOptions opts;
    opts.ode.rtol = 1e-10;
    opts.ode.atol = 1e-13;
    const Trajectory traj = evolve_lindblad(spec, pure(css.amplitudes), times, opts);
    REQUIRE(traj.states.size() == times.size());
    CHECK(traj.warnings.empty());

    for (std::size_t i = 0; i < times.size(); ++i) {
        const Eigen::VectorXcd ref =
            oracle::twisted_state(css.amplitudes, n, lambda, times[i]);
        CHECK(trace_distance(traj.states[i], pure(ref)) < 1e-6);
    }
}

TEST_CASE("collective dephasing damps coherences as exp(-gamma (m-m')^2 t / 2)") {
    const int n = 6;
    const double gamma_s = 0.8;
    const SpinState css = coherent_spin_state_x(n);
    const Eigen::MatrixXcd rho0 = pure(css.amplitudes);
    const LindbladSpec spec = make_oat_spec(n, 0.0, gamma_s, 0.0, 0.0);
    const auto times = grid(0.6, 4);

    EvolveOptions opts;
    opts.ode.rtol = 1e-10;
    opts.ode.atol = 1e-13;
    const Trajectory traj = evolve_lindblad(spec, rho0, times, opts);

    const Eigen::VectorXd m = dicke_m_values(n);
    for (std::size_t k = 0; k < times.size(); ++k) {
        for (int a = 0; a <= n; ++a)
            for (int b = 0; b <= n; ++b) {
                const double dm = m(a) - m(b);
                const complexd expected =
                    rho0(a, b) * std::exp(-0.5 * gamma_s * dm * dm * times[k]);
                CHECK(std::abs(traj.states[k](a, b) - expected) < 1e-8);
            }
    }
}

TEST_CASE("single spin-1/2 damping follows the closed-form relaxation") {
    const int n = 1;
    const double big_gamma = 0.7;
    const SpinState css = coherent_spin_state_x(n);
    const DickeOperators ops = build_dicke_operators(n);
    const auto times = grid(3.0, 7);

    EvolveOptions opts;
    opts.ode.rtol = 1e-10;
    opts.ode.atol = 1e-13;
    opts.observables = {{"jz", ops.jz}, {"jx", ops.jx}};

    SUBCASE("vacuum bath") {
        const LindbladSpec spec = make_oat_spec(n, 0.0, 0.0, big_gamma, 0.0);
        const Trajectory traj = evolve_lindblad(spec, pure(css.amplitudes), times, opts);
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double t = times[i];
            CHECK(traj.expectations(static_cast<Eigen::Index>(i), 0) ==
                  doctest::Approx(-0.5 * (1.0 - std::exp(-big_gamma * t))).epsilon(1e-7));
            CHECK(traj.expectations(static_cast<Eigen::Index>(i), 1) ==
                  doctest::Approx(0.5 * std::exp(-0.5 * big_gamma * t)).epsilon(1e-7));
        }
    }

    SUBCASE("thermal bath") {
        const double n_th = 2.0;
        const double rate = big_gamma * (2.0 * n_th + 1.0);
        const double jz_ss = -0.5 / (2.0 * n_th + 1.0);
        const LindbladSpec spec = make_oat_spec(n, 0.0, 0.0, big_gamma, n_th);
        const Trajectory traj = evolve_lindblad(spec, pure(css.amplitudes), times, opts);
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double t = times[i];
            CHECK(traj.expectations(static_cast<Eigen::Index>(i), 0) ==
                  doctest::Approx(jz_ss * (1.0 - std::exp(-rate * t))).epsilon(1e-7));
        }
    }
}

TEST_CASE("twisting spec wires the channels by rate") {
    const DickeOperators ops = build_dicke_operators(4);

    const LindbladSpec closed = make_oat_spec(4, 2.0, 0.0, 0.0, 0.0);
    CHECK(closed.channels.empty());
    CHECK((closed.hamiltonian + 2.0 * ops.jz_sq).cwiseAbs().maxCoeff() < 1e-14);

    const LindbladSpec framed = make_oat_spec(4, 2.0, 0.0, 0.0, 0.0, 0.3);
    CHECK((framed.hamiltonian + 2.0 * ops.jz_sq - 0.3 * ops.jz).cwiseAbs().maxCoeff() <
          1e-14);

    const LindbladSpec dephasing = make_oat_spec(4, 2.0, 0.05, 0.0, 0.0);
    REQUIRE(dephasing.channels.size() == 1);
    CHECK(dephasing.channels[0].rate == 0.05);
    CHECK((dephasing.channels[0].op - ops.jz).cwiseAbs().maxCoeff() == 0.0);

    // Cold bath keeps the heating channel present with rate exactly zero, so
    // downstream bookkeeping sees a fixed channel layout whenever damping is on.
    const LindbladSpec cold = make_oat_spec(4, 2.0, 0.0, 0.01, 0.0);
    REQUIRE(cold.channels.size() == 2);
    CHECK(cold.channels[0].rate == 0.01);
    CHECK(cold.channels[1].rate == 0.0);

    const double n_th = 1.5;
    const LindbladSpec warm = make_oat_spec(4, 2.0, 0.0, 0.01, n_th);
    REQUIRE(warm.channels.size() == 2);
    CHECK(warm.channels[0].rate == doctest::Approx(0.025).epsilon(1e-14));
    CHECK(warm.channels[1].rate == doctest::Approx(0.015).epsilon(1e-14));
    CHECK((warm.channels[0].op - ops.jm).cwiseAbs().maxCoeff() == 0.0);
    CHECK((warm.channels[1].op - ops.jp).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(make_oat_spec(4, 1.0, -0.1, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_oat_spec(4, 1.0, 0.0, 0.0, -1.0), std::invalid_argument);
}

TEST_CASE("evolution input validation") {
    const SpinState css = coherent_spin_state_x(2);
    const LindbladSpec spec = make_oat_spec(2, 1.0, 0.0, 0.0, 0.0);

    CHECK_THROWS_AS(evolve_lindblad(spec, pure(css.amplitudes), {0.5, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(evolve_lindblad(spec, 2.0 * pure(css.amplitudes), {0.0, 1.0}),
                    std::invalid_argument);

    LindbladSpec skewed = spec;
    skewed.hamiltonian(0, 2) += complexd(0.0, 0.5);
    CHECK_THROWS_AS(evolve_lindblad(skewed, pure(css.amplitudes), {0.0, 1.0}),
                    std::invalid_argument);

    LindbladSpec bad_channel = spec;
    bad_channel.channels.push_back({Eigen::MatrixXcd::Zero(2, 2), 1.0});
    CHECK_THROWS_AS(evolve_lindblad(bad_channel, pure(css.amplitudes), {0.0, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("state functionals on known pairs") {
    Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(2);
    e0(0) = 1.0;
    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(2);
    e1(1) = 1.0;
    Eigen::VectorXcd plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);

    SUBCASE("fidelity") {
        // Pure states reduce to the overlap magnitude (root convention).
        CHECK(state_fidelity(pure(e0), pure(e0)) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(state_fidelity(pure(e0), pure(e1)) == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(state_fidelity(pure(e0), pure(plus)) ==
              doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));

        const Eigen::MatrixXcd mixed = 0.5 * Eigen::MatrixXcd::Identity(2, 2);
        CHECK(state_fidelity(mixed, pure(plus)) ==
              doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
        CHECK(state_fidelity(mixed, pure(plus)) ==
              doctest::Approx(state_fidelity(pure(plus), mixed)).epsilon(1e-10));
    }

    SUBCASE("trace distance") {
        CHECK(trace_distance(pure(e0), pure(e0)) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(trace_distance(pure(e0), pure(e1)) == doctest::Approx(1.0).epsilon(1e-12));
        Eigen::MatrixXcd sigma = Eigen::MatrixXcd::Zero(2, 2);
        sigma(0, 0) = 0.75;
        sigma(1, 1) = 0.25;
        CHECK(trace_distance(pure(e0), sigma) == doctest::Approx(0.25).epsilon(1e-12));
    }

    SUBCASE("purity") {
        CHECK(purity(pure(plus)) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(purity(0.25 * Eigen::MatrixXcd::Identity(4, 4)) ==
              doctest::Approx(0.25).epsilon(1e-12));
    }
}

TEST_CASE("z rotation realigns the mean spin without touching the spectrum") {
    const int n = 8;
    const SpinState css = coherent_spin_state_x(n);
    const Eigen::VectorXd m = dicke_m_values(n);
    const DickeOperators ops = build_dicke_operators(n);
    const double j = 0.5 * n;

    const Eigen::MatrixXcd rho = pure(css.amplitudes);
    const Eigen::MatrixXcd turned = rotate_about_z(rho, 0.7, m);
    CHECK(std::abs(turned.trace() - complexd(1.0, 0.0)) < 1e-12);
    CHECK(purity(turned) == doctest::Approx(1.0).epsilon(1e-12));

    // Conjugation by exp(i a Jz) moves the mean-spin azimuth from 0 to -a.
    const double angle = mean_spin_angle(turned, ops.jx, ops.jy);
    CHECK(angle == doctest::Approx(-0.7).epsilon(1e-10));
    CHECK(real_expectation(turned, ops.jx) == doctest::Approx(j * std::cos(0.7)).epsilon(1e-10));

    const Eigen::MatrixXcd back = rotate_about_z(turned, angle, m);
    CHECK(real_expectation(back, ops.jx) == doctest::Approx(j).epsilon(1e-10));
    CHECK(std::abs(real_expectation(back, ops.jy)) < 1e-9);
    CHECK((back - rho).cwiseAbs().maxCoeff() < 1e-10);

    const Eigen::VectorXcd psi_turned = rotate_vector_about_z(css.amplitudes, 0.7, m);
    CHECK((pure(psi_turned) - turned).cwiseAbs().maxCoeff() < 1e-12);

    CHECK_THROWS_AS(rotate_about_z(rho, 0.1, Eigen::VectorXd::Zero(3)),
                    std::invalid_argument);
}

TEST_CASE("phonon partial trace recovers the spin factor of a product state") {
    const int spin_dim = 3;
    const int phonon_dim = 4;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Random(spin_dim, spin_dim);
    Eigen::MatrixXcd spin = a * a.adjoint();
    spin /= spin.trace();
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Random(phonon_dim, phonon_dim);
    Eigen::MatrixXcd phonon = b * b.adjoint();
    phonon /= phonon.trace();

    Eigen::MatrixXcd joint =
        Eigen::MatrixXcd::Zero(spin_dim * phonon_dim, spin_dim * phonon_dim);
    for (int s = 0; s < spin_dim; ++s)
        for (int s2 = 0; s2 < spin_dim; ++s2)
            for (int p = 0; p < phonon_dim; ++p)
                for (int p2 = 0; p2 < phonon_dim; ++p2)
                    joint(s * phonon_dim + p, s2 * phonon_dim + p2) =
                        spin(s, s2) * phonon(p, p2);

    const Eigen::MatrixXcd reduced = partial_trace_phonon(joint, spin_dim, phonon_dim);
    CHECK((reduced - spin).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(partial_trace_phonon(joint, 4, 4), std::invalid_argument);
}

TEST_CASE("beam-splitter exchange conserves total excitation number") {
    const int n = 4;
    const SpinState css = coherent_spin_state_x(n);
    Eigen::VectorXcd vacuum = Eigen::VectorXcd::Zero(7);
    vacuum(0) = 1.0;
    const auto times = grid(3.0, 31);

    const TavisCummingsResult res =
        evolve_tavis_cummings(n, 0.3, 1.5, 6, css.amplitudes, vacuum, times);
    CHECK(res.dispersive_ratio == doctest::Approx(0.2).epsilon(1e-12));

    REQUIRE(res.joint.observable_names.size() >= 3);
    Eigen::Index exc_col = -1;
    for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(res.joint.observable_names.size()); ++c)
        if (res.joint.observable_names[static_cast<std::size_t>(c)] == "excitation")
            exc_col = c;
    REQUIRE(exc_col >= 0);

    const double initial = res.joint.expectations(0, exc_col);
    CHECK(initial == doctest::Approx(0.0).epsilon(1e-9)); // <Jz> = 0, vacuum phonon
    for (Eigen::Index i = 0; i < res.joint.expectations.rows(); ++i)
        CHECK(std::abs(res.joint.expectations(i, exc_col) - initial) < 1e-6);

    REQUIRE(res.reduced_spin.states.size() == times.size());
    for (const auto& rho : res.reduced_spin.states) {
        const StateCheck chk = check_density_matrix(rho);
        CHECK(chk.trace_error < 1e-7);
        CHECK(chk.hermiticity_error < 1e-9);
    }
}

TEST_CASE("phonon truncation is guarded at both ends") {
    const int n = 4;
    const SpinState css = coherent_spin_state_x(n);

    // Initial state touching the guard levels is rejected up front.
    Eigen::VectorXcd top = Eigen::VectorXcd::Zero(5);
    top(4) = 1.0;
    CHECK_THROWS_AS(
        evolve_tavis_cummings(n, 0.1, 1.0, 4, css.amplitudes, top, grid(1.0, 5)),
        TruncationError);

    // Resonant exchange from vacuum climbs past a too-small cutoff mid-run.
    Eigen::VectorXcd vacuum = Eigen::VectorXcd::Zero(3);
    vacuum(0) = 1.0;
    CHECK_THROWS_AS(
        evolve_tavis_cummings(n, 1.0, 0.0, 2, css.amplitudes, vacuum, grid(2.0, 9)),
        TruncationError);

    CHECK_THROWS_AS(
        evolve_tavis_cummings(n, 1.0, 1.0, 1, css.amplitudes, vacuum, grid(1.0, 5)),
        std::invalid_argument);
    CHECK_THROWS_AS(
        evolve_tavis_cummings(n, 1.0, 1.0, 4, 2.0 * css.amplitudes, vacuum, grid(1.0, 5)),
        std::invalid_argument);
}
