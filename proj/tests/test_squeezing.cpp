#include <doctest.h>

#include "spinsqueeze/collective_spin.hpp"
#include "spinsqueeze/lindblad_engine.hpp"
#include "spinsqueeze/moment_dynamics.hpp"
#include "spinsqueeze/squeezing_analytics.hpp"
#include "spinsqueeze/units.hpp"

#include <cmath>
#include <limits>
#include <vector>

using namespace sqz;

namespace {

double quadrature_variance(double a, double b, double c, double alpha) {
    return 0.5 * a - 0.5 * b * std::cos(2.0 * alpha) + c * std::sin(2.0 * alpha);
}

SpinMomentRecord rotate_record_z(const SpinMomentRecord& rec, double phi) {
    Eigen::Matrix3d r;
    r << std::cos(phi), -std::sin(phi), 0.0, std::sin(phi), std::cos(phi), 0.0, 0.0, 0.0,
        1.0;
    const Eigen::Vector3d first = r * Eigen::Vector3d(rec.jx, rec.jy, rec.jz);
    Eigen::Matrix3d second;
    second << rec.jx2, rec.jxy, rec.jxz, rec.jxy, rec.jy2, rec.jyz, rec.jxz, rec.jyz,
        rec.jz2;
    const Eigen::Matrix3d rotated = r * second * r.transpose();
    SpinMomentRecord out;
    out.jx = first(0);
    out.jy = first(1);
    out.jz = first(2);
    out.jx2 = rotated(0, 0);
    out.jy2 = rotated(1, 1);
    out.jz2 = rotated(2, 2);
    out.jxy = rotated(0, 1);
    out.jxz = rotated(0, 2);
    out.jyz = rotated(1, 2);
    return out;
}

} // namespace

TEST_CASE("polarized state has unit squeezing parameter") {
    const int n = 12;
    const SqueezingPoint p = xi_squared(initial_moments(0.5 * n), n);
    CHECK(p.xi2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.v_min == doctest::Approx(0.25 * n).epsilon(1e-12));
    CHECK(p.a_sum == doctest::Approx(0.5 * n).epsilon(1e-12));
    CHECK(p.b_diff == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(xi_squared(initial_moments(1.0), 0), std::invalid_argument);
}

TEST_CASE("minimum quadrature variance matches a brute-force angle scan") {
    MomentVector m;
    m.jx = 4.0;
    m.jy2 = 3.0;
    m.jz2 = 1.0;
    m.jyz = 0.7;
    const int n = 10;
    const SqueezingPoint p = xi_squared(m, n);

    const double a = m.jy2 + m.jz2;
    const double b = m.jy2 - m.jz2;
    const double c = m.jyz;
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 20001; ++k) {
        const double alpha = units::pi * k / 20001.0;
        best = std::min(best, quadrature_variance(a, b, c, alpha));
    }
    CHECK(p.v_min == doctest::Approx(best).epsilon(1e-7));
    CHECK(p.v_min ==
          doctest::Approx(0.5 * (a - std::sqrt(b * b + 4.0 * c * c))).epsilon(1e-12));
    CHECK(p.xi2 == doctest::Approx(4.0 * p.v_min / n).epsilon(1e-12));

    // The reported angle actually attains the minimum.
    CHECK(quadrature_variance(a, b, c, p.alpha_min) == doctest::Approx(p.v_min).epsilon(1e-10));
    CHECK(p.alpha_min >= 0.0);
    CHECK(p.alpha_min < units::pi);
}

TEST_CASE("record realignment undoes an in-plane rotation") {
    SpinMomentRecord rec;
    rec.jx = 5.0;
    rec.jx2 = 25.2;
    rec.jy2 = 3.0;
    rec.jz2 = 1.0;
    rec.jyz = 0.7;

    MomentVector m;
    m.jx = rec.jx;
    m.jy2 = rec.jy2;
    m.jz2 = rec.jz2;
    m.jyz = rec.jyz;
    const SqueezingPoint direct = xi_squared(m, 10);

    for (const double phi : {0.0, 0.4, -1.1, 2.9}) {
        const SpinMomentRecord turned = rotate_record_z(rec, phi);
        const SqueezingPoint p = xi_from_record(turned, 10);
        CHECK(p.v_min == doctest::Approx(direct.v_min).epsilon(1e-10));
        CHECK(p.xi2 == doctest::Approx(direct.xi2).epsilon(1e-10));
    }

    // Without realignment the angle scan runs in the wrong plane and misses
    // the squeezed quadrature.
    const SpinMomentRecord tilted = rotate_record_z(rec, 1.2);
    const SqueezingPoint raw = xi_from_record(tilted, 10, false);
    CHECK(raw.v_min > 1.1 * direct.v_min);

    SpinMomentRecord lost;
    lost.jz = 5.0;
    lost.jz2 = 25.0;
    CHECK_THROWS_AS(xi_from_record(lost, 10), std::domain_error);
}

TEST_CASE("density-matrix and record extraction agree on a twisted state") {
    const int n = 20;
    const DickeOperators ops = build_dicke_operators(n);
    const SpinState css = coherent_spin_state_x(n);
    const LindbladSpec spec = make_oat_spec(n, 1.0, 0.0, 0.0, 0.0);
    const std::vector<double> times{0.0, 0.05, 0.1};

    const Trajectory traj =
        evolve_lindblad(spec, css.amplitudes * css.amplitudes.adjoint(), times);
    REQUIRE(traj.states.size() == 3);

    for (const auto& rho : traj.states) {
        const SqueezingPoint via_density = xi_from_density(rho, ops);

        SpinMomentRecord rec;
        rec.jx = real_expectation(rho, ops.jx);
        rec.jy = real_expectation(rho, ops.jy);
        rec.jz = real_expectation(rho, ops.jz);
        rec.jx2 = real_expectation(rho, ops.jx_sq);
        rec.jy2 = real_expectation(rho, ops.jy_sq);
        rec.jz2 = real_expectation(rho, ops.jz_sq);
        rec.jxy = real_expectation(rho, ops.jxy_sym);
        rec.jxz = real_expectation(rho, ops.jxz_sym);
        rec.jyz = real_expectation(rho, ops.jyz_sym);
        const SqueezingPoint via_record = xi_from_record(rec, n);

        CHECK(via_density.xi2 == doctest::Approx(via_record.xi2).epsilon(1e-9));
        CHECK(via_density.v_min == doctest::Approx(via_record.v_min).epsilon(1e-9));
    }
}

TEST_CASE("ideal twisting optimum formulas") {
    const IdealOptimum opt = ideal_optimum(500.0, 1.0);
    CHECK(opt.t_min == doctest::Approx(0.0120094).epsilon(1e-5));
    CHECK(opt.xi2_opt == doctest::Approx(0.0104004).epsilon(1e-5));
    CHECK(opt.large_j_valid);

    // The optimum time scales inversely with the twisting rate; the depth is
    // rate-independent.
    const IdealOptimum fast = ideal_optimum(500.0, 4.0);
    CHECK(fast.t_min == doctest::Approx(opt.t_min / 4.0).epsilon(1e-12));
    CHECK(fast.xi2_opt == doctest::Approx(opt.xi2_opt).epsilon(1e-12));

    CHECK_FALSE(ideal_optimum(5.0, 1.0).large_j_valid);
    CHECK_THROWS_AS(ideal_optimum(500.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ideal_optimum(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("short-time transverse variance and its validity flags") {
    const double j = 500.0;
    const IdealOptimum opt = ideal_optimum(j, 1.0);
    const ShortTimeVariance v = short_time_variance(j, 1.0, opt.t_min);
    CHECK(v.alpha == doctest::Approx(j * opt.t_min).epsilon(1e-12));
    CHECK(v.beta == doctest::Approx(j * opt.t_min * opt.t_min).epsilon(1e-12));
    CHECK(v.alpha_valid);
    CHECK(v.beta_valid);
    // At the optimum the variance reproduces the closed-form depth to ~1%.
    CHECK(2.0 * v.value / j == doctest::Approx(opt.xi2_opt).epsilon(0.01));

    const ShortTimeVariance early = short_time_variance(j, 1.0, 1e-3);
    CHECK(early.alpha == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_FALSE(early.alpha_valid);
    CHECK(early.beta_valid);

    const ShortTimeVariance late = short_time_variance(j, 1.0, 0.05);
    CHECK(late.alpha_valid);
    CHECK_FALSE(late.beta_valid);
}

TEST_CASE("dissipative optimum estimate") {
    const DissipativeEstimate est = dissipative_estimate(500.0, 3.4, 1.0, 1.0, 0.1);
    CHECK(est.eta == doctest::Approx(3.4).epsilon(1e-12));
    CHECK(est.xi2_opt == doctest::Approx(2.0 / std::sqrt(500.0 * 3.4)).epsilon(1e-12));
    CHECK(est.xi2_opt == doctest::Approx(0.048507).epsilon(1e-4));
    CHECK(est.t_min == doctest::Approx(1.0 / (0.1 * std::sqrt(500.0 * 3.4))).epsilon(1e-12));

    // The limiting decoherence channel is whichever rate dominates.
    const DissipativeEstimate deph = dissipative_estimate(500.0, 3.4, 0.5, 1.0, 2.0);
    CHECK(deph.eta == doctest::Approx(1.7).epsilon(1e-12));

    const DissipativeEstimate cold = dissipative_estimate(500.0, 3.4, 1.0, 1.0, 0.0);
    CHECK(std::isinf(cold.t_min));

    CHECK_THROWS_AS(dissipative_estimate(500.0, 3.4, 0.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(dissipative_estimate(500.0, 0.0, 1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("grid optimum with parabolic refinement") {
    auto make_points = [](const std::vector<double>& ts, auto f) {
        std::vector<SqueezingPoint> pts;
        for (const double t : ts) {
            SqueezingPoint p;
            p.time = t;
            p.xi2 = f(t);
            pts.push_back(p);
        }
        return pts;
    };

    SUBCASE("exact parabola is recovered even off-grid") {
        std::vector<double> ts;
        for (int k = 0; k <= 15; ++k) ts.push_back(0.04 * k);
        const auto pts =
            make_points(ts, [](double t) { return (t - 0.3) * (t - 0.3) + 0.05; });
        const OptimumResult res = locate_optimum(pts);
        CHECK(res.interior);
        CHECK(res.t_opt == doctest::Approx(0.3).epsilon(1e-10));
        CHECK(res.xi2_opt == doctest::Approx(0.05).epsilon(1e-10));
    }

    SUBCASE("monotone traces report the endpoint without refinement") {
        const std::vector<double> ts{0.0, 0.1, 0.2, 0.3};
        const auto rising = make_points(ts, [](double t) { return 1.0 + t; });
        const OptimumResult r1 = locate_optimum(rising);
        CHECK_FALSE(r1.interior);
        CHECK(r1.t_opt == 0.0);
        CHECK(r1.xi2_opt == 1.0);

        const auto falling = make_points(ts, [](double t) { return 1.0 - t; });
        const OptimumResult r2 = locate_optimum(falling);
        CHECK_FALSE(r2.interior);
        CHECK(r2.t_opt == 0.3);
        CHECK(r2.xi2_opt == doctest::Approx(0.7).epsilon(1e-12));
    }

    SUBCASE("at least three points are required") {
        const auto pts = make_points({0.0, 0.1}, [](double) { return 1.0; });
        CHECK_THROWS_AS(locate_optimum(pts), std::invalid_argument);
    }
}

TEST_CASE("squeezing trace finds the interior optimum of a damped twisting run") {
    MomentParams p;
    p.j_total = 50.0;
    p.lambda_twist = 1.0;
    p.gamma_s = 0.01;
    p.big_gamma_m = 0.001;
    p.n_th = 1.0;
    std::vector<double> times;
    for (int k = 0; k <= 120; ++k) times.push_back(0.25 * k / 120.0);

    const MomentTrajectory traj = evolve_moments(p, times);
    const SqueezingTrace trace = squeezing_trace(traj, 100);
    REQUIRE(trace.points.size() == times.size());
    CHECK(trace.points.front().xi2 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(trace.optimum.interior);
    CHECK(trace.optimum.xi2_opt < 0.2);
    CHECK(trace.optimum.t_opt > 0.0);
    CHECK(trace.optimum.t_opt < 0.25);

    const OptimumResult direct = locate_optimum(trace.points);
    CHECK(trace.optimum.t_opt == doctest::Approx(direct.t_opt).epsilon(1e-12));
    CHECK(trace.optimum.xi2_opt == doctest::Approx(direct.xi2_opt).epsilon(1e-12));
}
