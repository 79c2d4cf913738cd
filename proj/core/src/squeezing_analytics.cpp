#include "spinsqueeze/squeezing_analytics.hpp"

#include "spinsqueeze/lindblad_engine.hpp"
#include "spinsqueeze/units.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sqz {

SqueezingPoint xi_squared(const MomentVector& m, int n_spins, bool variance_mode) {
    if (n_spins < 1)
        throw std::invalid_argument("xi_squared: n_spins must be >= 1");

    SqueezingPoint p;
    const double vy = variance_mode ? m.jy2 - m.jy * m.jy : m.jy2;
    const double vz = variance_mode ? m.jz2 - m.jz * m.jz : m.jz2;
    const double cyz = variance_mode ? m.jyz - m.jy * m.jz : m.jyz;
    p.a_sum = vy + vz;
    p.b_diff = vy - vz;
    p.c_cross = cyz;
    p.v_min = 0.5 * (p.a_sum - std::sqrt(p.b_diff * p.b_diff + 4.0 * p.c_cross * p.c_cross));

    // Stationary angles of v(alpha) come in an orthogonal pair; evaluate both
    // and keep the smaller rather than trusting a branch rule (robust at the
    // B = C = 0 degeneracy, which lands on alpha = 0).
    const auto value_at = [&](double alpha) {
        return 0.5 * p.a_sum - 0.5 * p.b_diff * std::cos(2.0 * alpha) +
               p.c_cross * std::sin(2.0 * alpha);
    };
    double alpha = 0.5 * std::atan2(-2.0 * p.c_cross, p.b_diff);
    double other = alpha + 0.5 * units::pi;
    if (value_at(other) < value_at(alpha)) alpha = other;
    alpha = std::fmod(alpha, units::pi);
    if (alpha < 0.0) alpha += units::pi;
    p.alpha_min = alpha;

    p.xi2 = 4.0 * p.v_min / static_cast<double>(n_spins);
    return p;
}

SqueezingPoint xi_from_record(const SpinMomentRecord& rec, int n_spins, bool realign,
                              bool variance_mode) {
    if (n_spins < 1)
        throw std::invalid_argument("xi_from_record: n_spins must be >= 1");

    SpinMomentRecord r = rec;
    if (realign) {
        const double j = 0.5 * n_spins;
        const double plane = rec.jx * rec.jx + rec.jy * rec.jy;
        if (plane < 1e-12 * j * j)
            throw std::domain_error(
                "xi_from_record: mean spin vanished in the x-y plane; the "
                "quadrature frame is undefined");
        const double chi = std::atan2(rec.jy, rec.jx);
        const double c = std::cos(chi), s = std::sin(chi);
        // Frame rotation about z by -chi: Jx' = c Jx + s Jy,
        // Jy' = -s Jx + c Jy, Jz' = Jz.
        r.jx = c * rec.jx + s * rec.jy;
        r.jy = -s * rec.jx + c * rec.jy;
        r.jz = rec.jz;
        r.jx2 = c * c * rec.jx2 + s * s * rec.jy2 + 2.0 * c * s * rec.jxy;
        r.jy2 = s * s * rec.jx2 + c * c * rec.jy2 - 2.0 * c * s * rec.jxy;
        r.jxy = (c * c - s * s) * rec.jxy + c * s * (rec.jy2 - rec.jx2);
        r.jxz = c * rec.jxz + s * rec.jyz;
        r.jyz = -s * rec.jxz + c * rec.jyz;
        r.jz2 = rec.jz2;
    }

    MomentVector m;
    m.jx = r.jx;
    m.jy = r.jy;
    m.jz = r.jz;
    m.jy2 = r.jy2;
    m.jz2 = r.jz2;
    m.jyz = r.jyz;
    return xi_squared(m, n_spins, variance_mode);
}

SqueezingPoint xi_from_density(const Eigen::MatrixXcd& rho, const DickeOperators& ops,
                               bool realign, bool variance_mode) {
    if (rho.rows() != ops.dim || rho.cols() != ops.dim)
        throw std::invalid_argument("xi_from_density: dimension mismatch");

    Eigen::MatrixXcd state = rho;
    if (realign) {
        const double jx = real_expectation(rho, ops.jx);
        const double jy = real_expectation(rho, ops.jy);
        const double plane = jx * jx + jy * jy;
        if (plane < 1e-12 * ops.j * ops.j)
            throw std::domain_error(
                "xi_from_density: mean spin vanished in the x-y plane; the "
                "quadrature frame is undefined");
        state = rotate_about_z(rho, std::atan2(jy, jx), ops.m_values);
    }

    MomentVector m;
    m.jx = real_expectation(state, ops.jx);
    m.jy = real_expectation(state, ops.jy);
    m.jz = real_expectation(state, ops.jz);
    m.jy2 = real_expectation(state, ops.jy_sq);
    m.jz2 = real_expectation(state, ops.jz_sq);
    m.jyz = real_expectation(state, ops.jyz_sym);
    return xi_squared(m, ops.n_spins, variance_mode);
}

IdealOptimum ideal_optimum(double j_total, double lambda_twist) {
    if (!std::isfinite(j_total) || j_total < 0.5)
        throw std::invalid_argument("ideal_optimum: j_total must be >= 1/2");
    if (!std::isfinite(lambda_twist) || lambda_twist <= 0.0)
        throw std::invalid_argument("ideal_optimum: lambda_twist must be positive");
    IdealOptimum out;
    out.t_min = std::pow(3.0, 1.0 / 6.0) * std::pow(2.0 * j_total, -2.0 / 3.0) / lambda_twist;
    out.xi2_opt = 0.5 * std::pow(2.0 * j_total / 3.0, -2.0 / 3.0);
    out.large_j_valid = j_total >= 10.0;
    return out;
}

ShortTimeVariance short_time_variance(double j_total, double lambda_twist, double t) {
    if (!std::isfinite(j_total) || j_total < 0.5)
        throw std::invalid_argument("short_time_variance: j_total must be >= 1/2");
    ShortTimeVariance out;
    out.alpha = j_total * lambda_twist * t;
    out.beta = j_total * (lambda_twist * t) * (lambda_twist * t);
    out.alpha_valid = out.alpha > 1.0;
    out.beta_valid = out.beta <= 0.3;
    out.value = 0.5 * j_total *
                (1.0 / (4.0 * out.alpha * out.alpha) + (2.0 / 3.0) * out.beta * out.beta);
    return out;
}

DissipativeEstimate dissipative_estimate(double j_total, double g_single, double n_th,
                                         double gamma_m, double gamma_s) {
    if (!std::isfinite(j_total) || j_total < 0.5)
        throw std::invalid_argument("dissipative_estimate: j_total must be >= 1/2");
    if (!std::isfinite(g_single) || g_single <= 0.0)
        throw std::invalid_argument("dissipative_estimate: g_single must be positive");
    if (gamma_m < 0.0 || gamma_s < 0.0 || n_th < 0.0)
        throw std::invalid_argument("dissipative_estimate: rates must be >= 0");
    const double decay = std::max(n_th * gamma_m, gamma_s);
    if (decay <= 0.0)
        throw std::invalid_argument(
            "dissipative_estimate: max(n_th*gamma_m, gamma_s) must be positive");

    DissipativeEstimate out;
    out.eta = g_single / decay;
    const double root = std::sqrt(j_total * out.eta);
    out.xi2_opt = 2.0 / root;
    out.t_min = gamma_s > 0.0 ? 1.0 / (gamma_s * root)
                              : std::numeric_limits<double>::infinity();
    return out;
}

OptimumResult locate_optimum(const std::vector<SqueezingPoint>& points) {
    if (points.size() < 3)
        throw std::invalid_argument("locate_optimum: need at least 3 points");

    std::size_t best = 0;
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].xi2 < points[best].xi2) best = i;

    OptimumResult out;
    out.t_opt = points[best].time;
    out.xi2_opt = points[best].xi2;
    if (best == 0 || best + 1 == points.size()) {
        out.interior = false;
        return out;
    }

    // Parabola through the bracketing triple; fall back to the grid point
    // when the triple is degenerate (flat or collinear).
    const double t0 = points[best - 1].time, t1 = points[best].time,
                 t2 = points[best + 1].time;
    const double v0 = points[best - 1].xi2, v1 = points[best].xi2, v2 = points[best + 1].xi2;
    const double d01 = t1 - t0, d12 = t1 - t2;
    const double num = d01 * d01 * (v1 - v2) - d12 * d12 * (v1 - v0);
    const double den = d01 * (v1 - v2) - d12 * (v1 - v0);
    if (den != 0.0 && std::isfinite(num / den)) {
        const double t_star = t1 - 0.5 * num / den;
        if (t_star > t0 && t_star < t2) {
            // Lagrange evaluation of the same parabola at its vertex.
            const double l0 = (t_star - t1) * (t_star - t2) / ((t0 - t1) * (t0 - t2));
            const double l1 = (t_star - t0) * (t_star - t2) / ((t1 - t0) * (t1 - t2));
            const double l2 = (t_star - t0) * (t_star - t1) / ((t2 - t0) * (t2 - t1));
            const double v_star = l0 * v0 + l1 * v1 + l2 * v2;
            if (v_star <= v1) {
                out.t_opt = t_star;
                out.xi2_opt = v_star;
            }
        }
    }
    return out;
}

SqueezingTrace squeezing_trace(const std::vector<double>& times,
                               const std::vector<MomentVector>& moments, int n_spins,
                               bool variance_mode) {
    if (times.size() != moments.size())
        throw std::invalid_argument("squeezing_trace: times/moments size mismatch");
    SqueezingTrace trace;
    trace.points.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        SqueezingPoint p = xi_squared(moments[i], n_spins, variance_mode);
        p.time = times[i];
        trace.points.push_back(p);
    }
    trace.optimum = locate_optimum(trace.points);
    return trace;
}

SqueezingTrace squeezing_trace(const MomentTrajectory& traj, int n_spins,
                               bool variance_mode) {
    return squeezing_trace(traj.times, traj.moments, n_spins, variance_mode);
}

} // namespace sqz
