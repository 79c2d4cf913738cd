#include "spinsqueeze/moment_dynamics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sqz {

namespace {

void validate(const MomentParams& p) {
    if (!std::isfinite(p.j_total) || p.j_total < 0.5)
        throw std::invalid_argument("moment_dynamics: j_total must be >= 1/2");
    if (!std::isfinite(p.lambda_twist))
        throw std::invalid_argument("moment_dynamics: lambda_twist must be finite");
    if (!std::isfinite(p.gamma_s) || p.gamma_s < 0.0 || !std::isfinite(p.big_gamma_m) ||
        p.big_gamma_m < 0.0)
        throw std::invalid_argument("moment_dynamics: rates must be finite and >= 0");
    if (!std::isfinite(p.n_th) || p.n_th < 0.0)
        throw std::invalid_argument("moment_dynamics: n_th must be finite and >= 0");
}

} // namespace

MomentVector initial_moments(double j_total) {
    if (!std::isfinite(j_total) || j_total < 0.5)
        throw std::invalid_argument("initial_moments: j_total must be >= 1/2");
    MomentVector m;
    m.jx = j_total;
    m.jy2 = 0.5 * j_total;
    m.jz2 = 0.5 * j_total;
    return m;
}

MomentTrajectory evolve_moments(const MomentParams& params,
                                const std::vector<double>& times,
                                const OdeOptions& options) {
    validate(params);
    if (times.empty() || times.front() != 0.0)
        throw std::invalid_argument("evolve_moments: times must start at 0");

    const double j = params.j_total;
    const double lam = params.lambda_twist;
    const double gs = params.gamma_s;
    const double gm = params.big_gamma_m;
    const double nt = params.n_th + 0.5;
    const double jj1 = j * (j + 1.0);

    const auto rhs = [&](double, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
        const double jx = y(0).real(), jy = y(1).real(), jz = y(2).real();
        const double jy2 = y(3).real(), jz2 = y(4).real(), jyz = y(5).real();
        dy(0) = -gs * jx;
        dy(1) = lam * j * jz - gs * jy - gm * nt * jy + gm * jyz;
        dy(2) = -2.0 * gm * nt * jz - gm * (jj1 - jz2);
        dy(3) = 2.0 * j * lam * jyz - 2.0 * gs * (jy2 - 0.5 * j) + gm * (j + 0.5) * jz -
                2.0 * gm * nt * (jy2 - jz2);
        dy(4) = -2.0 * gm * nt * (3.0 * jz2 - jj1) + gm * jz * (1.0 - 2.0 * j * (j + 0.5));
        dy(5) = lam * j * jz2 - gs * jyz - 5.0 * nt * gm * jyz - gm * (j * j - 0.25) * jy;
    };

    const MomentVector m0 = initial_moments(j);
    Eigen::VectorXcd y0(6);
    y0 << m0.jx, m0.jy, m0.jz, m0.jy2, m0.jz2, m0.jyz;

    MomentTrajectory traj;
    traj.times = times;
    traj.moments.reserve(times.size());

    bool warned_beta = false, warned_cs = false;
    const auto observer = [&](std::size_t, double t, const Eigen::VectorXcd& y) {
        MomentVector m;
        m.jx = y(0).real();
        m.jy = y(1).real();
        m.jz = y(2).real();
        m.jy2 = y(3).real();
        m.jz2 = y(4).real();
        m.jyz = y(5).real();
        traj.moments.push_back(m);

        // Valid short-time window: alpha = J*lambda*t > 1 with beta =
        // J*(lambda*t)^2 small. beta growth is what ends it; alpha is
        // reported via alpha_final.
        const double alpha = j * std::abs(lam) * t;
        const double beta = alpha * std::abs(lam) * t;
        if (!warned_beta && beta > 0.3) {
            warned_beta = true;
            std::ostringstream os;
            os << "linearization indicator beta = J*(lambda*t)^2 exceeds 0.3 from t = " << t
               << "; the short-time closure is leaving its validity window";
            traj.warnings.push_back(os.str());
        }
        if (!warned_cs &&
            std::abs(m.jyz) > std::sqrt(std::max(0.0, m.jy2 * m.jz2)) + 1e-9) {
            warned_cs = true;
            std::ostringstream os;
            os << "Cauchy-Schwarz monitor breached at t = " << t << " (|jyz| = "
               << std::abs(m.jyz) << ", sqrt(jy2*jz2) = "
               << std::sqrt(std::max(0.0, m.jy2 * m.jz2)) << ")";
            traj.warnings.push_back(os.str());
        }
    };

    integrate_adaptive(rhs, y0, times, options, observer);

    const double t_final = times.back();
    traj.alpha_final = j * std::abs(lam) * t_final;
    traj.beta_final = traj.alpha_final * std::abs(lam) * t_final;
    return traj;
}

} // namespace sqz
