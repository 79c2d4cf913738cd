#include "spinsqueeze/waveguide_phonons.hpp"

#include "spinsqueeze/units.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sqz {

namespace {

void require_finite_positive(double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0) {
        std::ostringstream os;
        os << "waveguide: " << name << " must be finite and positive, got " << v;
        throw std::invalid_argument(os.str());
    }
}

} // namespace

std::vector<std::string> validate_waveguide(const WaveguideSpec& spec) {
    require_finite_positive(spec.length_l, "length_l");
    require_finite_positive(spec.width_w, "width_w");
    require_finite_positive(spec.thickness_t, "thickness_t");
    require_finite_positive(spec.youngs_e, "youngs_e");
    require_finite_positive(spec.density_rho, "density_rho");
    if (!std::isfinite(spec.poisson_nu) || spec.poisson_nu < 0.0 || spec.poisson_nu >= 0.5)
        throw std::invalid_argument("waveguide: poisson_nu must lie in [0, 0.5)");

    std::vector<std::string> warnings;
    const double cross = std::max(spec.width_w, spec.thickness_t);
    if (spec.length_l < 10.0 * cross) {
        std::ostringstream os;
        os << "aspect ratio l/max(w,t) = " << spec.length_l / cross
           << " < 10; quasi-1D dispersion becomes inaccurate";
        warnings.push_back(os.str());
    }
    return warnings;
}

LameConstants lame_constants(double youngs_e, double poisson_nu) {
    require_finite_positive(youngs_e, "youngs_e");
    if (!std::isfinite(poisson_nu) || poisson_nu < 0.0 || poisson_nu >= 0.5)
        throw std::invalid_argument(
            "lame_constants: poisson_nu must lie in [0, 0.5); the first Lame "
            "constant diverges at 0.5");
    LameConstants out;
    out.lambda = poisson_nu * youngs_e / ((1.0 + poisson_nu) * (1.0 - 2.0 * poisson_nu));
    out.mu = youngs_e / (2.0 * (1.0 + poisson_nu));
    return out;
}

double longitudinal_speed(const WaveguideSpec& spec) {
    require_finite_positive(spec.youngs_e, "youngs_e");
    require_finite_positive(spec.density_rho, "density_rho");
    return std::sqrt(spec.youngs_e / spec.density_rho);
}

double zero_point_amplitude(double omega, double rho, double volume) {
    require_finite_positive(omega, "omega");
    require_finite_positive(rho, "rho");
    require_finite_positive(volume, "volume");
    return std::sqrt(units::hbar / (2.0 * rho * volume * omega));
}

ModeSpectrum compression_mode_spectrum(const WaveguideSpec& spec, int n_max) {
    validate_waveguide(spec);
    if (n_max < 1)
        throw std::invalid_argument("compression_mode_spectrum: n_max must be >= 1");

    const double v_l = longitudinal_speed(spec);
    const double volume = spec.length_l * spec.width_w * spec.thickness_t;
    const double spacing = units::pi * v_l / spec.length_l;

    ModeSpectrum out;
    out.spacing = spacing;
    out.well_separated = spacing >= units::angular_from_hz(50e6);
    out.modes.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        PhononMode mode;
        mode.branch_n = n;
        mode.omega = n * spacing;
        mode.q_zero = zero_point_amplitude(mode.omega, spec.density_rho, volume);
        mode.zeta_abs = 1.0;
        out.modes.push_back(mode);
    }
    return out;
}

double single_spin_coupling(double d_strain, double v_l, double omega_m,
                            double rho, double volume) {
    require_finite_positive(d_strain, "d_strain");
    require_finite_positive(v_l, "v_l");
    require_finite_positive(omega_m, "omega_m");
    require_finite_positive(rho, "rho");
    require_finite_positive(volume, "volume");
    return (d_strain / v_l) * std::sqrt(units::hbar * omega_m / (2.0 * rho * volume));
}

std::complex<double> zeta_profile(const WaveguideSpec& spec, const PhononMode& mode,
                                  const Eigen::Vector3d& position, int direction) {
    validate_waveguide(spec);
    if (mode.omega <= 0.0 || !std::isfinite(mode.omega))
        throw std::invalid_argument("zeta_profile: mode.omega must be positive");
    if (direction != 1 && direction != -1)
        throw std::invalid_argument("zeta_profile: direction must be +1 or -1");
    const double x = position.x(), y = position.y(), z = position.z();
    if (x < 0.0 || x > spec.length_l || std::abs(y) > 0.5 * spec.width_w ||
        std::abs(z) > 0.5 * spec.thickness_t)
        throw std::invalid_argument("zeta_profile: position lies outside the beam");

    const double k = direction * mode.omega / longitudinal_speed(spec);
    // u = e_x exp(ikx): only the longitudinal compression term survives, and
    // (1/|k|)(ik) u_x reduces to i*sign(k)*exp(ikx). Finite as |k| -> 0.
    const std::complex<double> phase = std::exp(std::complex<double>(0.0, k * x));
    return std::complex<double>(0.0, direction) * phase;
}

double thermal_occupation(double omega, double temperature) {
    require_finite_positive(omega, "omega");
    if (!std::isfinite(temperature) || temperature < 0.0)
        throw std::invalid_argument("thermal_occupation: temperature must be >= 0");
    if (temperature == 0.0)
        return 0.0;
    const double x = units::hbar * omega / (units::k_boltzmann * temperature);
    // expm1 overflows to +inf for large x, giving the correct limit 0.
    return 1.0 / std::expm1(x);
}

CouplingBudget make_budget(double g_single, int n_spins, double detuning_ratio,
                           double gamma_m, double gamma_s, double omega_m,
                           double temperature) {
    require_finite_positive(g_single, "g_single");
    require_finite_positive(omega_m, "omega_m");
    if (n_spins < 1)
        throw std::invalid_argument("make_budget: n_spins must be >= 1");
    if (!std::isfinite(detuning_ratio) || detuning_ratio <= 1.0)
        throw std::invalid_argument(
            "make_budget: detuning_ratio must exceed 1 (dispersive regime)");
    if (!std::isfinite(gamma_m) || gamma_m < 0.0)
        throw std::invalid_argument("make_budget: gamma_m must be >= 0");
    if (!std::isfinite(gamma_s) || gamma_s < 0.0)
        throw std::invalid_argument("make_budget: gamma_s must be >= 0");

    CouplingBudget b;
    b.g_single = g_single;
    b.n_spins = n_spins;
    b.g_collective = std::sqrt(static_cast<double>(n_spins)) * g_single;
    b.detuning = detuning_ratio * b.g_collective;
    b.lambda_twist = b.g_collective * b.g_collective / b.detuning;
    b.gamma_m = gamma_m;
    b.gamma_s_dephase = gamma_s;
    const double ratio = b.g_collective / b.detuning;
    b.big_gamma_m = gamma_m * ratio * ratio;
    b.n_th = thermal_occupation(omega_m, temperature);

    const double decay = std::max(b.n_th * gamma_m, gamma_s);
    if (decay > 0.0)
        b.eta = g_single / decay;

    if (detuning_ratio < 5.0) {
        std::ostringstream os;
        os << "detuning_ratio = " << detuning_ratio
           << " < 5: dispersive elimination is marginal, residual spin-phonon "
              "entanglement is not negligible";
        b.warnings.push_back(os.str());
    }
    return b;
}

} // namespace sqz
