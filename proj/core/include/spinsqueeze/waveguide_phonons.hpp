#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace sqz {

// Quasi-1D acoustics of a rectangular beam plus the spin-phonon coupling
// budget built on top of it. All frequencies are angular (rad/s); lengths in
// meters, moduli in pascal, densities in kg/m^3.

struct WaveguideSpec {
    double length_l = 0.0;
    double width_w = 0.0;
    double thickness_t = 0.0;
    double youngs_e = 0.0;
    double poisson_nu = 0.0;
    double density_rho = 0.0;
};

// Validates hard constraints (positive dimensions, 0 <= nu < 0.5) by throwing
// std::invalid_argument; returns soft warnings (e.g. aspect ratio l <
// 10*max(w,t) breaks the slender-beam assumption).
std::vector<std::string> validate_waveguide(const WaveguideSpec& spec);

struct LameConstants {
    double lambda = 0.0; // pascal
    double mu = 0.0;     // pascal
};

// lambda = nu E / ((1+nu)(1-2nu)), mu = E / (2(1+nu)). Rejects nu >= 0.5
// (incompressible limit) and nu < 0 or E <= 0.
LameConstants lame_constants(double youngs_e, double poisson_nu);

// Longitudinal sound speed sqrt(E/rho).
double longitudinal_speed(const WaveguideSpec& spec);

// Flexural branches are not modeled; the transverse speed below is a
// documented reference constant, not derived from the Lame constants.
inline constexpr double kTransverseSpeed = 0.73e4; // m/s

struct PhononMode {
    int branch_n = 1;       // standing-wave index, >= 1
    double omega = 0.0;     // angular frequency
    double q_zero = 0.0;    // zero-point amplitude, meters
    double zeta_abs = 1.0;  // transverse-profile overlap magnitude, in (0, 2]
};

struct ModeSpectrum {
    std::vector<PhononMode> modes; // branch_n = 1..n_max, ascending omega
    double spacing = 0.0;          // nearest-neighbor gap pi*v_l/l, angular
    bool well_separated = false;   // spacing >= 2*pi*50 MHz
};

// q_zero = sqrt(hbar/(2 rho V omega)) for a mode of effective volume V.
double zero_point_amplitude(double omega, double rho, double volume);

// Standing-wave compression spectrum omega_n = n*pi*v_l/l with zero-point
// amplitudes q_zero = sqrt(hbar/(2 rho V omega)), V = l*w*t. The quasi-1D
// approximation fixes zeta_abs = 1 for every branch.
ModeSpectrum compression_mode_spectrum(const WaveguideSpec& spec, int n_max);

// Single-spin strain coupling g = (d/v_l) * sqrt(hbar*omega_m/(2 rho V)).
// d_strain is the orbital strain susceptibility in angular units
// (rad/s per unit strain).
double single_spin_coupling(double d_strain, double v_l, double omega_m,
                            double rho, double volume);

// Dimensionless mode-profile factor at a spin site, evaluated for the pure
// compression ansatz u = e_x exp(ikx) with k = direction * omega/v_l. The
// transverse-gradient contributions vanish identically for this ansatz and
// the 1/|k| normalization cancels the longitudinal derivative, so the result
// is the pure phase i*sign(k)*exp(ikx) of unit magnitude. direction must be
// +1 or -1; position must lie inside the beam (0 <= x <= l, |y| <= w/2,
// |z| <= t/2).
std::complex<double> zeta_profile(const WaveguideSpec& spec, const PhononMode& mode,
                                  const Eigen::Vector3d& position, int direction = 1);

// Bose occupation 1/(exp(hbar*omega/kB*T) - 1); exactly 0 at T = 0.
double thermal_occupation(double omega, double temperature);

struct CouplingBudget {
    double g_single = 0.0;       // angular
    int n_spins = 0;
    double g_collective = 0.0;   // sqrt(N) * g_single
    double detuning = 0.0;       // detuning_ratio * g_collective
    double lambda_twist = 0.0;   // g_collective^2 / detuning
    double gamma_m = 0.0;        // bare mechanical linewidth
    double gamma_s_dephase = 0.0;
    double big_gamma_m = 0.0;    // gamma_m * (g_collective/detuning)^2
    double n_th = 0.0;
    // g_single / max(n_th*gamma_m, gamma_s_dephase); absent when both decay
    // channels are zero.
    std::optional<double> eta;
    std::vector<std::string> warnings;
};

// Derived rates of the dispersive (detuned) coupling scheme. Requires
// detuning_ratio > 1; ratios below 5 are flagged as a warning since the
// dispersive elimination degrades.
CouplingBudget make_budget(double g_single, int n_spins, double detuning_ratio,
                           double gamma_m, double gamma_s, double omega_m,
                           double temperature);

} // namespace sqz
