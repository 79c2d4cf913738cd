#pragma once

#include <Eigen/Dense>

#include <vector>

#include "spinsqueeze/collective_spin.hpp"
#include "spinsqueeze/moment_dynamics.hpp"

namespace sqz {

// Squeezing-parameter extraction and the closed-form optima it is compared
// against. xi^2 = 4 * v_min / N where v_min is the minimum transverse second
// moment over quadrature angles alpha in the plane orthogonal to x:
//   v(alpha) = A/2 - (B/2) cos 2alpha + C sin 2alpha,
//   A = <Jy^2 + Jz^2>, B = <Jy^2 - Jz^2>, C = (1/2)<{Jy, Jz}>.

struct SqueezingPoint {
    double time = 0.0;
    double a_sum = 0.0;
    double b_diff = 0.0;
    double c_cross = 0.0;
    double v_min = 0.0;    // (a_sum - sqrt(b_diff^2 + 4 c_cross^2)) / 2
    double alpha_min = 0.0; // minimizing quadrature angle in [0, pi)
    double xi2 = 0.0;      // 4 * v_min / n_spins
};

// Second moments as printed; the opt-in variance_mode subtracts means
// (A from central variances, C from the central cross moment) for
// sensitivity studies.
SqueezingPoint xi_squared(const MomentVector& m, int n_spins, bool variance_mode = false);

// Full first + symmetrized second moment set of the collective spin, enough
// to realign the frame about z algebraically.
struct SpinMomentRecord {
    double jx = 0.0, jy = 0.0, jz = 0.0;
    double jx2 = 0.0, jy2 = 0.0, jz2 = 0.0;
    double jxy = 0.0, jxz = 0.0, jyz = 0.0; // (1/2)<{.,.}>
};

// Rotates the record about z so the mean spin points along +x, then
// evaluates xi_squared on the rotated (y, z) block. Throws when the in-plane
// mean spin has vanished (jx^2 + jy^2 < 1e-12 * J^2): the quadrature frame
// is undefined there and no angle is silently chosen.
SqueezingPoint xi_from_record(const SpinMomentRecord& rec, int n_spins,
                              bool realign = true, bool variance_mode = false);

// Extracts moments from a density matrix on the Dicke sector (after the
// mean-spin z-realignment unless realign = false) and delegates to
// xi_squared.
SqueezingPoint xi_from_density(const Eigen::MatrixXcd& rho, const DickeOperators& ops,
                               bool realign = true, bool variance_mode = false);

struct IdealOptimum {
    double t_min = 0.0;   // 3^(1/6) (2J)^(-2/3) / lambda
    double xi2_opt = 0.0; // (1/2) (2J/3)^(-2/3)
    bool large_j_valid = true; // formulas are large-J asymptotics; false below J = 10
};

IdealOptimum ideal_optimum(double j_total, double lambda_twist);

struct ShortTimeVariance {
    double value = 0.0; // (J/2)(1/(4 alpha^2) + (2/3) beta^2)
    double alpha = 0.0; // J * lambda * t, valid regime alpha > 1
    double beta = 0.0;  // J * (lambda * t)^2, valid regime beta <= 0.3
    bool alpha_valid = false;
    bool beta_valid = false;
};

ShortTimeVariance short_time_variance(double j_total, double lambda_twist, double t);

struct DissipativeEstimate {
    double eta = 0.0;     // g / max(n_th * gamma_m, gamma_s)
    double xi2_opt = 0.0; // 2 / sqrt(J * eta)
    double t_min = 0.0;   // 1 / (gamma_s * sqrt(J * eta)); +inf when gamma_s = 0
};

DissipativeEstimate dissipative_estimate(double j_total, double g_single, double n_th,
                                         double gamma_m, double gamma_s);

struct OptimumResult {
    double t_opt = 0.0;
    double xi2_opt = 0.0;
    // False when the grid minimum sits on an endpoint (no interior minimum
    // was bracketed); the endpoint values are returned as-is.
    bool interior = true;
};

// Grid argmin (earliest time on ties) refined by a parabola through the
// bracketing triple. Needs at least 3 points.
OptimumResult locate_optimum(const std::vector<SqueezingPoint>& points);

struct SqueezingTrace {
    std::vector<SqueezingPoint> points;
    OptimumResult optimum;
};

SqueezingTrace squeezing_trace(const std::vector<double>& times,
                               const std::vector<MomentVector>& moments, int n_spins,
                               bool variance_mode = false);
SqueezingTrace squeezing_trace(const MomentTrajectory& traj, int n_spins,
                               bool variance_mode = false);

} // namespace sqz
