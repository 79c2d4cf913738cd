#pragma once

#include <string>
#include <vector>

#include "spinsqueeze/ode.hpp"

namespace sqz {

// Linearized short-time dynamics of the collective spin moments under
// twisting plus damping/dephasing. Valid for arbitrary (including very large)
// J where density matrices are out of reach; the closure is a short-time
// linearization, so runs report validity indicators alpha = J*lambda*t and
// beta = J*(lambda*t)^2.

struct MomentVector {
    double jx = 0.0;
    double jy = 0.0;
    double jz = 0.0;
    double jy2 = 0.0; // <Jy^2>
    double jz2 = 0.0; // <Jz^2>
    double jyz = 0.0; // (1/2)<{Jy,Jz}>
};

struct MomentParams {
    double j_total = 0.5;      // J = N/2
    double lambda_twist = 0.0; // angular
    double gamma_s = 0.0;      // collective dephasing rate
    double big_gamma_m = 0.0;  // effective mechanical damping rate
    double n_th = 0.0;
};

struct MomentTrajectory {
    std::vector<double> times;
    std::vector<MomentVector> moments;
    std::vector<std::string> warnings;
    double alpha_final = 0.0; // J*lambda*t at the last grid point
    double beta_final = 0.0;  // J*(lambda*t)^2 at the last grid point
};

// Spin-polarized start along +x: (jx, jy, jz, jy2, jz2, jyz) =
// (J, 0, 0, J/2, J/2, 0).
MomentVector initial_moments(double j_total);

// Integrates the six coupled moment ODEs:
//   jx'  = -gs*jx
//   jy'  = lam*J*jz - gs*jy - Gm*(nt+1/2)*jy + Gm*jyz
//   jz'  = -2*Gm*(nt+1/2)*jz - Gm*(J(J+1) - jz2)
//   jy2' = 2*J*lam*jyz - 2*gs*(jy2 - J/2) + Gm*(J+1/2)*jz
//          - 2*Gm*(nt+1/2)*(jy2 - jz2)
//   jz2' = -2*Gm*(nt+1/2)*(3*jz2 - J(J+1)) + Gm*jz*(1 - 2J(J+1/2))
//   jyz' = lam*J*jz2 - gs*jyz - 5*(nt+1/2)*Gm*jyz - Gm*(J^2 - 1/4)*jy
// with gs = gamma_s, Gm = big_gamma_m, nt = n_th, lam = lambda_twist.
// Warnings flag the first exit from the closure's validity window (beta
// crossing 0.3) and any Cauchy-Schwarz breach |jyz| > sqrt(jy2*jz2) + 1e-9;
// alpha is reported through alpha_final, not warned about.
MomentTrajectory evolve_moments(const MomentParams& params,
                                const std::vector<double>& times,
                                const OdeOptions& options = {});

} // namespace sqz
