#pragma once

#include <Eigen/Dense>
#include <array>

#include "spinsqueeze/units.hpp"

namespace sqz {

// Ground-state manifold of a single negatively charged silicon-vacancy
// center: two orbital states {e_x, e_y} times spin-1/2, with spin-orbit
// coupling, a static Jahn-Teller distortion and an axial magnetic field.
//
// Basis ordering everywhere: {e_x down, e_y down, e_x up, e_y up}.
struct SiVParams {
    double lambda_so = units::angular_from_hz(45e9); // spin-orbit splitting, rad/s
    double upsilon_x = 0.0;                          // Jahn-Teller, rad/s
    double upsilon_y = 0.0;                          // Jahn-Teller, rad/s
    double b_z = 0.0;                                // axial field, T

    double gamma_spin = units::angular_from_hz(28.0e9);   // spin gyromagnetic ratio, rad/s/T
    double gamma_orbital = units::angular_from_hz(14.0e9); // orbital gyromagnetic ratio, rad/s/T
    double orbital_quench_f = 0.1;                         // quenching factor of orbital Zeeman

    // The quenched orbital Zeeman term f*gamma_orbital*B_z*L_z is small and
    // excluded by default; set true to include it. The closed-form angles
    // below always describe the default model.
    bool include_orbital_zeeman = false;
};

struct SiVGroundState {
    // Energies in the labeled order {a, b, c, d} = {lower down, lower up,
    // upper down, upper up}. For omega_zeeman < splitting_d this order is
    // also ascending. rad/s, zero-mean.
    std::array<double, 4> energies{};

    // Columns are the eigenstates a, b, c, d in the basis
    // {e_x down, e_y down, e_x up, e_y up}. Phase convention: the e_x
    // component of every column is real and positive.
    Eigen::Matrix4cd states;

    double splitting_d = 0.0;   // sqrt(lambda_so^2 + 4 upsilon^2), rad/s
    double omega_zeeman = 0.0;  // gamma_spin * b_z, rad/s

    // Orbital mixing angle in two conventions. `theta` follows the reduced
    // reading tan(theta) = 2*upsilon_x / sqrt(lambda_so^2 + 4*upsilon_y^2).
    // `theta_exact` adds the full splitting to the numerator,
    // tan(theta_exact) = (2*upsilon_x + D) / sqrt(lambda_so^2 + 4*upsilon_y^2),
    // which is the angle for which the closed-form states diagonalize the
    // Hamiltonian exactly; the reduced form is a small-mixing approximation
    // of the same quantity. Both are reported.
    double theta = 0.0;
    double theta_exact = 0.0;
    double phi = 0.0; // tan(phi) = 2*upsilon_y / lambda_so
};

// 4x4 Hamiltonian, exactly Hermitian by construction. Throws
// std::invalid_argument on non-finite parameters or lambda_so <= 0.
Eigen::Matrix4cd build_ground_hamiltonian(const SiVParams& params);

// Diagonalizes the two spin sectors separately (the Hamiltonian never mixes
// them for an axial field), resolving the B_z = 0 degeneracy by spin label
// rather than by numerically fragile eigenvalue ordering.
SiVGroundState diagonalize_ground(const SiVParams& params);

// Closed-form eigenvectors for the default model, same basis, ordering and
// phase convention as SiVGroundState::states. Used as an oracle and to fix
// phases; exposed because it is useful for tests and calibration.
Eigen::Matrix4cd closed_form_states(const SiVParams& params);

// Strain input: the 3x3 symmetric strain tensor of the host crystal plus
// the susceptibilities that project it onto the symmetry channels of the
// defect. Susceptibilities are angular frequencies per unit strain.
struct StrainInput {
    Eigen::Matrix3d strain = Eigen::Matrix3d::Zero();

    double t_perp = 0.0;                       // symmetric channel, in-plane
    double t_par = 0.0;                        // symmetric channel, axial
    double d = units::angular_from_hz(1.0e15); // orbital channel, x^2-y^2 / shear
    double f = 0.0;                            // orbital channel, axial shear
};

struct StrainOperator {
    // 4x4 operator on {e_x down, e_y down, e_x up, e_y up}; traceless on the
    // orbital sector and identical for both spins.
    Eigen::Matrix4cd op;

    double eps_a1g = 0.0; // common energy shift of all four levels, rad/s
    double eps_egx = 0.0;
    double eps_egy = 0.0;
};

// Projects a strain tensor onto the defect symmetry channels:
//   eps_a1g = t_perp (e_xx + e_yy) + t_par e_zz
//   eps_egx = d (e_xx - e_yy) + f e_zx
//   eps_egy = -2 d e_xy + f e_yz
// and returns the orbital operator eps_egx (|x><x| - |y><y|) +
// eps_egy (|x><y| + |y><x|) acting identically on both spin sectors.
// The symmetric-channel shift is reported separately and not folded
// into the operator. Throws on non-finite or non-symmetric strain.
StrainOperator strain_operator(const StrainInput& input);

} // namespace sqz
