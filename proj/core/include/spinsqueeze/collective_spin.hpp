#pragma once

#include <Eigen/Dense>

namespace sqz {

// Symmetric (maximal J = N/2) sector of N spin-1/2 particles. Basis states
// are |J, m> with m = -J ... +J in ascending order, dimension N + 1.
//
// Dense matrix construction is capped at kMaxFullMatrixSpins; purely diagonal
// data (m values, ladder coefficients) is available up to kMaxDiagonalSpins
// through the free functions below.
inline constexpr int kMaxFullMatrixSpins = 1024;
inline constexpr int kMaxDiagonalSpins = 1 << 20;

struct DickeOperators {
    int n_spins = 0;
    double j = 0.0; // N / 2
    int dim = 0;    // N + 1

    Eigen::MatrixXcd jx, jy, jz;
    Eigen::MatrixXcd jp, jm;  // ladder operators, jp = jm^dagger
    Eigen::MatrixXcd j2;      // jx^2 + jy^2 + jz^2

    // Cached quadratics used by squeezing extraction on every output frame.
    // The symmetrized cross moments are (AB + BA) / 2.
    Eigen::MatrixXcd jx_sq, jy_sq, jz_sq;
    Eigen::MatrixXcd jxy_sym, jxz_sym, jyz_sym;

    Eigen::VectorXd m_values; // diagonal of jz
};

// Builds all collective operators for n_spins in [1, kMaxFullMatrixSpins].
DickeOperators build_dicke_operators(int n_spins);

// m = -J ... +J, ascending. Valid for n_spins up to kMaxDiagonalSpins.
Eigen::VectorXd dicke_m_values(int n_spins);

// c(m) = sqrt(J(J+1) - m(m+1)) for m = -J ... J-1, so that
// J+ |J,m> = c(m) |J,m+1>. Valid for n_spins up to kMaxDiagonalSpins.
Eigen::VectorXd dicke_ladder_coefficients(int n_spins);

struct SpinState {
    Eigen::VectorXcd amplitudes; // coefficients over |J,m>, m ascending

    int n_spins() const { return static_cast<int>(amplitudes.size()) - 1; }
    double j() const { return 0.5 * n_spins(); }
};

// Coherent spin state along +x: the J_x eigenstate with eigenvalue +J.
// Amplitudes are c_m = 2^{-J} sqrt(binom(2J, J+m)), evaluated in log space
// so large N stays finite.
SpinState coherent_spin_state_x(int n_spins);

} // namespace sqz
