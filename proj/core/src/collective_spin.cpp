#include "spinsqueeze/collective_spin.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sqz {

namespace {

void check_spin_count(int n_spins, int cap, const char* what) {
    if (n_spins < 1)
        throw std::invalid_argument(std::string(what) + ": n_spins must be >= 1, got " +
                                    std::to_string(n_spins));
    if (n_spins > cap)
        throw std::invalid_argument(std::string(what) + ": n_spins = " + std::to_string(n_spins) +
                                    " exceeds cap " + std::to_string(cap));
}

} // namespace

Eigen::VectorXd dicke_m_values(int n_spins) {
    check_spin_count(n_spins, kMaxDiagonalSpins, "dicke_m_values");
    const double j = 0.5 * n_spins;
    Eigen::VectorXd m(n_spins + 1);
    for (int i = 0; i <= n_spins; ++i) m[i] = -j + i;
    return m;
}

Eigen::VectorXd dicke_ladder_coefficients(int n_spins) {
    check_spin_count(n_spins, kMaxDiagonalSpins, "dicke_ladder_coefficients");
    const double j = 0.5 * n_spins;
    Eigen::VectorXd c(n_spins);
    for (int i = 0; i < n_spins; ++i) {
        const double m = -j + i;
        c[i] = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    }
    return c;
}

DickeOperators build_dicke_operators(int n_spins) {
    check_spin_count(n_spins, kMaxFullMatrixSpins, "build_dicke_operators");

    DickeOperators ops;
    ops.n_spins = n_spins;
    ops.j = 0.5 * n_spins;
    ops.dim = n_spins + 1;
    ops.m_values = dicke_m_values(n_spins);

    const int d = ops.dim;
    const Eigen::VectorXd c = dicke_ladder_coefficients(n_spins);

    ops.jz = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 0; i < d; ++i) ops.jz(i, i) = ops.m_values[i];

    ops.jp = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 0; i < d - 1; ++i) ops.jp(i + 1, i) = c[i];
    ops.jm = ops.jp.adjoint();

    ops.jx = 0.5 * (ops.jp + ops.jm);
    ops.jy = std::complex<double>(0.0, -0.5) * (ops.jp - ops.jm);

    ops.jx_sq = ops.jx * ops.jx;
    ops.jy_sq = ops.jy * ops.jy;
    ops.jz_sq = ops.jz * ops.jz;
    ops.j2 = ops.jx_sq + ops.jy_sq + ops.jz_sq;
    ops.jxy_sym = 0.5 * (ops.jx * ops.jy + ops.jy * ops.jx);
    ops.jxz_sym = 0.5 * (ops.jx * ops.jz + ops.jz * ops.jx);
    ops.jyz_sym = 0.5 * (ops.jy * ops.jz + ops.jz * ops.jy);

    return ops;
}

SpinState coherent_spin_state_x(int n_spins) {
    check_spin_count(n_spins, kMaxDiagonalSpins, "coherent_spin_state_x");
    const double j = 0.5 * n_spins;
    const int d = n_spins + 1;

    SpinState state;
    state.amplitudes.resize(d);
    for (int i = 0; i < d; ++i) {
        const double m = -j + i;
        // log of 2^{-J} sqrt(binom(N, J+m))
        const double log_amp = 0.5 * (std::lgamma(n_spins + 1.0) - std::lgamma(j + m + 1.0) -
                                      std::lgamma(j - m + 1.0)) -
                               j * std::log(2.0);
        state.amplitudes[i] = std::exp(log_amp);
    }
    // Amplitudes are exact up to rounding; renormalise so the norm is 1 at
    // machine precision.
    state.amplitudes /= state.amplitudes.norm();
    return state;
}

} // namespace sqz
