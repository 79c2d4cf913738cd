#include "spinsqueeze/siv_model.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace sqz {

namespace {

using std::complex;
constexpr complex<double> kI{0.0, 1.0};

void check_finite(double v, const char* name) {
    if (!std::isfinite(v))
        throw std::invalid_argument(std::string("siv_model: non-finite parameter ") + name);
}

void validate(const SiVParams& p) {
    check_finite(p.lambda_so, "lambda_so");
    check_finite(p.upsilon_x, "upsilon_x");
    check_finite(p.upsilon_y, "upsilon_y");
    check_finite(p.b_z, "b_z");
    check_finite(p.gamma_spin, "gamma_spin");
    check_finite(p.gamma_orbital, "gamma_orbital");
    check_finite(p.orbital_quench_f, "orbital_quench_f");
    if (p.lambda_so <= 0.0)
        throw std::invalid_argument("siv_model: lambda_so must be positive");
}

// Orbital angular momentum L_z in the {e_x, e_y} basis.
Eigen::Matrix2cd orbital_lz() {
    Eigen::Matrix2cd lz;
    lz << 0.0, -kI, kI, 0.0;
    return lz;
}

} // namespace

Eigen::Matrix4cd build_ground_hamiltonian(const SiVParams& p) {
    validate(p);

    const Eigen::Matrix2cd lz = orbital_lz();
    Eigen::Matrix2cd jt;
    jt << p.upsilon_x, p.upsilon_y, p.upsilon_y, -p.upsilon_x;

    const double omega_b = p.gamma_spin * p.b_z;

    // Per spin sector s_z = -1/2 (down), +1/2 (up):
    //   H_s = -lambda_so * s_z * L_z + H_JT + gamma_spin B_z s_z
    //         [+ f gamma_orbital B_z L_z]
    Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
    for (int s = 0; s < 2; ++s) {
        const double sz = (s == 0) ? -0.5 : 0.5;
        Eigen::Matrix2cd block = -p.lambda_so * sz * lz + jt;
        block += (omega_b * sz) * Eigen::Matrix2cd::Identity();
        if (p.include_orbital_zeeman)
            block += (p.orbital_quench_f * p.gamma_orbital * p.b_z) * lz;
        h.block<2, 2>(2 * s, 2 * s) = block;
    }
    return h;
}

Eigen::Matrix4cd closed_form_states(const SiVParams& p) {
    validate(p);
    const double ups2 = p.upsilon_x * p.upsilon_x + p.upsilon_y * p.upsilon_y;
    const double d_split = std::sqrt(p.lambda_so * p.lambda_so + 4.0 * ups2);
    const double denom = std::sqrt(p.lambda_so * p.lambda_so + 4.0 * p.upsilon_y * p.upsilon_y);
    const double theta = std::atan2(2.0 * p.upsilon_x + d_split, denom);
    const double phi = std::atan2(2.0 * p.upsilon_y, p.lambda_so);

    const double ct = std::cos(theta), st = std::sin(theta);
    const complex<double> em = std::exp(-kI * phi), ep = std::exp(kI * phi);

    Eigen::Matrix4cd v = Eigen::Matrix4cd::Zero();
    // a: lower branch, spin down          c: upper branch, spin down
    v(0, 0) = ct;
    v(1, 0) = -kI * st * em;
    v(0, 2) = st;
    v(1, 2) = kI * ct * em;
    // b: lower branch, spin up            d: upper branch, spin up
    v(2, 1) = ct;
    v(3, 1) = kI * st * ep;
    v(2, 3) = st;
    v(3, 3) = -kI * ct * ep;
    return v;
}

SiVGroundState diagonalize_ground(const SiVParams& p) {
    const Eigen::Matrix4cd h = build_ground_hamiltonian(p);

    SiVGroundState gs;
    const double ups2 = p.upsilon_x * p.upsilon_x + p.upsilon_y * p.upsilon_y;
    gs.splitting_d = std::sqrt(p.lambda_so * p.lambda_so + 4.0 * ups2);
    gs.omega_zeeman = p.gamma_spin * p.b_z;
    const double denom = std::sqrt(p.lambda_so * p.lambda_so + 4.0 * p.upsilon_y * p.upsilon_y);
    gs.theta = std::atan2(2.0 * p.upsilon_x, denom);
    gs.theta_exact = std::atan2(2.0 * p.upsilon_x + gs.splitting_d, denom);
    gs.phi = std::atan2(2.0 * p.upsilon_y, p.lambda_so);

    gs.states = Eigen::Matrix4cd::Zero();
    for (int s = 0; s < 2; ++s) {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(h.block<2, 2>(2 * s, 2 * s));
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("siv_model: 2x2 diagonalization failed");
        for (int branch = 0; branch < 2; ++branch) {
            // column 0: a (down) / 1: b (up); column 2: c (down) / 3: d (up)
            const int col = 2 * branch + s;
            Eigen::Vector2cd vec = solver.eigenvectors().col(branch);
            // Fix the free phase: e_x component real and positive. The e_x
            // weight never vanishes while lambda_so > 0.
            const complex<double> lead = vec(0);
            vec *= std::abs(lead) / lead;
            gs.states.block<2, 1>(2 * s, col) = vec;
            gs.energies[static_cast<std::size_t>(col)] = solver.eigenvalues()(branch);
        }
    }
    return gs;
}

StrainOperator strain_operator(const StrainInput& input) {
    const Eigen::Matrix3d& e = input.strain;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            if (!std::isfinite(e(r, c)))
                throw std::invalid_argument("strain_operator: non-finite strain tensor");
    check_finite(input.t_perp, "t_perp");
    check_finite(input.t_par, "t_par");
    check_finite(input.d, "d");
    check_finite(input.f, "f");
    const double scale = e.cwiseAbs().maxCoeff();
    if ((e - e.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0))
        throw std::invalid_argument("strain_operator: strain tensor must be symmetric");

    StrainOperator out;
    out.eps_a1g = input.t_perp * (e(0, 0) + e(1, 1)) + input.t_par * e(2, 2);
    out.eps_egx = input.d * (e(0, 0) - e(1, 1)) + input.f * e(2, 0);
    out.eps_egy = -2.0 * input.d * e(0, 1) + input.f * e(1, 2);

    // eps_egx (|x><x| - |y><y|) + eps_egy (|x><y| + |y><x|), same for both
    // spin sectors. Equivalent to the ladder form
    // eps_egx (L- + L+) - i eps_egy (L- - L+) with L+- = |e_-+><e_+-|.
    Eigen::Matrix2cd orb;
    orb << out.eps_egx, out.eps_egy, out.eps_egy, -out.eps_egx;

    out.op = Eigen::Matrix4cd::Zero();
    out.op.block<2, 2>(0, 0) = orb;
    out.op.block<2, 2>(2, 2) = orb;
    return out;
}

} // namespace sqz
