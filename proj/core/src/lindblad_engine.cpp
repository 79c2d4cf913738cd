#include "spinsqueeze/lindblad_engine.hpp"

#include "spinsqueeze/collective_spin.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sqz {

namespace {

using std::complex;
constexpr complex<double> kI{0.0, 1.0};

constexpr double kTraceTol = 1e-9;
constexpr double kHermTol = 1e-9;
constexpr double kMinEigTol = -1e-7;

bool is_structurally_diagonal(const Eigen::MatrixXcd& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (i != j && m(i, j) != complex<double>(0.0, 0.0))
                return false;
    return true;
}

double hermiticity_defect(const Eigen::MatrixXcd& m) {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i <= j; ++i)
            worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
    return worst;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index ia = 0; ia < a.rows(); ++ia)
        for (Eigen::Index ja = 0; ja < a.cols(); ++ja)
            out.block(ia * b.rows(), ja * b.cols(), b.rows(), b.cols()) = a(ia, ja) * b;
    return out;
}

Eigen::VectorXcd kron_vec(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    Eigen::VectorXcd out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

std::string format_warning(const char* what, double value, double threshold) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << what << " " << value << " beyond threshold " << threshold;
    return os.str();
}

} // namespace

StateCheck check_density_matrix(const Eigen::MatrixXcd& rho) {
    if (rho.rows() != rho.cols() || rho.rows() == 0)
        throw std::invalid_argument("check_density_matrix: matrix must be square");
    StateCheck out;
    out.trace_error = std::abs(rho.trace() - complex<double>(1.0, 0.0));
    out.hermiticity_error = hermiticity_defect(rho);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
    out.min_eigenvalue = solver.eigenvalues().minCoeff();
    return out;
}

Trajectory evolve_lindblad(const LindbladSpec& spec, const Eigen::MatrixXcd& rho0,
                           const std::vector<double>& times, const EvolveOptions& options) {
    const Eigen::Index dim = spec.hamiltonian.rows();
    if (spec.hamiltonian.cols() != dim || dim == 0)
        throw std::invalid_argument("evolve_lindblad: Hamiltonian must be square");
    const double h_scale = std::max(1.0, spec.hamiltonian.cwiseAbs().maxCoeff());
    if (hermiticity_defect(spec.hamiltonian) > 1e-9 * h_scale)
        throw std::invalid_argument("evolve_lindblad: Hamiltonian is not Hermitian");
    for (const auto& ch : spec.channels) {
        if (ch.op.rows() != dim || ch.op.cols() != dim)
            throw std::invalid_argument("evolve_lindblad: channel dimension mismatch");
        if (!std::isfinite(ch.rate) || ch.rate < 0.0)
            throw std::invalid_argument("evolve_lindblad: channel rates must be >= 0");
    }
    if (rho0.rows() != dim || rho0.cols() != dim)
        throw std::invalid_argument("evolve_lindblad: rho0 dimension mismatch");
    if (std::abs(rho0.trace() - complex<double>(1.0, 0.0)) > 1e-9 ||
        hermiticity_defect(rho0) > 1e-9)
        throw std::invalid_argument("evolve_lindblad: rho0 must be unit-trace Hermitian");
    if (times.empty() || times.front() != 0.0)
        throw std::invalid_argument("evolve_lindblad: times must start at 0");
    for (const auto& ob : options.observables)
        if (ob.op.rows() != dim || ob.op.cols() != dim)
            throw std::invalid_argument("evolve_lindblad: observable dimension mismatch");

    // Element-wise generator for everything diagonal in the working basis:
    // W(m,n) = -i(h_m - h_n)
    //        + sum_diag rate (l_m conj(l_n) - (|l_m|^2 + |l_n|^2)/2).
    const bool h_diagonal = is_structurally_diagonal(spec.hamiltonian);
    Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(dim, dim);
    bool use_w = h_diagonal;
    if (h_diagonal) {
        const Eigen::VectorXcd h = spec.hamiltonian.diagonal();
        for (Eigen::Index n = 0; n < dim; ++n)
            for (Eigen::Index m = 0; m < dim; ++m)
                w(m, n) += -kI * (h(m) - h(n));
    }
    struct DenseChannel {
        Eigen::MatrixXcd l, ldag, ldagl;
        double rate;
    };
    std::vector<DenseChannel> dense;
    for (const auto& ch : spec.channels) {
        if (ch.rate == 0.0) continue;
        if (is_structurally_diagonal(ch.op)) {
            use_w = true;
            const Eigen::VectorXcd l = ch.op.diagonal();
            for (Eigen::Index n = 0; n < dim; ++n)
                for (Eigen::Index m = 0; m < dim; ++m)
                    w(m, n) += ch.rate * (l(m) * std::conj(l(n)) -
                                          0.5 * (std::norm(l(m)) + std::norm(l(n))));
        } else {
            dense.push_back({ch.op, ch.op.adjoint(), ch.op.adjoint() * ch.op, ch.rate});
        }
    }

    Eigen::MatrixXcd tmp1(dim, dim), tmp2(dim, dim);
    const auto rhs = [&](double, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
        Eigen::Map<const Eigen::MatrixXcd> rho(y.data(), dim, dim);
        Eigen::Map<Eigen::MatrixXcd> out(dy.data(), dim, dim);
        if (use_w)
            out = w.cwiseProduct(rho);
        else
            out.setZero();
        if (!h_diagonal) {
            tmp1.noalias() = spec.hamiltonian * rho;
            tmp2.noalias() = rho * spec.hamiltonian;
            out += -kI * (tmp1 - tmp2);
        }
        for (const auto& ch : dense) {
            tmp1.noalias() = ch.l * rho;
            tmp2.noalias() = tmp1 * ch.ldag;
            out += ch.rate * tmp2;
            tmp1.noalias() = ch.ldagl * rho;
            tmp2.noalias() = rho * ch.ldagl;
            out -= (0.5 * ch.rate) * (tmp1 + tmp2);
        }
    };

    Trajectory traj;
    traj.times = times;
    const auto n_times = times.size();
    const auto n_obs = options.observables.size();
    traj.observable_names.reserve(n_obs);
    for (const auto& ob : options.observables) traj.observable_names.push_back(ob.name);
    traj.expectations.resize(static_cast<Eigen::Index>(n_times),
                             static_cast<Eigen::Index>(n_obs));
    if (options.store_states) traj.states.reserve(n_times);

    const std::size_t stride =
        options.positivity_stride > 0
            ? static_cast<std::size_t>(options.positivity_stride)
            : std::max<std::size_t>(1, n_times / 32);

    // Breaches are coalesced into one warning record per invariant so a slow
    // drift does not flood the log; the record keeps the first breach time
    // and reports the worst value seen.
    struct Breach {
        int count = 0;
        double first_t = 0.0, worst_t = 0.0, worst_v = 0.0;
        void note(double t, double v, bool worse) {
            if (count == 0) {
                first_t = t;
                worst_t = t;
                worst_v = v;
            } else if (worse) {
                worst_t = t;
                worst_v = v;
            }
            ++count;
        }
    };
    Breach trace_breach, herm_breach, eig_breach;

    const auto observer = [&](std::size_t idx, double t, const Eigen::VectorXcd& y) {
        Eigen::Map<const Eigen::MatrixXcd> rho(y.data(), dim, dim);
        const double tr_err = std::abs(rho.trace() - complex<double>(1.0, 0.0));
        if (tr_err > kTraceTol) trace_breach.note(t, tr_err, tr_err > trace_breach.worst_v);
        const double herm = hermiticity_defect(rho);
        if (herm > kHermTol) herm_breach.note(t, herm, herm > herm_breach.worst_v);
        if (idx % stride == 0 || idx + 1 == n_times) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
            const double min_eig = solver.eigenvalues().minCoeff();
            if (min_eig < kMinEigTol) eig_breach.note(t, min_eig, min_eig < eig_breach.worst_v);
        }
        for (std::size_t k = 0; k < n_obs; ++k)
            traj.expectations(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(k)) =
                rho.cwiseProduct(options.observables[k].op.transpose()).sum().real();
        if (options.store_states) traj.states.emplace_back(rho);
    };

    Eigen::Map<const Eigen::VectorXcd> y0(rho0.data(), dim * dim);
    integrate_adaptive(rhs, y0, times, options.ode, observer);

    const auto flush_breach = [&](const Breach& b, const char* what, double tol) {
        if (b.count == 0) return;
        std::ostringstream os;
        os << format_warning(what, b.worst_v, tol) << " (worst of " << b.count
           << " flagged points, worst at t = " << b.worst_t << ")";
        traj.warnings.push_back({b.first_t, os.str()});
    };
    flush_breach(trace_breach, "trace drift", kTraceTol);
    flush_breach(herm_breach, "hermiticity defect", kHermTol);
    flush_breach(eig_breach, "negative eigenvalue", kMinEigTol);
    return traj;
}

LindbladSpec make_oat_spec(int n_spins, double lambda_twist, double gamma_s,
                           double big_gamma_m, double n_th, double linear_z) {
    if (!std::isfinite(lambda_twist) || !std::isfinite(linear_z))
        throw std::invalid_argument("make_oat_spec: twisting rate must be finite");
    if (!std::isfinite(gamma_s) || gamma_s < 0.0 || !std::isfinite(big_gamma_m) ||
        big_gamma_m < 0.0)
        throw std::invalid_argument("make_oat_spec: rates must be finite and >= 0");
    if (!std::isfinite(n_th) || n_th < 0.0)
        throw std::invalid_argument("make_oat_spec: n_th must be finite and >= 0");

    const DickeOperators ops = build_dicke_operators(n_spins);
    LindbladSpec spec;
    spec.hamiltonian = -lambda_twist * ops.jz_sq;
    if (linear_z != 0.0) spec.hamiltonian += linear_z * ops.jz;
    if (gamma_s != 0.0) spec.channels.push_back({ops.jz, gamma_s});
    if (big_gamma_m != 0.0) {
        spec.channels.push_back({ops.jm, (n_th + 1.0) * big_gamma_m});
        spec.channels.push_back({ops.jp, n_th * big_gamma_m});
    }
    return spec;
}

TavisCummingsResult evolve_tavis_cummings(int n_spins, double g_e, double detuning,
                                          int n_phonon_max,
                                          const Eigen::VectorXcd& spin_state0,
                                          const Eigen::VectorXcd& phonon_state0,
                                          const std::vector<double>& times,
                                          const EvolveOptions& options) {
    if (!std::isfinite(g_e) || g_e < 0.0 || !std::isfinite(detuning))
        throw std::invalid_argument("evolve_tavis_cummings: coupling/detuning must be finite");
    if (n_phonon_max < 2)
        throw std::invalid_argument(
            "evolve_tavis_cummings: n_phonon_max must be >= 2 (guard levels)");

    const DickeOperators ops = build_dicke_operators(n_spins);
    const int ds = ops.dim;
    const int dp = n_phonon_max + 1;

    if (spin_state0.size() != ds)
        throw std::invalid_argument("evolve_tavis_cummings: spin state dimension mismatch");
    if (std::abs(spin_state0.norm() - 1.0) > 1e-9 ||
        std::abs(phonon_state0.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("evolve_tavis_cummings: initial states must be normalized");

    // Two guard levels: initial weight at or above level n_phonon_max - 1
    // must be negligible, as must anything past the truncation edge.
    double tail = 0.0;
    for (Eigen::Index p = 0; p < phonon_state0.size(); ++p)
        if (p >= dp - 2) tail += std::norm(phonon_state0(p));
    if (tail >= 1e-8)
        throw TruncationError(
            "evolve_tavis_cummings: initial phonon tail " + std::to_string(tail) +
            " at the truncation edge; increase n_phonon_max");

    Eigen::VectorXcd phonon = Eigen::VectorXcd::Zero(dp);
    const Eigen::Index n_copy = std::min<Eigen::Index>(phonon_state0.size(), dp);
    phonon.head(n_copy) = phonon_state0.head(n_copy);

    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(dp, dp);
    for (int p = 0; p + 1 < dp; ++p) b(p, p + 1) = std::sqrt(static_cast<double>(p + 1));
    const Eigen::MatrixXcd bdag = b.adjoint();
    const Eigen::MatrixXcd eye_p = Eigen::MatrixXcd::Identity(dp, dp);
    const Eigen::MatrixXcd eye_s = Eigen::MatrixXcd::Identity(ds, ds);

    LindbladSpec spec;
    spec.hamiltonian = detuning * kron(ops.jz, eye_p) +
                       g_e * (kron(ops.jm, bdag) + kron(ops.jp, b));

    const Eigen::VectorXcd joint0 = kron_vec(spin_state0, phonon);
    const Eigen::MatrixXcd rho0 = joint0 * joint0.adjoint();

    EvolveOptions joint_options = options;
    joint_options.store_states = true;
    Eigen::MatrixXcd top = Eigen::MatrixXcd::Zero(dp, dp);
    top(dp - 1, dp - 1) = 1.0;
    joint_options.observables.push_back({"excitation",
                                         kron(ops.jz, eye_p) + kron(eye_s, bdag * b)});
    joint_options.observables.push_back({"phonon_number", kron(eye_s, bdag * b)});
    joint_options.observables.push_back({"phonon_top_population", kron(eye_s, top)});

    TavisCummingsResult result;
    result.dispersive_ratio = detuning != 0.0 ? g_e / std::abs(detuning)
                                              : std::numeric_limits<double>::infinity();
    result.joint = evolve_lindblad(spec, rho0, times, joint_options);

    const Eigen::Index top_col = result.joint.expectations.cols() - 1;
    for (Eigen::Index i = 0; i < result.joint.expectations.rows(); ++i) {
        const double pop = result.joint.expectations(i, top_col);
        if (pop > 1e-8)
            throw TruncationError("evolve_tavis_cummings: truncation level populated (" +
                                  std::to_string(pop) + " at t index " + std::to_string(i) +
                                  "); increase n_phonon_max");
    }

    result.reduced_spin.times = times;
    result.reduced_spin.states.reserve(result.joint.states.size());
    for (const auto& rho : result.joint.states)
        result.reduced_spin.states.push_back(partial_trace_phonon(rho, ds, dp));
    if (!options.store_states) result.joint.states.clear();
    return result;
}

std::complex<double> expectation(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& op) {
    return rho.cwiseProduct(op.transpose()).sum();
}

double real_expectation(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& op) {
    return expectation(rho, op).real();
}

double state_fidelity(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> rho_solver(rho);
    if (rho_solver.info() != Eigen::Success)
        throw std::runtime_error("state_fidelity: eigendecomposition failed");
    Eigen::VectorXd vals = rho_solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::MatrixXcd sqrt_rho = rho_solver.eigenvectors() * vals.asDiagonal() *
                                      rho_solver.eigenvectors().adjoint();
    const Eigen::MatrixXcd m = sqrt_rho * sigma * sqrt_rho;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> m_solver(
        (m + m.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
    return m_solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho - sigma,
                                                           Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double purity(const Eigen::MatrixXcd& rho) { return rho.squaredNorm(); }

Eigen::MatrixXcd rotate_about_z(const Eigen::MatrixXcd& rho, double angle,
                                const Eigen::VectorXd& m_values) {
    if (m_values.size() != rho.rows() || rho.rows() != rho.cols())
        throw std::invalid_argument("rotate_about_z: dimension mismatch");
    Eigen::VectorXcd phase(m_values.size());
    for (Eigen::Index i = 0; i < m_values.size(); ++i)
        phase(i) = std::exp(kI * (angle * m_values(i)));
    return phase.asDiagonal() * rho * phase.conjugate().asDiagonal();
}

Eigen::VectorXcd rotate_vector_about_z(const Eigen::VectorXcd& psi, double angle,
                                       const Eigen::VectorXd& m_values) {
    if (m_values.size() != psi.size())
        throw std::invalid_argument("rotate_vector_about_z: dimension mismatch");
    Eigen::VectorXcd out(psi.size());
    for (Eigen::Index i = 0; i < psi.size(); ++i)
        out(i) = std::exp(kI * (angle * m_values(i))) * psi(i);
    return out;
}

double mean_spin_angle(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& jx,
                       const Eigen::MatrixXcd& jy) {
    return std::atan2(real_expectation(rho, jy), real_expectation(rho, jx));
}

Eigen::MatrixXcd partial_trace_phonon(const Eigen::MatrixXcd& joint_rho, int spin_dim,
                                      int phonon_dim) {
    if (joint_rho.rows() != spin_dim * phonon_dim || joint_rho.rows() != joint_rho.cols())
        throw std::invalid_argument("partial_trace_phonon: dimension mismatch");
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(spin_dim, spin_dim);
    for (int s = 0; s < spin_dim; ++s)
        for (int t = 0; t < spin_dim; ++t)
            for (int p = 0; p < phonon_dim; ++p)
                out(s, t) += joint_rho(s * phonon_dim + p, t * phonon_dim + p);
    return out;
}

} // namespace sqz
