#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "spinsqueeze/ode.hpp"

namespace sqz {

// Density-matrix evolution under drho/dt = -i[H, rho] + sum_k rate_k D(L_k)rho
// with D(L)rho = L rho L^dag - (1/2){L^dag L, rho}. Dimensions are expected to
// stay small enough for dense algebra (a few hundred); large-N work belongs to
// the moment integrator.

struct LindbladChannel {
    Eigen::MatrixXcd op;
    double rate = 0.0; // >= 0
};

struct LindbladSpec {
    Eigen::MatrixXcd hamiltonian; // Hermitian, angular frequency units
    std::vector<LindbladChannel> channels;
};

struct TrajectoryWarning {
    double time = 0.0;
    std::string message;
};

// Output grid plus whatever was recorded along it. `states` is empty when the
// evolution ran storage-lean; `expectations` has one row per time and one
// column per requested observable (real parts; observables are Hermitian).
struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::MatrixXcd> states;
    std::vector<std::string> observable_names;
    Eigen::MatrixXd expectations;
    std::vector<TrajectoryWarning> warnings;
};

struct Observable {
    std::string name;
    Eigen::MatrixXcd op;
};

struct EvolveOptions {
    OdeOptions ode{};
    bool store_states = true;
    std::vector<Observable> observables;
    // Positivity (min eigenvalue) is sampled, not checked at every output
    // time: it costs a full eigensolve. 0 picks a stride that covers ~32
    // output points; 1 checks everywhere.
    int positivity_stride = 0;
};

struct StateCheck {
    double trace_error = 0.0;      // |tr rho - 1|
    double hermiticity_error = 0.0; // max |rho - rho^dag|
    double min_eigenvalue = 0.0;
};

StateCheck check_density_matrix(const Eigen::MatrixXcd& rho);

// Integrates the master equation over the strictly increasing grid `times`
// (first entry 0, where rho0 applies). Invariant drift beyond thresholds
// (trace/Hermiticity 1e-9, min eigenvalue -1e-7) is recorded as trajectory
// warnings; integration failure raises IntegrationError.
Trajectory evolve_lindblad(const LindbladSpec& spec, const Eigen::MatrixXcd& rho0,
                           const std::vector<double>& times,
                           const EvolveOptions& options = {});

// Twisting master equation on the symmetric (Dicke) sector of n_spins:
// H = -lambda_twist Jz^2 [+ linear_z Jz], channels gamma_s D(Jz),
// (n_th+1) big_gamma_m D(J-), n_th big_gamma_m D(J+). The linear Jz term is
// an exactly removable frame rotation when the phonon sits in vacuum, so it
// is dropped by default; pass linear_z to restore it for frame-sensitivity
// studies. Dephasing/damping channels are only added when their parent rate
// is nonzero, but a nonzero big_gamma_m with n_th = 0 keeps the J+ channel
// with rate exactly 0.
LindbladSpec make_oat_spec(int n_spins, double lambda_twist, double gamma_s,
                           double big_gamma_m, double n_th, double linear_z = 0.0);

struct TavisCummingsResult {
    Trajectory joint;        // spin (x) phonon, spin-major index s*(n_max+1)+p
    Trajectory reduced_spin; // phonon traced out, states always stored
    double dispersive_ratio = 0.0; // g_e / detuning
};

// Evolves H = detuning*Jz + g_e*(b^dag J- + b J+) on the truncated joint
// space. The initial phonon amplitudes must leave < 1e-8 weight above
// n_phonon_max - 2 (two guard levels); the top truncation level is monitored
// during the run and a breach raises TruncationError advising a larger
// n_phonon_max. Intended for validation-scale dimensions.
TavisCummingsResult evolve_tavis_cummings(int n_spins, double g_e, double detuning,
                                          int n_phonon_max,
                                          const Eigen::VectorXcd& spin_state0,
                                          const Eigen::VectorXcd& phonon_state0,
                                          const std::vector<double>& times,
                                          const EvolveOptions& options = {});

// tr(rho * op).
std::complex<double> expectation(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& op);
double real_expectation(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& op);

// Uhlmann fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)). Note: the root
// convention, not its square.
double state_fidelity(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma);

// (1/2)||rho - sigma||_1.
double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma);

// tr(rho^2) assuming rho Hermitian.
double purity(const Eigen::MatrixXcd& rho);

// Conjugation by exp(i*angle*diag(m_values)): element (m,n) gains
// exp(i*angle*(m_m - m_n)). With angle = atan2(<Jy>,<Jx>) this turns the mean
// spin back onto +x.
Eigen::MatrixXcd rotate_about_z(const Eigen::MatrixXcd& rho, double angle,
                                const Eigen::VectorXd& m_values);
Eigen::VectorXcd rotate_vector_about_z(const Eigen::VectorXcd& psi, double angle,
                                       const Eigen::VectorXd& m_values);

double mean_spin_angle(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& jx,
                       const Eigen::MatrixXcd& jy);

// rho_spin[s,s'] = sum_p rho[(s,p),(s',p)] for the spin-major joint layout.
Eigen::MatrixXcd partial_trace_phonon(const Eigen::MatrixXcd& joint_rho, int spin_dim,
                                      int phonon_dim);

} // namespace sqz
