#include <benchmark/benchmark.h>

#include <vector>

#include "spinsqueeze/collective_spin.hpp"
#include "spinsqueeze/lindblad_engine.hpp"
#include "spinsqueeze/moment_dynamics.hpp"
#include "spinsqueeze/squeezing_analytics.hpp"

namespace {

std::vector<double> grid(double t_max, int n) {
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = t_max * i / (n - 1);
    return t;
}

void BM_BuildDickeOperators(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto ops = sqz::build_dicke_operators(n);
        benchmark::DoNotOptimize(ops.jy_sq.data());
    }
}

// Density-matrix propagation cost per unit twist time, dominated by the
// dense commutator/dissipator products inside the adaptive stepper.
void BM_ExactTwistEvolve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto ops = sqz::build_dicke_operators(n);
    const auto spec = sqz::make_oat_spec(n, 1.0, 0.01, 0.001, 1.0);
    const auto psi = sqz::coherent_spin_state_x(n);
    const Eigen::MatrixXcd rho0 = psi.amplitudes * psi.amplitudes.adjoint();
    sqz::EvolveOptions opt;
    opt.store_states = false;
    opt.observables = {{"jz2", ops.jz_sq}};
    const auto times = grid(0.05, 11);
    for (auto _ : state) {
        auto traj = sqz::evolve_lindblad(spec, rho0, times, opt);
        benchmark::DoNotOptimize(traj.expectations.data());
    }
}

// Large-J moment closure over the full horizon used by the trajectory mode,
// including the squeezing extraction sweep.
void BM_MomentTrace(benchmark::State& state) {
    sqz::MomentParams p;
    p.j_total = 500.0;
    p.lambda_twist = 1.0;
    p.gamma_s = 0.01;
    p.big_gamma_m = 0.001;
    p.n_th = 1.0;
    const auto times = grid(0.036, 2000);
    for (auto _ : state) {
        auto traj = sqz::evolve_moments(p, times);
        auto trace = sqz::squeezing_trace(traj, 1000);
        benchmark::DoNotOptimize(trace.optimum.xi2_opt);
    }
}

void BM_XiFromDensity(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto ops = sqz::build_dicke_operators(n);
    const auto spec = sqz::make_oat_spec(n, 1.0, 0.0, 0.0, 0.0);
    const auto psi = sqz::coherent_spin_state_x(n);
    const Eigen::MatrixXcd rho0 = psi.amplitudes * psi.amplitudes.adjoint();
    const auto traj = sqz::evolve_lindblad(spec, rho0, grid(0.05, 3));
    const Eigen::MatrixXcd rho = traj.states.back();
    for (auto _ : state) {
        auto point = sqz::xi_from_density(rho, ops);
        benchmark::DoNotOptimize(point.xi2);
    }
}

} // namespace

BENCHMARK(BM_BuildDickeOperators)->Arg(100)->Arg(400);
BENCHMARK(BM_ExactTwistEvolve)->Arg(20)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MomentTrace)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_XiFromDensity)->Arg(100)->Arg(400);

BENCHMARK_MAIN();
