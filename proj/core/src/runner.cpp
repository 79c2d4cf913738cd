#include "spinsqueeze/runner.hpp"

#include "spinsqueeze/collective_spin.hpp"
#include "spinsqueeze/errors.hpp"
#include "spinsqueeze/lindblad_engine.hpp"
#include "spinsqueeze/moment_dynamics.hpp"
#include "spinsqueeze/squeezing_analytics.hpp"
#include "spinsqueeze/svg_plot.hpp"
#include "spinsqueeze/units.hpp"
#include "spinsqueeze/waveguide_phonons.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace sqz {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string freq_pair(double angular) {
    return fmt6(angular) + " rad/s (" + fmt6(units::hz_from_angular(angular)) + " Hz)";
}

std::vector<double> linspace_from_zero(double t_max, int n) {
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = t_max * double(i) / double(n - 1);
    t.front() = 0.0;
    return t;
}

void atomic_write(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os)
            throw fs::filesystem_error("cannot open for writing", tmp,
                                       std::make_error_code(std::errc::io_error));
        os << content;
        os.flush();
        if (!os)
            throw fs::filesystem_error("write failed", tmp,
                                       std::make_error_code(std::errc::io_error));
    }
    fs::rename(tmp, path);
}

std::string effective_prefix(const ScenarioConfig& cfg) {
    if (!cfg.output.prefix.empty()) return cfg.output.prefix;
    std::string p = to_string(cfg.mode);
    for (char& c : p)
        if (c == '-') c = '_';
    return p;
}

fs::path output_path(const ScenarioConfig& cfg, const std::string& suffix) {
    const fs::path dir = cfg.output.dir.empty() ? fs::path(".") : fs::path(cfg.output.dir);
    fs::create_directories(dir);
    return dir / (effective_prefix(cfg) + suffix);
}

struct TimeGrid {
    std::vector<double> times;
    double t_max = 0.0;
    bool derived = false; // true when t_max came from the ideal-optimum scaling
};

TimeGrid make_grid(const ScenarioConfig& cfg, double fallback_t_max) {
    TimeGrid g;
    g.t_max = cfg.dynamics.t_max;
    if (g.t_max <= 0.0) {
        g.t_max = fallback_t_max;
        g.derived = true;
    }
    g.times = linspace_from_zero(g.t_max, cfg.dynamics.n_steps);
    return g;
}

OdeOptions ode_options(const ScenarioConfig& cfg) {
    OdeOptions o;
    o.rtol = cfg.dynamics.rtol;
    o.atol = cfg.dynamics.atol;
    return o;
}

void append_trajectory_warnings(RunReport& rep, const std::vector<TrajectoryWarning>& ws) {
    for (const auto& w : ws) rep.warnings.push_back("t=" + fmt6(w.time) + " s: " + w.message);
}

void emit_xi2_svg(const ScenarioConfig& cfg, RunReport& rep,
                  const std::vector<SqueezingPoint>& points) {
    if (!cfg.output.svg) return;
    SvgSeries s;
    s.label = "xi^2";
    for (const auto& p : points) {
        s.x.push_back(p.time);
        s.y.push_back(p.xi2);
    }
    SvgPlotOptions opts;
    opts.title = "squeezing parameter";
    opts.x_label = "t [s]";
    opts.y_label = "xi^2";
    opts.log_y = true;
    const fs::path path = output_path(cfg, "_xi2.svg");
    atomic_write(path, render_line_plot({s}, opts));
    rep.files.push_back(path.string());
}

void record_optimum(const ScenarioConfig& cfg, RunReport& rep,
                    const std::vector<SqueezingPoint>& points) {
    const OptimumResult opt = locate_optimum(points);
    rep.has_optimum = true;
    rep.t_opt = opt.t_opt;
    rep.xi2_opt = opt.xi2_opt;
    if (!opt.interior)
        rep.warnings.push_back(
            "squeezing minimum sits on the time-grid boundary; extend dynamics.t_max "
            "to bracket it");
    if (cfg.dynamics.t_max <= 0.0)
        rep.parameters.emplace_back("t_max", fmt6(points.back().time) + " s (auto)");
    else
        rep.parameters.emplace_back("t_max", fmt6(cfg.dynamics.t_max) + " s");
}

std::string trajectory_csv(const std::vector<double>& times,
                           const std::vector<MomentVector>& lab_moments,
                           const std::vector<SqueezingPoint>& points,
                           const std::vector<double>* fidelity) {
    std::ostringstream os;
    os << "t_s,jx,jy,jz,jy2,jz2,jyz,xi2,alpha_min_rad";
    if (fidelity) os << ",fidelity_vs_oat";
    os << '\n';
    const std::size_t n = points.size();
    for (std::size_t i = 0; i < n; ++i) {
        const MomentVector& m = lab_moments[i];
        os << fmt(times[i]) << ',' << fmt(m.jx) << ',' << fmt(m.jy) << ',' << fmt(m.jz) << ','
           << fmt(m.jy2) << ',' << fmt(m.jz2) << ',' << fmt(m.jyz) << ',' << fmt(points[i].xi2)
           << ',' << fmt(points[i].alpha_min);
        if (fidelity) os << ',' << fmt((*fidelity)[i]);
        os << '\n';
    }
    return os.str();
}

void common_dynamics_parameters(const ScenarioConfig& cfg, RunReport& rep) {
    rep.parameters.emplace_back("n_spins", std::to_string(cfg.ensemble.n_spins));
    rep.parameters.emplace_back("j_total", fmt6(0.5 * cfg.ensemble.n_spins));
    rep.parameters.emplace_back("lambda", freq_pair(cfg.dynamics.lambda));
    rep.parameters.emplace_back("gamma_s", freq_pair(cfg.dynamics.gamma_s));
    rep.parameters.emplace_back("big_gamma_m", freq_pair(cfg.dynamics.big_gamma_m));
    rep.parameters.emplace_back("n_th", fmt6(cfg.dynamics.n_th));
    rep.parameters.emplace_back("n_steps", std::to_string(cfg.dynamics.n_steps));
}

RunReport run_budget(const ScenarioConfig& cfg) {
    RunReport rep;
    rep.mode = RunMode::budget;
    const WaveguideSpec& wg = cfg.device.waveguide;

    const double v_l = longitudinal_speed(wg);
    const int n_max = std::max(cfg.device.mode_branch, 3);
    const ModeSpectrum spectrum = compression_mode_spectrum(wg, n_max);
    const PhononMode& mode =
        spectrum.modes.at(static_cast<std::size_t>(cfg.device.mode_branch - 1));
    const double omega_m = cfg.device.omega_m > 0.0 ? cfg.device.omega_m : mode.omega;
    const double volume = wg.length_l * wg.width_w * wg.thickness_t;
    const double q_zero = zero_point_amplitude(omega_m, wg.density_rho, volume);
    const double g_single =
        single_spin_coupling(cfg.device.d_strain, v_l, omega_m, wg.density_rho, volume);
    const double gamma_m = omega_m / cfg.device.q_factor;

    if (cfg.dynamics.n_th_set)
        rep.warnings.push_back(
            "dynamics.n_th is ignored in budget mode; thermal occupation is derived "
            "from device.temperature");
    if (cfg.dynamics.lambda > 0.0)
        rep.warnings.push_back(
            "dynamics.lambda is ignored in budget mode; the twisting rate is derived "
            "from the device");
    if (cfg.dynamics.big_gamma_m_abs_set || cfg.dynamics.big_gamma_m_ratio >= 0.0)
        rep.warnings.push_back(
            "dynamics.big_gamma_m is ignored in budget mode; it is derived as "
            "gamma_m/detuning_ratio^2");

    double gamma_s = cfg.dynamics.gamma_s_abs_set ? cfg.dynamics.gamma_s : 0.0;
    CouplingBudget budget = make_budget(g_single, cfg.ensemble.n_spins,
                                        cfg.ensemble.detuning_ratio, gamma_m, gamma_s,
                                        omega_m, cfg.device.temperature);
    if (cfg.dynamics.gamma_s_ratio >= 0.0) {
        if (cfg.dynamics.gamma_s_abs_set)
            rep.warnings.push_back(
                "both dynamics.gamma_s and dynamics.gamma_s_over_lambda given; using the "
                "ratio against the derived twisting rate");
        gamma_s = cfg.dynamics.gamma_s_ratio * budget.lambda_twist;
        budget = make_budget(g_single, cfg.ensemble.n_spins, cfg.ensemble.detuning_ratio,
                             gamma_m, gamma_s, omega_m, cfg.device.temperature);
    }
    for (const auto& w : budget.warnings) rep.warnings.push_back(w);
    if (!spectrum.well_separated)
        rep.warnings.push_back(
            "compression-mode spacing is below 2*pi*50 MHz; the single-mode treatment "
            "is questionable for this geometry");

    rep.parameters.emplace_back("longitudinal_speed", fmt6(v_l) + " m/s");
    rep.parameters.emplace_back("mode_spacing", freq_pair(spectrum.spacing));
    rep.parameters.emplace_back("mode_branch", std::to_string(cfg.device.mode_branch));
    rep.parameters.emplace_back("omega_m", freq_pair(omega_m));
    rep.parameters.emplace_back("zero_point_amplitude", fmt6(q_zero) + " m");
    rep.parameters.emplace_back("g_single", freq_pair(budget.g_single));
    rep.parameters.emplace_back("n_spins", std::to_string(budget.n_spins));
    rep.parameters.emplace_back("g_collective", freq_pair(budget.g_collective));
    rep.parameters.emplace_back("detuning", freq_pair(budget.detuning));
    rep.parameters.emplace_back("lambda_twist", freq_pair(budget.lambda_twist));
    rep.parameters.emplace_back("gamma_m", freq_pair(budget.gamma_m));
    rep.parameters.emplace_back("big_gamma_m", freq_pair(budget.big_gamma_m));
    rep.parameters.emplace_back("gamma_s", freq_pair(budget.gamma_s_dephase));
    rep.parameters.emplace_back("n_th", fmt6(budget.n_th));
    rep.parameters.emplace_back("eta", budget.eta ? fmt6(*budget.eta) : std::string("n/a"));

    std::ostringstream csv;
    csv << "quantity,value,unit\n";
    csv << "longitudinal_speed," << fmt(v_l) << ",m/s\n";
    csv << "mode_spacing," << fmt(spectrum.spacing) << ",rad/s\n";
    csv << "mode_spacing_over_2pi," << fmt(units::hz_from_angular(spectrum.spacing)) << ",Hz\n";
    csv << "omega_m," << fmt(omega_m) << ",rad/s\n";
    csv << "omega_m_over_2pi," << fmt(units::hz_from_angular(omega_m)) << ",Hz\n";
    csv << "zero_point_amplitude," << fmt(q_zero) << ",m\n";
    csv << "g_single," << fmt(budget.g_single) << ",rad/s\n";
    csv << "g_single_over_2pi," << fmt(units::hz_from_angular(budget.g_single)) << ",Hz\n";
    csv << "g_collective," << fmt(budget.g_collective) << ",rad/s\n";
    csv << "g_collective_over_2pi," << fmt(units::hz_from_angular(budget.g_collective))
        << ",Hz\n";
    csv << "detuning," << fmt(budget.detuning) << ",rad/s\n";
    csv << "lambda_twist," << fmt(budget.lambda_twist) << ",rad/s\n";
    csv << "lambda_twist_over_2pi," << fmt(units::hz_from_angular(budget.lambda_twist))
        << ",Hz\n";
    csv << "gamma_m," << fmt(budget.gamma_m) << ",rad/s\n";
    csv << "big_gamma_m," << fmt(budget.big_gamma_m) << ",rad/s\n";
    csv << "big_gamma_m_over_2pi," << fmt(units::hz_from_angular(budget.big_gamma_m))
        << ",Hz\n";
    csv << "gamma_s," << fmt(budget.gamma_s_dephase) << ",rad/s\n";
    csv << "n_th," << fmt(budget.n_th) << ",\n";
    if (budget.eta) csv << "eta," << fmt(*budget.eta) << ",\n";
    const fs::path path = output_path(cfg, "_budget.csv");
    atomic_write(path, csv.str());
    rep.files.push_back(path.string());
    return rep;
}

RunReport run_moments(const ScenarioConfig& cfg) {
    RunReport rep;
    rep.mode = RunMode::simulate_moments;
    const double j = 0.5 * cfg.ensemble.n_spins;
    const TimeGrid grid = make_grid(cfg, 3.0 * ideal_optimum(j, cfg.dynamics.lambda).t_min);

    MomentParams params;
    params.j_total = j;
    params.lambda_twist = cfg.dynamics.lambda;
    params.gamma_s = cfg.dynamics.gamma_s;
    params.big_gamma_m = cfg.dynamics.big_gamma_m;
    params.n_th = cfg.dynamics.n_th;

    const MomentTrajectory traj = evolve_moments(params, grid.times, ode_options(cfg));
    for (const auto& w : traj.warnings) rep.warnings.push_back(w);

    const SqueezingTrace trace = squeezing_trace(traj, cfg.ensemble.n_spins);
    common_dynamics_parameters(cfg, rep);
    record_optimum(cfg, rep, trace.points);

    const fs::path path = output_path(cfg, "_trajectory.csv");
    atomic_write(path, trajectory_csv(traj.times, traj.moments, trace.points, nullptr));
    rep.files.push_back(path.string());
    emit_xi2_svg(cfg, rep, trace.points);
    return rep;
}

RunReport run_exact(const ScenarioConfig& cfg) {
    RunReport rep;
    rep.mode = RunMode::simulate_exact;
    const int n = cfg.ensemble.n_spins;
    if (n > kMaxFullMatrixSpins)
        throw ConfigError("ensemble.n_spins = " + std::to_string(n) +
                          " exceeds the exact-engine limit of " +
                          std::to_string(kMaxFullMatrixSpins));
    const double j = 0.5 * n;
    const TimeGrid grid = make_grid(cfg, 3.0 * ideal_optimum(j, cfg.dynamics.lambda).t_min);

    const DickeOperators ops = build_dicke_operators(n);
    const LindbladSpec spec =
        make_oat_spec(n, cfg.dynamics.lambda, cfg.dynamics.gamma_s, cfg.dynamics.big_gamma_m,
                      cfg.dynamics.n_th);
    const Eigen::VectorXcd psi0 = coherent_spin_state_x(n).amplitudes;
    const Eigen::MatrixXcd rho0 = psi0 * psi0.adjoint();

    EvolveOptions opts;
    opts.ode = ode_options(cfg);
    opts.store_states = false;
    opts.observables = {
        {"jx", ops.jx},        {"jy", ops.jy},        {"jz", ops.jz},
        {"jx2", ops.jx_sq},    {"jy2", ops.jy_sq},    {"jz2", ops.jz_sq},
        {"jxy", ops.jxy_sym},  {"jxz", ops.jxz_sym},  {"jyz", ops.jyz_sym},
    };

    const Trajectory traj = evolve_lindblad(spec, rho0, grid.times, opts);
    append_trajectory_warnings(rep, traj.warnings);

    std::vector<SqueezingPoint> points;
    std::vector<MomentVector> lab;
    std::vector<double> kept_times;
    points.reserve(grid.times.size());
    for (Eigen::Index i = 0; i < traj.expectations.rows(); ++i) {
        SpinMomentRecord rec;
        rec.jx = traj.expectations(i, 0);
        rec.jy = traj.expectations(i, 1);
        rec.jz = traj.expectations(i, 2);
        rec.jx2 = traj.expectations(i, 3);
        rec.jy2 = traj.expectations(i, 4);
        rec.jz2 = traj.expectations(i, 5);
        rec.jxy = traj.expectations(i, 6);
        rec.jxz = traj.expectations(i, 7);
        rec.jyz = traj.expectations(i, 8);
        SqueezingPoint pt;
        try {
            pt = xi_from_record(rec, n);
        } catch (const std::domain_error&) {
            rep.warnings.push_back("mean spin vanished at t=" + fmt6(grid.times[i]) +
                                   " s; trajectory truncated there");
            break;
        }
        pt.time = grid.times[static_cast<std::size_t>(i)];
        points.push_back(pt);
        MomentVector m;
        m.jx = rec.jx;
        m.jy = rec.jy;
        m.jz = rec.jz;
        m.jy2 = rec.jy2;
        m.jz2 = rec.jz2;
        m.jyz = rec.jyz;
        lab.push_back(m);
        kept_times.push_back(pt.time);
    }
    if (points.size() < 3)
        throw IntegrationError("fewer than three usable grid points survived",
                               points.empty() ? 0.0 : points.back().time);

    common_dynamics_parameters(cfg, rep);
    record_optimum(cfg, rep, points);

    const fs::path path = output_path(cfg, "_trajectory.csv");
    atomic_write(path, trajectory_csv(kept_times, lab, points, nullptr));
    rep.files.push_back(path.string());
    emit_xi2_svg(cfg, rep, points);
    return rep;
}

RunReport run_tavis_cummings(const ScenarioConfig& cfg) {
    RunReport rep;
    rep.mode = RunMode::simulate_tc;
    const int n = cfg.ensemble.n_spins;
    const double lambda = cfg.dynamics.lambda;
    const double r = cfg.dynamics.dispersive_ratio;
    const double g_e = lambda / r;
    const double detuning = lambda / (r * r);
    const int n_phonon = cfg.dynamics.n_phonon_max > 0 ? cfg.dynamics.n_phonon_max : n + 2;
    const long joint_dim = static_cast<long>(n + 1) * (n_phonon + 1);
    if (joint_dim > 1024)
        throw ConfigError("joint dimension " + std::to_string(joint_dim) +
                          " too large; reduce ensemble.n_spins or dynamics.n_phonon_max");

    const TimeGrid grid = make_grid(cfg, 1.0 / lambda);
    const DickeOperators ops = build_dicke_operators(n);
    const Eigen::VectorXcd spin0 = coherent_spin_state_x(n).amplitudes;
    Eigen::VectorXcd phonon0 = Eigen::VectorXcd::Zero(n_phonon + 1);
    phonon0(0) = 1.0;

    EvolveOptions opts;
    opts.ode = ode_options(cfg);
    opts.store_states = false; // joint states dropped; reduced spin states kept

    const TavisCummingsResult tc =
        evolve_tavis_cummings(n, g_e, detuning, n_phonon, spin0, phonon0, grid.times, opts);
    append_trajectory_warnings(rep, tc.joint.warnings);

    // Ideal one-axis-twisting reference on the same grid, both states
    // realigned about z before comparison.
    const LindbladSpec oat = make_oat_spec(n, lambda, 0.0, 0.0, 0.0);
    const Eigen::MatrixXcd rho0 = spin0 * spin0.adjoint();
    EvolveOptions oat_opts;
    oat_opts.ode = ode_options(cfg);
    const Trajectory ref = evolve_lindblad(oat, rho0, grid.times, oat_opts);

    std::vector<SqueezingPoint> points;
    std::vector<MomentVector> lab;
    std::vector<double> fidelity;
    double min_fidelity = 1.0;
    for (std::size_t i = 0; i < grid.times.size(); ++i) {
        const Eigen::MatrixXcd& rho_tc = tc.reduced_spin.states[i];
        const Eigen::MatrixXcd& rho_ref = ref.states[i];
        MomentVector m;
        m.jx = real_expectation(rho_tc, ops.jx);
        m.jy = real_expectation(rho_tc, ops.jy);
        m.jz = real_expectation(rho_tc, ops.jz);
        m.jy2 = real_expectation(rho_tc, ops.jy_sq);
        m.jz2 = real_expectation(rho_tc, ops.jz_sq);
        m.jyz = real_expectation(rho_tc, ops.jyz_sym);
        lab.push_back(m);

        SqueezingPoint pt = xi_from_density(rho_tc, ops, true);
        pt.time = grid.times[i];
        points.push_back(pt);

        const Eigen::MatrixXcd a =
            rotate_about_z(rho_tc, mean_spin_angle(rho_tc, ops.jx, ops.jy), ops.m_values);
        const Eigen::MatrixXcd b =
            rotate_about_z(rho_ref, mean_spin_angle(rho_ref, ops.jx, ops.jy), ops.m_values);
        const double f = state_fidelity(a, b);
        fidelity.push_back(f);
        min_fidelity = std::min(min_fidelity, f);
    }

    common_dynamics_parameters(cfg, rep);
    rep.parameters.emplace_back("dispersive_ratio", fmt6(tc.dispersive_ratio));
    rep.parameters.emplace_back("g_collective", freq_pair(g_e));
    rep.parameters.emplace_back("detuning", freq_pair(detuning));
    rep.parameters.emplace_back("n_phonon_max", std::to_string(n_phonon));
    rep.parameters.emplace_back("min_fidelity_vs_oat", fmt6(min_fidelity));
    record_optimum(cfg, rep, points);

    const fs::path path = output_path(cfg, "_trajectory.csv");
    atomic_write(path, trajectory_csv(grid.times, lab, points, &fidelity));
    rep.files.push_back(path.string());
    emit_xi2_svg(cfg, rep, points);
    return rep;
}

RunReport run_analytic(const ScenarioConfig& cfg) {
    RunReport rep;
    rep.mode = RunMode::analytic;
    const double eta = cfg.analytic.eta;
    rep.parameters.emplace_back("eta", fmt6(eta));
    rep.parameters.emplace_back("n_values", std::to_string(cfg.analytic.n_values.size()));

    std::ostringstream csv;
    csv << "n_spins,xi2_ideal,xi2_estimate\n";
    SvgSeries ideal_series, est_series;
    ideal_series.label = "ideal";
    est_series.label = "dissipative";
    for (const double n : cfg.analytic.n_values) {
        const double j = 0.5 * n;
        const double xi2_ideal = ideal_optimum(j, 1.0).xi2_opt;
        // Unit-rate heating channel turns the cooperativity argument into eta
        // itself: eta = g / max(n_th*gamma_m, gamma_s) with g = eta, n_th =
        // gamma_m = 1, gamma_s = 0.
        const double xi2_est = dissipative_estimate(j, eta, 1.0, 1.0, 0.0).xi2_opt;
        csv << fmt(n) << ',' << fmt(xi2_ideal) << ',' << fmt(xi2_est) << '\n';
        ideal_series.x.push_back(n);
        ideal_series.y.push_back(xi2_ideal);
        est_series.x.push_back(n);
        est_series.y.push_back(xi2_est);
    }
    const fs::path path = output_path(cfg, "_analytic.csv");
    atomic_write(path, csv.str());
    rep.files.push_back(path.string());

    if (cfg.output.svg && cfg.analytic.n_values.size() >= 2) {
        SvgPlotOptions opts;
        opts.title = "optimal squeezing vs ensemble size";
        opts.x_label = "N";
        opts.y_label = "xi^2";
        opts.log_y = true;
        const fs::path svg_path = output_path(cfg, "_xi2.svg");
        atomic_write(svg_path, render_line_plot({ideal_series, est_series}, opts));
        rep.files.push_back(svg_path.string());
    }
    return rep;
}

std::string value_slug(double v) {
    std::string s = fmt6(v);
    for (char& c : s) {
        if (c == '.') c = 'p';
        if (c == '-') c = 'm';
        if (c == '+') c = '_';
    }
    return s;
}

RunReport run_sweep(const ScenarioConfig& cfg, const RunOptions& options) {
    RunReport rep;
    rep.mode = RunMode::sweep;
    const std::size_t count = cfg.sweep.values.size();
    rep.parameters.emplace_back("parameter", cfg.sweep.parameter);
    rep.parameters.emplace_back("entries", std::to_string(count));
    rep.parameters.emplace_back("base_mode", to_string(cfg.sweep.base_mode));

    std::string::size_type dot = cfg.sweep.parameter.rfind('.');
    const std::string short_name = dot == std::string::npos
                                       ? cfg.sweep.parameter
                                       : cfg.sweep.parameter.substr(dot + 1);

    std::vector<ScenarioConfig> children;
    children.reserve(count);
    for (const double v : cfg.sweep.values) {
        ScenarioConfig child = apply_sweep_value(cfg, v);
        child.output.prefix = effective_prefix(cfg) + "_" + short_name + "_" + value_slug(v);
        children.push_back(std::move(child));
    }

    std::vector<RunReport> child_reports(count);
    std::vector<std::exception_ptr> child_errors(count);
    const int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(count)));
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                child_reports[i] = run_scenario(children[i], RunOptions{});
            } catch (...) {
                child_errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int k = 0; k < workers; ++k) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : child_errors)
        if (e) std::rethrow_exception(e);

    std::ostringstream csv;
    csv << "parameter,value,t_opt_s,xi2_opt,file\n";
    for (std::size_t i = 0; i < count; ++i) {
        const RunReport& cr = child_reports[i];
        csv << cfg.sweep.parameter << ',' << fmt(cfg.sweep.values[i]) << ','
            << (cr.has_optimum ? fmt(cr.t_opt) : std::string()) << ','
            << (cr.has_optimum ? fmt(cr.xi2_opt) : std::string()) << ','
            << (cr.files.empty() ? std::string() : cr.files.front()) << '\n';
        for (const std::string& f : cr.files) rep.files.push_back(f);
        for (const std::string& w : cr.warnings)
            rep.warnings.push_back(short_name + "=" + fmt6(cfg.sweep.values[i]) + ": " + w);
    }
    const fs::path path = output_path(cfg, "_sweep_summary.csv");
    atomic_write(path, csv.str());
    rep.files.push_back(path.string());
    return rep;
}

} // namespace

RunReport run_scenario(const ScenarioConfig& config, const RunOptions& options) {
    ScenarioConfig cfg = config;
    if (!options.out_dir.empty()) cfg.output.dir = options.out_dir;
    if (options.force_svg) cfg.output.svg = true;

    const auto t0 = std::chrono::steady_clock::now();
    RunReport rep;
    switch (cfg.mode) {
        case RunMode::budget: rep = run_budget(cfg); break;
        case RunMode::simulate_exact: rep = run_exact(cfg); break;
        case RunMode::simulate_moments: rep = run_moments(cfg); break;
        case RunMode::simulate_tc: rep = run_tavis_cummings(cfg); break;
        case RunMode::analytic: rep = run_analytic(cfg); break;
        case RunMode::sweep: rep = run_sweep(cfg, options); break;
    }
    rep.warnings.insert(rep.warnings.begin(), cfg.warnings.begin(), cfg.warnings.end());
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

void print_report(const RunReport& report, std::ostream& os) {
    os << "mode: " << to_string(report.mode) << '\n';
    for (const auto& [name, value] : report.parameters)
        os << "  " << name << " = " << value << '\n';
    if (report.has_optimum)
        os << "optimum: xi^2 = " << fmt6(report.xi2_opt) << " at t = " << fmt6(report.t_opt)
           << " s\n";
    for (const std::string& f : report.files) os << "wrote: " << f << '\n';
    for (const std::string& w : report.warnings) os << "warning: " << w << '\n';
    os << "wall: " << fmt6(report.wall_seconds) << " s\n";
}

namespace {

// Replaces any existing top-level mode assignment in place (preserving line
// numbers for later diagnostics) and appends the override.
std::string override_mode_text(const std::string& text, const std::string& mode) {
    std::stringstream in(text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        const std::string body = hash == std::string::npos ? line : line.substr(0, hash);
        const auto eq = body.find('=');
        bool is_mode = false;
        if (eq != std::string::npos) {
            std::string key = body.substr(0, eq);
            key.erase(0, key.find_first_not_of(" \t"));
            const auto end = key.find_last_not_of(" \t");
            key = end == std::string::npos ? "" : key.substr(0, end + 1);
            is_mode = key == "mode";
        }
        out << (is_mode ? "" : line) << '\n';
    }
    out << "mode = " << mode << '\n';
    return out.str();
}

MaterialDefaults load_materials(const std::string& explicit_path,
                                std::vector<std::string>& notes) {
    std::string path = explicit_path;
    if (path.empty()) {
        const char* env = std::getenv("SPINSQUEEZE_MATERIALS");
        if (env && *env) path = env;
    }
    if (path.empty() && fs::exists("data/materials.conf")) path = "data/materials.conf";
    if (path.empty()) return builtin_materials();
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read materials file " + path);
    std::stringstream buf;
    buf << is.rdbuf();
    try {
        MaterialDefaults m = parse_materials(buf.str());
        notes.push_back("materials: " + path);
        return m;
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

} // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"Dissipative spin squeezing of a phonon-coupled spin ensemble"};
    std::string config_path;
    std::string mode_override;
    std::string out_dir;
    std::string materials_path;
    int workers = 0;
    bool svg = false;
    app.add_option("config", config_path, "scenario file (key = value lines)")->required();
    app.add_option("--mode", mode_override,
                   "override the mode key (budget, simulate-exact, simulate-moments, "
                   "simulate-tc, analytic, sweep)");
    app.add_option("--out", out_dir, "override output.dir");
    app.add_option("--materials", materials_path,
                   "materials file (default: $SPINSQUEEZE_MATERIALS, then "
                   "./data/materials.conf, then built-ins)");
    app.add_option("--workers", workers,
                   "parallel sweep entries (default: $SPINSQUEEZE_WORKERS or 1)");
    app.add_flag("--svg", svg, "also write SVG plots");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        std::ifstream is(config_path);
        if (!is) {
            std::cerr << "error: cannot read config file " << config_path << '\n';
            return 1;
        }
        std::stringstream buf;
        buf << is.rdbuf();
        std::string text = buf.str();
        if (!mode_override.empty()) text = override_mode_text(text, mode_override);

        std::vector<std::string> notes;
        const MaterialDefaults materials = load_materials(materials_path, notes);
        const ScenarioConfig cfg = parse_config(text, materials);

        RunOptions opts;
        opts.workers = workers;
        if (opts.workers <= 0) {
            if (const char* env = std::getenv("SPINSQUEEZE_WORKERS")) {
                const int k = std::atoi(env);
                if (k > 0) opts.workers = k;
            }
        }
        if (opts.workers <= 0) opts.workers = 1;
        opts.force_svg = svg;
        opts.out_dir = out_dir;

        RunReport rep = run_scenario(cfg, opts);
        for (const std::string& n : notes) std::cout << n << '\n';
        print_report(rep, std::cout);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 1;
    } catch (const IntegrationError& e) {
        std::cerr << "integration error: " << e.what() << '\n';
        return 2;
    } catch (const TruncationError& e) {
        std::cerr << "truncation error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace sqz
