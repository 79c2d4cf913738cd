#pragma once

#include <string>
#include <vector>

#include "spinsqueeze/siv_model.hpp"
#include "spinsqueeze/waveguide_phonons.hpp"

namespace sqz {

// Flat key-value scenario files: one `section.key = value` per line, `#`
// comments, SI unit suffixes on dimensioned values. Frequency-typed keys
// require an explicit suffix (Hz/kHz/MHz/GHz) and are converted to angular
// rad/s on parse; other dimensioned keys accept a bare number in base SI.

enum class RunMode {
    budget,
    simulate_exact,
    simulate_moments,
    simulate_tc,
    analytic,
    sweep,
};

std::string to_string(RunMode mode);

struct DeviceBlock {
    WaveguideSpec waveguide;
    SiVParams siv;
    double temperature = 0.1; // K
    double q_factor = 46000.0;
    double d_strain = 0.0; // angular rad/s per unit strain; filled from materials
    double omega_m = 0.0;  // angular; 0 = take mode_branch of the spectrum
    int mode_branch = 1;
};

struct EnsembleBlock {
    int n_spins = 1000;
    double detuning_ratio = 10.0; // detuning / g_collective
};

struct DynamicsBlock {
    double lambda = 0.0; // angular twisting rate
    // Rates resolve from either absolute values or ratios to lambda; the
    // ratio form wins when both are present (with a warning). Ratios are kept
    // raw here (< 0 = unset) because budget mode derives lambda first.
    double gamma_s = 0.0;
    double big_gamma_m = 0.0;
    double gamma_s_ratio = -1.0;
    double big_gamma_m_ratio = -1.0;
    bool gamma_s_abs_set = false;
    bool big_gamma_m_abs_set = false;
    double n_th = 0.0;
    bool n_th_set = false;
    double t_max = 0.0; // seconds; 0 = auto grid over [0, 3 * ideal t_min]
    int n_steps = 2000;
    double rtol = 1e-8;
    double atol = 1e-10;
    double dispersive_ratio = 0.05; // g_collective / detuning, tc mode
    int n_phonon_max = 0;           // 0 = auto (n_spins + 2)
};

struct AnalyticBlock {
    double eta = 0.0;
    std::vector<double> n_values;
};

struct SweepBlock {
    std::string parameter; // one of the sweepable keys, see kSweepableKeys
    std::vector<double> values;
    RunMode base_mode = RunMode::simulate_exact;
};

struct OutputBlock {
    std::string dir = ".";
    std::string prefix; // empty = mode name
    bool svg = false;
};

struct ScenarioConfig {
    RunMode mode = RunMode::budget;
    DeviceBlock device;
    EnsembleBlock ensemble;
    DynamicsBlock dynamics;
    AnalyticBlock analytic;
    SweepBlock sweep;
    OutputBlock output;
    std::vector<std::string> warnings;
};

inline constexpr const char* kSweepableKeys[] = {
    "ensemble.n_spins",
    "ensemble.detuning_ratio",
    "dynamics.n_th",
    "dynamics.gamma_s_over_lambda",
    "dynamics.big_gamma_m_over_lambda",
};

// Startup defaults normally shipped as data/materials.conf; the built-in
// table carries the same diamond/SiV values so the library works without the
// file.
struct MaterialDefaults {
    double youngs_e = 1050e9;     // Pa
    double poisson_nu = 0.2;
    double density_rho = 3500.0;  // kg/m^3
    double lambda_so = 0.0;       // angular; set by builtin_materials()
    double gamma_spin = 0.0;      // angular per tesla
    double gamma_orbital = 0.0;   // angular per tesla
    double orbital_quench_f = 0.1;
    double d_strain = 0.0;        // angular per unit strain
};

MaterialDefaults builtin_materials();

// Same flat format as scenario files, keys without section prefixes
// (youngs_modulus, poisson_ratio, density, lambda_so, gamma_spin,
// gamma_orbital, orbital_quench, d_strain). Raises ConfigError with the
// offending line on unknown keys or unit mismatches.
MaterialDefaults parse_materials(const std::string& text);

// Parses and validates a scenario. All defaults are resolved here (device
// geometry and material constants, rate ratios when lambda is given);
// errors carry the offending line number.
ScenarioConfig parse_config(const std::string& text,
                            const MaterialDefaults& materials = builtin_materials());

// Applies one sweep value to a copy of the base config (sweep.parameter
// selects the field). Throws ConfigError for non-integer n_spins values.
ScenarioConfig apply_sweep_value(const ScenarioConfig& base, double value);

} // namespace sqz
