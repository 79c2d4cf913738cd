#include "spinsqueeze/scenario_config.hpp"

#include "spinsqueeze/errors.hpp"
#include "spinsqueeze/units.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

namespace sqz {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

enum class Kind {
    dimensionless,
    integer,
    frequency, // requires Hz/kHz/MHz/GHz suffix; stored angular
    length,
    temperature,
    pressure,
    density,
    magnetic,
    duration,
    boolean,
    text,
    list,
};

struct UnitEntry {
    const char* suffix;
    double factor;
};

const UnitEntry* unit_table(Kind kind, std::size_t& count) {
    static const UnitEntry freq[] = {{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}};
    static const UnitEntry len[] = {{"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}};
    static const UnitEntry temp[] = {{"K", 1.0}, {"mK", 1e-3}};
    static const UnitEntry pres[] = {{"Pa", 1.0}, {"kPa", 1e3}, {"MPa", 1e6}, {"GPa", 1e9}};
    static const UnitEntry dens[] = {{"kg/m3", 1.0}};
    static const UnitEntry mag[] = {{"T", 1.0}, {"mT", 1e-3}};
    static const UnitEntry dur[] = {{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}};
    switch (kind) {
        case Kind::frequency: count = std::size(freq); return freq;
        case Kind::length: count = std::size(len); return len;
        case Kind::temperature: count = std::size(temp); return temp;
        case Kind::pressure: count = std::size(pres); return pres;
        case Kind::density: count = std::size(dens); return dens;
        case Kind::magnetic: count = std::size(mag); return mag;
        case Kind::duration: count = std::size(dur); return dur;
        default: count = 0; return nullptr;
    }
}

std::string expected_units(Kind kind) {
    std::size_t count = 0;
    const UnitEntry* table = unit_table(kind, count);
    std::string out;
    for (std::size_t i = 0; i < count; ++i) {
        if (i) out += "/";
        out += table[i].suffix;
    }
    return out;
}

double parse_plain_number(const std::string& text, int line) {
    const std::string t = trim(text);
    if (t.empty()) throw ConfigError("expected a number, got nothing", line);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size())
        throw ConfigError("could not parse number from '" + t + "'", line);
    if (!std::isfinite(v)) throw ConfigError("non-finite number '" + t + "'", line);
    return v;
}

double parse_quantity(const std::string& text, Kind kind, int line) {
    const std::string t = trim(text);
    if (t.empty()) throw ConfigError("missing value", line);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str()) throw ConfigError("could not parse number from '" + t + "'", line);
    if (!std::isfinite(v)) throw ConfigError("non-finite number '" + t + "'", line);
    const std::string suffix = trim(std::string(end));

    if (kind == Kind::dimensionless) {
        if (!suffix.empty())
            throw ConfigError("key is dimensionless but got unit '" + suffix + "'", line);
        return v;
    }

    std::size_t count = 0;
    const UnitEntry* table = unit_table(kind, count);
    if (suffix.empty()) {
        if (kind == Kind::frequency)
            throw ConfigError("frequency values need an explicit unit (" +
                                  expected_units(kind) + "); plain Hz vs rad/s is ambiguous",
                              line);
        return v; // base SI
    }
    for (std::size_t i = 0; i < count; ++i)
        if (suffix == table[i].suffix) {
            const double scaled = v * table[i].factor;
            return kind == Kind::frequency ? units::angular_from_hz(scaled) : scaled;
        }
    throw ConfigError("unit '" + suffix + "' does not fit this key (expected " +
                          expected_units(kind) + ")",
                      line);
}

int parse_integer(const std::string& text, int line) {
    const double v = parse_plain_number(text, line);
    if (v != std::floor(v) || std::abs(v) > 2e9)
        throw ConfigError("expected an integer, got '" + trim(text) + "'", line);
    return static_cast<int>(v);
}

bool parse_boolean(const std::string& text, int line) {
    const std::string t = trim(text);
    if (t == "true" || t == "on" || t == "1") return true;
    if (t == "false" || t == "off" || t == "0") return false;
    throw ConfigError("expected true/false, got '" + t + "'", line);
}

std::vector<double> parse_number_list(const std::string& text, int line) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!trim(item).empty()) out.push_back(parse_plain_number(item, line));
    if (out.empty()) throw ConfigError("expected a comma-separated list of numbers", line);
    return out;
}

RunMode parse_mode_value(const std::string& text, int line) {
    const std::string t = trim(text);
    if (t == "budget") return RunMode::budget;
    if (t == "simulate-exact") return RunMode::simulate_exact;
    if (t == "simulate-moments") return RunMode::simulate_moments;
    if (t == "simulate-tc") return RunMode::simulate_tc;
    if (t == "analytic") return RunMode::analytic;
    if (t == "sweep") return RunMode::sweep;
    throw ConfigError("unknown mode '" + t +
                          "' (expected budget, simulate-exact, simulate-moments, "
                          "simulate-tc, analytic, or sweep)",
                      line);
}

using Setter = std::function<void(const std::string&, int)>;

struct KeyTable {
    std::map<std::string, Setter> setters;
    std::map<std::string, int> seen_at;

    void handle(const std::string& key, const std::string& value, int line) {
        const auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError("unknown key '" + key + "'", line);
        if (seen_at.count(key))
            throw ConfigError("duplicate key '" + key + "' (first at line " +
                                  std::to_string(seen_at[key]) + ")",
                              line);
        seen_at[key] = line;
        it->second(value, line);
    }

    bool seen(const std::string& key) const { return seen_at.count(key) > 0; }
    int line_of(const std::string& key) const {
        const auto it = seen_at.find(key);
        return it == seen_at.end() ? 0 : it->second;
    }
};

void for_each_line(const std::string& text,
                   const std::function<void(const std::string&, const std::string&, int)>& on_kv) {
    std::stringstream ss(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(ss, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value', got '" + body + "'", line_no);
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key", line_no);
        on_kv(key, value, line_no);
    }
}

void check_positive(double v, const char* what, int line) {
    if (!(v > 0.0)) throw ConfigError(std::string(what) + " must be > 0", line);
}

} // namespace

std::string to_string(RunMode mode) {
    switch (mode) {
        case RunMode::budget: return "budget";
        case RunMode::simulate_exact: return "simulate-exact";
        case RunMode::simulate_moments: return "simulate-moments";
        case RunMode::simulate_tc: return "simulate-tc";
        case RunMode::analytic: return "analytic";
        case RunMode::sweep: return "sweep";
    }
    return "unknown";
}

MaterialDefaults builtin_materials() {
    MaterialDefaults m;
    m.youngs_e = 1050e9;
    m.poisson_nu = 0.2;
    m.density_rho = 3500.0;
    m.lambda_so = units::angular_from_hz(45e9);
    m.gamma_spin = units::angular_from_hz(28e9);    // per tesla
    m.gamma_orbital = units::angular_from_hz(14e9); // per tesla
    m.orbital_quench_f = 0.1;
    m.d_strain = units::angular_from_hz(1e15); // per unit strain
    return m;
}

MaterialDefaults parse_materials(const std::string& text) {
    MaterialDefaults m = builtin_materials();
    KeyTable table;
    table.setters = {
        {"youngs_modulus",
         [&](const std::string& v, int l) { m.youngs_e = parse_quantity(v, Kind::pressure, l); }},
        {"poisson_ratio",
         [&](const std::string& v, int l) {
             m.poisson_nu = parse_quantity(v, Kind::dimensionless, l);
         }},
        {"density",
         [&](const std::string& v, int l) { m.density_rho = parse_quantity(v, Kind::density, l); }},
        {"lambda_so",
         [&](const std::string& v, int l) { m.lambda_so = parse_quantity(v, Kind::frequency, l); }},
        {"gamma_spin",
         [&](const std::string& v, int l) {
             m.gamma_spin = parse_quantity(v, Kind::frequency, l);
         }},
        {"gamma_orbital",
         [&](const std::string& v, int l) {
             m.gamma_orbital = parse_quantity(v, Kind::frequency, l);
         }},
        {"orbital_quench",
         [&](const std::string& v, int l) {
             m.orbital_quench_f = parse_quantity(v, Kind::dimensionless, l);
         }},
        {"d_strain",
         [&](const std::string& v, int l) { m.d_strain = parse_quantity(v, Kind::frequency, l); }},
    };
    for_each_line(text, [&](const std::string& k, const std::string& v, int l) {
        table.handle(k, v, l);
    });
    return m;
}

ScenarioConfig parse_config(const std::string& text, const MaterialDefaults& materials) {
    ScenarioConfig cfg;
    cfg.device.waveguide.length_l = 20e-6;
    cfg.device.waveguide.width_w = 0.1e-6;
    cfg.device.waveguide.thickness_t = 0.1e-6;
    cfg.device.waveguide.youngs_e = materials.youngs_e;
    cfg.device.waveguide.poisson_nu = materials.poisson_nu;
    cfg.device.waveguide.density_rho = materials.density_rho;
    cfg.device.siv.lambda_so = materials.lambda_so;
    cfg.device.siv.gamma_spin = materials.gamma_spin;
    cfg.device.siv.gamma_orbital = materials.gamma_orbital;
    cfg.device.siv.orbital_quench_f = materials.orbital_quench_f;
    cfg.device.d_strain = materials.d_strain;

    bool mode_seen = false;
    std::string sweep_base_raw;
    int sweep_base_line = 0;

    KeyTable table;
    auto& d = cfg.device;
    auto& dy = cfg.dynamics;
    table.setters = {
        {"mode",
         [&](const std::string& v, int l) {
             cfg.mode = parse_mode_value(v, l);
             mode_seen = true;
         }},
        // device
        {"device.length",
         [&](const std::string& v, int l) {
             d.waveguide.length_l = parse_quantity(v, Kind::length, l);
         }},
        {"device.width",
         [&](const std::string& v, int l) {
             d.waveguide.width_w = parse_quantity(v, Kind::length, l);
         }},
        {"device.thickness",
         [&](const std::string& v, int l) {
             d.waveguide.thickness_t = parse_quantity(v, Kind::length, l);
         }},
        {"device.youngs_modulus",
         [&](const std::string& v, int l) {
             d.waveguide.youngs_e = parse_quantity(v, Kind::pressure, l);
         }},
        {"device.poisson_ratio",
         [&](const std::string& v, int l) {
             d.waveguide.poisson_nu = parse_quantity(v, Kind::dimensionless, l);
         }},
        {"device.density",
         [&](const std::string& v, int l) {
             d.waveguide.density_rho = parse_quantity(v, Kind::density, l);
         }},
        {"device.temperature",
         [&](const std::string& v, int l) {
             d.temperature = parse_quantity(v, Kind::temperature, l);
         }},
        {"device.q_factor",
         [&](const std::string& v, int l) {
             d.q_factor = parse_quantity(v, Kind::dimensionless, l);
         }},
        {"device.d_strain",
         [&](const std::string& v, int l) { d.d_strain = parse_quantity(v, Kind::frequency, l); }},
        {"device.omega_m",
         [&](const std::string& v, int l) { d.omega_m = parse_quantity(v, Kind::frequency, l); }},
        {"device.mode_branch",
         [&](const std::string& v, int l) { d.mode_branch = parse_integer(v, l); }},
        {"device.lambda_so",
         [&](const std::string& v, int l) {
             d.siv.lambda_so = parse_quantity(v, Kind::frequency, l);
         }},
        {"device.upsilon_x",
         [&](const std::string& v, int l) {
             d.siv.upsilon_x = parse_quantity(v, Kind::frequency, l);
         }},
        {"device.upsilon_y",
         [&](const std::string& v, int l) {
             d.siv.upsilon_y = parse_quantity(v, Kind::frequency, l);
         }},
        {"device.b_z",
         [&](const std::string& v, int l) { d.siv.b_z = parse_quantity(v, Kind::magnetic, l); }},
        {"device.gamma_spin",
         [&](const std::string& v, int l) {
             d.siv.gamma_spin = parse_quantity(v, Kind::frequency, l);
         }},
        {"device.gamma_orbital",
         [&](const std::string& v, int l) {
             d.siv.gamma_orbital = parse_quantity(v, Kind::frequency, l);
         }},
        {"device.orbital_quench",
         [&](const std::string& v, int l) {
             d.siv.orbital_quench_f = parse_quantity(v, Kind::dimensionless, l);
         }},
        {"device.orbital_zeeman",
         [&](const std::string& v, int l) {
             d.siv.include_orbital_zeeman = parse_boolean(v, l);
         }},
        // ensemble
        {"ensemble.n_spins",
         [&](const std::string& v, int l) { cfg.ensemble.n_spins = parse_integer(v, l); }},
        {"ensemble.detuning_ratio",
         [&](const std::string& v, int l) {
             cfg.ensemble.detuning_ratio = parse_quantity(v, Kind::dimensionless, l);
         }},
        // dynamics
        {"dynamics.lambda",
         [&](const std::string& v, int l) { dy.lambda = parse_quantity(v, Kind::frequency, l); }},
        {"dynamics.gamma_s",
         [&](const std::string& v, int l) {
             dy.gamma_s = parse_quantity(v, Kind::frequency, l);
             dy.gamma_s_abs_set = true;
         }},
        {"dynamics.big_gamma_m",
         [&](const std::string& v, int l) {
             dy.big_gamma_m = parse_quantity(v, Kind::frequency, l);
             dy.big_gamma_m_abs_set = true;
         }},
        {"dynamics.gamma_s_over_lambda",
         [&](const std::string& v, int l) {
             dy.gamma_s_ratio = parse_quantity(v, Kind::dimensionless, l);
         }},
        {"dynamics.big_gamma_m_over_lambda",
         [&](const std::string& v, int l) {
             dy.big_gamma_m_ratio = parse_quantity(v, Kind::dimensionless, l);
         }},
        {"dynamics.n_th",
         [&](const std::string& v, int l) {
             dy.n_th = parse_quantity(v, Kind::dimensionless, l);
             dy.n_th_set = true;
         }},
        {"dynamics.t_max",
         [&](const std::string& v, int l) { dy.t_max = parse_quantity(v, Kind::duration, l); }},
        {"dynamics.n_steps",
         [&](const std::string& v, int l) { dy.n_steps = parse_integer(v, l); }},
        {"dynamics.rtol",
         [&](const std::string& v, int l) { dy.rtol = parse_quantity(v, Kind::dimensionless, l); }},
        {"dynamics.atol",
         [&](const std::string& v, int l) { dy.atol = parse_quantity(v, Kind::dimensionless, l); }},
        {"dynamics.dispersive_ratio",
         [&](const std::string& v, int l) {
             dy.dispersive_ratio = parse_quantity(v, Kind::dimensionless, l);
         }},
        {"dynamics.n_phonon_max",
         [&](const std::string& v, int l) { dy.n_phonon_max = parse_integer(v, l); }},
        // analytic
        {"analytic.eta",
         [&](const std::string& v, int l) {
             cfg.analytic.eta = parse_quantity(v, Kind::dimensionless, l);
         }},
        {"analytic.n_values",
         [&](const std::string& v, int l) { cfg.analytic.n_values = parse_number_list(v, l); }},
        // sweep
        {"sweep.parameter",
         [&](const std::string& v, int) { cfg.sweep.parameter = trim(v); }},
        {"sweep.values",
         [&](const std::string& v, int l) { cfg.sweep.values = parse_number_list(v, l); }},
        {"sweep.base_mode",
         [&](const std::string& v, int l) {
             sweep_base_raw = trim(v);
             sweep_base_line = l;
         }},
        // output
        {"output.dir", [&](const std::string& v, int) { cfg.output.dir = trim(v); }},
        {"output.prefix", [&](const std::string& v, int) { cfg.output.prefix = trim(v); }},
        {"output.svg",
         [&](const std::string& v, int l) { cfg.output.svg = parse_boolean(v, l); }},
    };

    for_each_line(text, [&](const std::string& k, const std::string& v, int l) {
        table.handle(k, v, l);
    });

    if (!mode_seen)
        throw ConfigError(
            "missing required key: mode (budget | simulate-exact | simulate-moments | "
            "simulate-tc | analytic | sweep); simulate modes also require "
            "ensemble.n_spins and dynamics.lambda, analytic requires analytic.eta and "
            "analytic.n_values, sweep requires sweep.parameter, sweep.values and "
            "sweep.base_mode");

    const auto require = [&](const char* key) {
        if (!table.seen(key))
            throw ConfigError("missing required key '" + std::string(key) + "' for mode " +
                              to_string(cfg.mode));
    };

    switch (cfg.mode) {
        case RunMode::budget: break;
        case RunMode::simulate_exact:
        case RunMode::simulate_moments:
        case RunMode::simulate_tc:
            require("ensemble.n_spins");
            require("dynamics.lambda");
            break;
        case RunMode::analytic:
            require("analytic.eta");
            require("analytic.n_values");
            break;
        case RunMode::sweep:
            require("sweep.parameter");
            require("sweep.values");
            require("sweep.base_mode");
            break;
    }

    if (!sweep_base_raw.empty()) {
        cfg.sweep.base_mode = parse_mode_value(sweep_base_raw, sweep_base_line);
        if (cfg.sweep.base_mode != RunMode::simulate_exact &&
            cfg.sweep.base_mode != RunMode::simulate_moments &&
            cfg.sweep.base_mode != RunMode::simulate_tc)
            throw ConfigError("sweep.base_mode must be one of the simulate modes",
                              sweep_base_line);
    }

    // Semantic validation, pointing back at the offending line where known.
    if (cfg.ensemble.n_spins < 1)
        throw ConfigError("ensemble.n_spins must be >= 1",
                          table.line_of("ensemble.n_spins"));
    if (!(cfg.ensemble.detuning_ratio > 1.0))
        throw ConfigError("ensemble.detuning_ratio must exceed 1 (dispersive regime)",
                          table.line_of("ensemble.detuning_ratio"));
    if (table.seen("dynamics.lambda")) check_positive(dy.lambda, "dynamics.lambda",
                                                      table.line_of("dynamics.lambda"));
    if (table.seen("dynamics.t_max")) check_positive(dy.t_max, "dynamics.t_max",
                                                     table.line_of("dynamics.t_max"));
    if (dy.n_steps < 3)
        throw ConfigError("dynamics.n_steps must be >= 3", table.line_of("dynamics.n_steps"));
    check_positive(dy.rtol, "dynamics.rtol", table.line_of("dynamics.rtol"));
    if (dy.atol < 0.0)
        throw ConfigError("dynamics.atol must be >= 0", table.line_of("dynamics.atol"));
    if (dy.gamma_s_abs_set && dy.gamma_s < 0.0)
        throw ConfigError("dynamics.gamma_s must be >= 0", table.line_of("dynamics.gamma_s"));
    if (dy.big_gamma_m_abs_set && dy.big_gamma_m < 0.0)
        throw ConfigError("dynamics.big_gamma_m must be >= 0",
                          table.line_of("dynamics.big_gamma_m"));
    if (table.seen("dynamics.gamma_s_over_lambda") && dy.gamma_s_ratio < 0.0)
        throw ConfigError("dynamics.gamma_s_over_lambda must be >= 0",
                          table.line_of("dynamics.gamma_s_over_lambda"));
    if (table.seen("dynamics.big_gamma_m_over_lambda") && dy.big_gamma_m_ratio < 0.0)
        throw ConfigError("dynamics.big_gamma_m_over_lambda must be >= 0",
                          table.line_of("dynamics.big_gamma_m_over_lambda"));
    if (dy.n_th_set && dy.n_th < 0.0)
        throw ConfigError("dynamics.n_th must be >= 0", table.line_of("dynamics.n_th"));
    if (!(dy.dispersive_ratio > 0.0) || dy.dispersive_ratio >= 1.0)
        throw ConfigError("dynamics.dispersive_ratio must lie in (0, 1)",
                          table.line_of("dynamics.dispersive_ratio"));
    if (dy.n_phonon_max != 0 && dy.n_phonon_max < 2)
        throw ConfigError("dynamics.n_phonon_max must be >= 2 (or 0 for automatic)",
                          table.line_of("dynamics.n_phonon_max"));
    if (d.temperature < 0.0)
        throw ConfigError("device.temperature must be >= 0",
                          table.line_of("device.temperature"));
    check_positive(d.q_factor, "device.q_factor", table.line_of("device.q_factor"));
    if (d.mode_branch < 1)
        throw ConfigError("device.mode_branch must be >= 1",
                          table.line_of("device.mode_branch"));

    if (cfg.mode == RunMode::analytic) {
        check_positive(cfg.analytic.eta, "analytic.eta", table.line_of("analytic.eta"));
        for (const double n : cfg.analytic.n_values)
            if (n < 1.0 || n != std::floor(n))
                throw ConfigError("analytic.n_values must be positive integers",
                                  table.line_of("analytic.n_values"));
    }

    if (cfg.mode == RunMode::sweep) {
        bool known = false;
        std::string allowed;
        for (const char* key : kSweepableKeys) {
            if (cfg.sweep.parameter == key) known = true;
            if (!allowed.empty()) allowed += ", ";
            allowed += key;
        }
        if (!known)
            throw ConfigError("sweep.parameter '" + cfg.sweep.parameter +
                                  "' is not sweepable (allowed: " + allowed + ")",
                              table.line_of("sweep.parameter"));
    }

    // Resolve rate ratios against lambda; the ratio form wins over an
    // absolute value, loudly.
    if (dy.lambda > 0.0) {
        if (dy.gamma_s_ratio >= 0.0) {
            if (dy.gamma_s_abs_set)
                cfg.warnings.push_back(
                    "both dynamics.gamma_s and dynamics.gamma_s_over_lambda given; using "
                    "the ratio form");
            dy.gamma_s = dy.gamma_s_ratio * dy.lambda;
        }
        if (dy.big_gamma_m_ratio >= 0.0) {
            if (dy.big_gamma_m_abs_set)
                cfg.warnings.push_back(
                    "both dynamics.big_gamma_m and dynamics.big_gamma_m_over_lambda given; "
                    "using the ratio form");
            dy.big_gamma_m = dy.big_gamma_m_ratio * dy.lambda;
        }
    }

    if (cfg.mode == RunMode::budget) {
        try {
            for (auto& w : validate_waveguide(d.waveguide)) cfg.warnings.push_back(std::move(w));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }

    return cfg;
}

ScenarioConfig apply_sweep_value(const ScenarioConfig& base, double value) {
    ScenarioConfig out = base;
    out.mode = base.sweep.base_mode;
    const std::string& p = base.sweep.parameter;
    if (p == "ensemble.n_spins") {
        if (value < 1.0 || value != std::floor(value))
            throw ConfigError("sweep value " + std::to_string(value) +
                              " is not a valid ensemble.n_spins");
        out.ensemble.n_spins = static_cast<int>(value);
    } else if (p == "ensemble.detuning_ratio") {
        if (!(value > 1.0))
            throw ConfigError("sweep value for ensemble.detuning_ratio must exceed 1");
        out.ensemble.detuning_ratio = value;
    } else if (p == "dynamics.n_th") {
        if (value < 0.0) throw ConfigError("sweep value for dynamics.n_th must be >= 0");
        out.dynamics.n_th = value;
        out.dynamics.n_th_set = true;
    } else if (p == "dynamics.gamma_s_over_lambda") {
        if (value < 0.0)
            throw ConfigError("sweep value for dynamics.gamma_s_over_lambda must be >= 0");
        out.dynamics.gamma_s_ratio = value;
        out.dynamics.gamma_s = value * out.dynamics.lambda;
    } else if (p == "dynamics.big_gamma_m_over_lambda") {
        if (value < 0.0)
            throw ConfigError("sweep value for dynamics.big_gamma_m_over_lambda must be >= 0");
        out.dynamics.big_gamma_m_ratio = value;
        out.dynamics.big_gamma_m = value * out.dynamics.lambda;
    } else {
        throw ConfigError("sweep parameter '" + p + "' is not sweepable");
    }
    return out;
}

} // namespace sqz
