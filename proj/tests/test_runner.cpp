#include <doctest.h>

#include "spinsqueeze/errors.hpp"
#include "spinsqueeze/runner.hpp"
#include "spinsqueeze/scenario_config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace sqz;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("spinsqueeze_test_" + tag)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty()) out.push_back(line);
    return out;
}

bool has_tmp_leftovers(const fs::path& dir) {
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".tmp") return true;
    return false;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
    const fs::path p = dir / "scenario.conf";
    std::ofstream out(p);
    out << text;
    return p;
}

int run_cli(std::vector<std::string> args) {
    std::vector<char*> argv;
    argv.push_back(const_cast<char*>("spinsqueeze"));
    for (auto& a : args) argv.push_back(a.data());
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

} // namespace

TEST_CASE("moment-mode scenario writes a trajectory table and finds an optimum") {
    TempDir dir("moments");
    const ScenarioConfig cfg = parse_config(
        "mode = simulate-moments\n"
        "ensemble.n_spins = 1000\n"
        "dynamics.lambda = 1 MHz\n"
        "dynamics.gamma_s_over_lambda = 0.01\n"
        "dynamics.big_gamma_m_over_lambda = 0.001\n"
        "dynamics.n_th = 1\n"
        "dynamics.n_steps = 401\n");

    RunOptions opt;
    opt.out_dir = dir.path.string();
    opt.force_svg = true;
    const RunReport rep = run_scenario(cfg, opt);

    CHECK(rep.mode == RunMode::simulate_moments);
    CHECK(rep.has_optimum);
    CHECK(rep.xi2_opt > 0.0);
    CHECK(rep.xi2_opt < 1.0);
    CHECK(rep.t_opt > 0.0);
    CHECK(rep.wall_seconds >= 0.0);
    REQUIRE(rep.files.size() == 2);

    const fs::path csv = dir.path / "simulate_moments_trajectory.csv";
    CHECK(fs::exists(csv));
    const auto rows = lines_of(slurp(csv));
    REQUIRE(rows.size() >= 100);
    CHECK(rows[0] == "t_s,jx,jy,jz,jy2,jz2,jyz,xi2,alpha_min_rad");
    CHECK(rows[1].substr(0, 2) == "0,");

    const fs::path svg = dir.path / "simulate_moments_xi2.svg";
    CHECK(fs::exists(svg));
    const std::string art = slurp(svg);
    CHECK(art.find("<svg") != std::string::npos);
    CHECK(art.find("</svg>") != std::string::npos);

    CHECK_FALSE(has_tmp_leftovers(dir.path));
}

TEST_CASE("exact-mode scenario emits the same table layout") {
    TempDir dir("exact");
    const ScenarioConfig cfg = parse_config(
        "mode = simulate-exact\n"
        "ensemble.n_spins = 10\n"
        "dynamics.lambda = 1 MHz\n"
        "dynamics.big_gamma_m_over_lambda = 0.001\n"
        "dynamics.n_th = 1\n"
        "dynamics.n_steps = 201\n"
        "output.prefix = tiny\n");

    RunOptions opt;
    opt.out_dir = dir.path.string();
    const RunReport rep = run_scenario(cfg, opt);
    CHECK(rep.mode == RunMode::simulate_exact);
    CHECK(rep.has_optimum);
    CHECK(rep.xi2_opt > 0.0);
    CHECK(rep.xi2_opt < 1.0);

    const auto rows = lines_of(slurp(dir.path / "tiny_trajectory.csv"));
    CHECK(rows[0] == "t_s,jx,jy,jz,jy2,jz2,jyz,xi2,alpha_min_rad");
    CHECK(rows.size() == 202); // header + one row per grid point

    // The ensemble cap guards the dense engine.
    ScenarioConfig big = cfg;
    big.ensemble.n_spins = 5000;
    CHECK_THROWS_AS(run_scenario(big, opt), ConfigError);
}

TEST_CASE("budget scenario tabulates the derived operating point") {
    TempDir dir("budget");
    const ScenarioConfig cfg = parse_config("mode = budget\ndevice.omega_m = 46 GHz\n");

    RunOptions opt;
    opt.out_dir = dir.path.string();
    const RunReport rep = run_scenario(cfg, opt);
    CHECK(rep.mode == RunMode::budget);
    CHECK_FALSE(rep.has_optimum);
    REQUIRE(rep.files.size() == 1);

    const std::string csv = slurp(dir.path / "budget_budget.csv");
    const auto rows = lines_of(csv);
    CHECK(rows[0] == "quantity,value,unit");
    for (const char* quantity :
         {"longitudinal_speed", "mode_spacing", "omega_m", "zero_point_amplitude",
          "g_single_over_2pi", "g_collective", "lambda_twist", "big_gamma_m", "n_th",
          "eta"}) {
        CHECK(csv.find(std::string("\n") + quantity + ",") != std::string::npos);
    }
    CHECK_FALSE(has_tmp_leftovers(dir.path));
}

TEST_CASE("sweep fans out over children and summarizes them") {
    TempDir dir("sweep");
    const ScenarioConfig cfg = parse_config(
        "mode = sweep\n"
        "sweep.parameter = dynamics.n_th\n"
        "sweep.values = 0, 1\n"
        "sweep.base_mode = simulate-moments\n"
        "ensemble.n_spins = 1000\n"
        "dynamics.lambda = 1 MHz\n"
        "dynamics.big_gamma_m_over_lambda = 0.001\n"
        "dynamics.n_steps = 201\n");

    RunOptions opt;
    opt.out_dir = dir.path.string();
    opt.workers = 2;
    const RunReport rep = run_scenario(cfg, opt);
    CHECK(rep.mode == RunMode::sweep);

    const fs::path summary = dir.path / "sweep_sweep_summary.csv";
    CHECK(fs::exists(summary));
    const auto rows = lines_of(slurp(summary));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "parameter,value,t_opt_s,xi2_opt,file");
    CHECK(rows[1].substr(0, 15) == "dynamics.n_th,0");
    CHECK(rows[2].substr(0, 15) == "dynamics.n_th,1");

    // Child trajectory files exist and are listed in the report.
    int child_files = 0;
    for (const auto& f : rep.files)
        if (f.find("_trajectory.csv") != std::string::npos) {
            CHECK(fs::exists(f));
            ++child_files;
        }
    CHECK(child_files == 2);
}

TEST_CASE("report printing covers the headline fields") {
    TempDir dir("print");
    const ScenarioConfig cfg = parse_config("mode = budget\n");
    RunOptions opt;
    opt.out_dir = dir.path.string();
    const RunReport rep = run_scenario(cfg, opt);

    std::ostringstream os;
    print_report(rep, os);
    const std::string text = os.str();
    CHECK(text.find("mode: budget") != std::string::npos);
    CHECK(text.find("wrote: ") != std::string::npos);
    CHECK(text.find("wall: ") != std::string::npos);
    CHECK(text.find("g_single") != std::string::npos);
}

TEST_CASE("command line maps failure classes onto exit codes") {
    TempDir dir("cli");
    const std::string out_flag = "--out";
    const std::string out_dir = dir.path.string();

    SUBCASE("clean budget run exits 0") {
        const fs::path cfg = write_config(dir.path, "mode = budget\n");
        CHECK(run_cli({cfg.string(), out_flag, out_dir}) == 0);
        CHECK(fs::exists(dir.path / "budget_budget.csv"));
    }

    SUBCASE("missing file and bad config exit 1") {
        CHECK(run_cli({(dir.path / "absent.conf").string()}) == 1);
        const fs::path cfg = write_config(dir.path, "mode = bogus\n");
        CHECK(run_cli({cfg.string(), out_flag, out_dir}) == 1);
        CHECK(run_cli({}) == 1); // no config argument at all
    }

    SUBCASE("mode override reuses the config body") {
        const fs::path cfg = write_config(dir.path,
                                          "mode = budget\n"
                                          "ensemble.n_spins = 1000\n"
                                          "dynamics.lambda = 1 MHz\n"
                                          "dynamics.n_steps = 201\n");
        CHECK(run_cli({cfg.string(), "--mode", "simulate-moments", out_flag, out_dir}) == 0);
        CHECK(fs::exists(dir.path / "simulate_moments_trajectory.csv"));
    }

    SUBCASE("runtime failures exit 2") {
        // A deliberately tight phonon cutoff on a strongly driven exchange
        // breaches the truncation guard mid-run.
        const fs::path cfg = write_config(dir.path,
                                          "mode = simulate-tc\n"
                                          "ensemble.n_spins = 4\n"
                                          "dynamics.lambda = 1 MHz\n"
                                          "dynamics.dispersive_ratio = 0.5\n"
                                          "dynamics.n_phonon_max = 2\n"
                                          "dynamics.n_steps = 101\n");
        CHECK(run_cli({cfg.string(), out_flag, out_dir}) == 2);
    }
}
