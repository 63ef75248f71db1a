#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wigbound/core.hpp"
#include "wigbound/wavefunction.hpp"

namespace wigbound {

/// Bad or incomplete run configuration; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct StateSpec {
    enum class Kind { well, superposition, file, constant };
    Kind kind = Kind::well;
    int n = 1;
    // (n, weight) pairs for superpositions of well eigenstates.
    std::vector<std::pair<int, double>> terms;
    std::filesystem::path file;
};

struct RunConfig {
    double a = -1.0, b = 1.0;
    PhysicalParams params;
    std::vector<double> potential;  // polynomial coefficients, empty for none
    StateSpec state;
    int nx = 257, np = 257;
    double p_max = 0.0;  // 0 picks the default cutoff
    double epsilon = 0.25;
    std::filesystem::path output_dir = "out";

    // transform
    std::vector<std::string> require;  // check groups or names; empty means all

    // spectrum
    std::optional<std::array<double, 2>> e_range;
    int scan_samples = 400;

    // verify
    std::optional<double> energy;
    std::vector<std::string> verify_checks{"residual", "conservation"};
    double residual_tolerance = 1e-4;
    double stationarity_tolerance = 1e-4;
    double conservation_tolerance = 1e-5;
    bool boundary_terms = true;

    // solve
    int taylor_order = 2;
    std::optional<double> solve_energy;
    double bc_value = 0.707;
    std::optional<std::array<double, 2>> bc_points;
    std::string solve_method = "collocation";

    // trajectories
    std::string mode = "contours";
    std::vector<double> levels;
    int level_count = 8;
    std::vector<std::array<double, 2>> inits;
    std::array<double, 2> t_span{0.0, 20.0};
    double rtol = 1e-9;
    double atol = 1e-12;

    Domain domain() const { return Domain(a, b); }
    PotentialFn bulk_potential() const;  // empty function when no potential is given
};

RunConfig load_config(const std::filesystem::path& path);
/// Parses YAML text; relative file paths resolve against base_dir.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");

/// State described by the config, normalised over the domain.
Wavefunction make_state(const RunConfig& cfg);

// Each command writes its artifacts under cfg.output_dir and returns the exit code:
// 0 success, 1 failed check or integrator failure. Config problems throw ConfigError.
int cmd_transform(const RunConfig& cfg, std::ostream& log);
int cmd_spectrum(const RunConfig& cfg, std::ostream& log);
int cmd_verify(const RunConfig& cfg, std::ostream& log);
int cmd_solve(const RunConfig& cfg, std::ostream& log);
int cmd_trajectories(const RunConfig& cfg, std::ostream& log);

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& log);

}  // namespace wigbound
