#pragma once

#include "simplexwave/observability.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace simplexwave {

struct Thresholds {
    bool enabled = false;
    double ratio_min = 0.0;
    double ratio_max = 0.0;
    double final_ratio_tol = 0.0;
    double slope_min = 0.0;
    double slope_max = 0.0;
};

/// One run family: domain, observed face, initial data, discretization and
/// sweep parameters. Loaded from a JSON config file; unknown keys are
/// rejected. The OBS_SEED environment variable overrides `seed`.
struct RunConfig {
    Simplex simplex = Simplex::order_simplex(2);
    std::string simplex_name = "order-2";
    int face = 0;
    std::vector<int> eigenmode = {1, 2}; // empty when random bump data is used
    int random_max_mode = 0;             // > 0 selects the seeded random bump
    int levels = 4;
    double dt_factor = 0.5;
    std::vector<double> T_list;
    std::uint64_t seed = 0;
    std::string csv_path;
    std::string json_path;
    int jobs = 1;
    bool lumped_mass = false;
    Thresholds thresholds;
};

/// Parses "standard-N" / "order-N" preset names.
Simplex simplex_from_preset(const std::string& name);

RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Initial data for an arbitrary simplex: order-simplex eigenmode data pulled
/// back through the affine correspondence between the two domains (so it is
/// Dirichlet-compatible by construction). Random bump data superposes every
/// mode with components <= max_mode, with seeded coefficients decaying like
/// 1/lambda.
InitialData build_initial_data(const Simplex& domain, const RunConfig& config);

struct VerifyOutcome {
    SweepResult sweep;
    double dt = 0.0;
    double initial_energy = 0.0;
    bool thresholds_enabled = false;
    bool pass = true;
    std::string csv_text;
    std::string json_text;
};

/// The full verify-theorem pipeline: re-anchor for the observed face, mesh,
/// assemble, sweep horizons, render CSV (RFC 4180) and JSON summary.
VerifyOutcome verify_theorem(const RunConfig& config);

/// Entry point used by the CLI binary; returns the process exit code
/// (0 pass, 1 threshold failure, 2 config/parse error, 3 numerical abort).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string format_double(double v);

} // namespace simplexwave
