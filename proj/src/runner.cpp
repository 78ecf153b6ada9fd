#include "simplexwave/runner.hpp"

#include "simplexwave/opalgebra.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>

namespace simplexwave {

namespace {

constexpr const char* kCrlf = "\r\n";

void reject_unknown_keys(const nlohmann::json& j, const std::vector<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError("unknown key \"" + key + "\" in " + where);
    }
}

double uniform01(std::mt19937_64& rng) {
    return (rng() >> 11) * 0x1.0p-53;
}

std::vector<std::vector<int>> increasing_tuples(int n, int max_mode) {
    std::vector<std::vector<int>> out;
    std::vector<int> tuple(n);
    auto rec = [&](auto&& self, int pos, int next) -> void {
        if (pos == n) {
            out.push_back(tuple);
            return;
        }
        for (int m = next; m <= max_mode; ++m) {
            tuple[pos] = m;
            self(self, pos + 1, m + 1);
        }
    };
    rec(rec, 0, 1);
    return out;
}

} // namespace

std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Simplex simplex_from_preset(const std::string& name) {
    const auto dash = name.rfind('-');
    if (dash != std::string::npos) {
        const std::string kind = name.substr(0, dash);
        int n = 0;
        try {
            n = std::stoi(name.substr(dash + 1));
        } catch (const std::exception&) {
            throw ConfigError("bad preset \"" + name + "\"");
        }
        if (n < 1 || n > 8) throw ConfigError("preset dimension out of range: " + name);
        if (kind == "standard") return Simplex::standard(n);
        if (kind == "order") return Simplex::order_simplex(n);
    }
    throw ConfigError("unknown simplex preset \"" + name + "\" (want standard-N or order-N)");
}

RunConfig config_from_json(const nlohmann::json& j) {
    reject_unknown_keys(j, {"simplex", "face", "initial", "levels", "dt_factor", "T_list",
                            "seed", "output", "jobs", "lumped_mass", "thresholds"},
                        "config");
    RunConfig c;
    c.eigenmode.clear();
    c.T_list.clear();

    if (!j.contains("simplex")) throw ConfigError("config needs \"simplex\"");
    if (j.at("simplex").is_string()) {
        c.simplex_name = j.at("simplex").get<std::string>();
        c.simplex = simplex_from_preset(c.simplex_name);
    } else {
        c.simplex = Simplex::from_json(j.at("simplex"));
        c.simplex_name = "custom";
    }

    c.face = j.value("face", 0);
    if (c.face < 0 || c.face > c.simplex.dim())
        throw ConfigError("face index out of range for dim " + std::to_string(c.simplex.dim()));

    if (!j.contains("initial")) throw ConfigError("config needs \"initial\"");
    const auto& init = j.at("initial");
    reject_unknown_keys(init, {"eigenmode", "random_bump"}, "initial");
    if (init.contains("eigenmode") == init.contains("random_bump"))
        throw ConfigError("initial needs exactly one of \"eigenmode\" or \"random_bump\"");
    if (init.contains("eigenmode")) {
        c.eigenmode = init.at("eigenmode").get<std::vector<int>>();
        if (static_cast<int>(c.eigenmode.size()) != c.simplex.dim())
            throw ConfigError("eigenmode needs one integer per dimension");
    } else {
        const auto& bump = init.at("random_bump");
        reject_unknown_keys(bump, {"max_mode"}, "random_bump");
        c.random_max_mode = bump.value("max_mode", c.simplex.dim() + 2);
        if (c.random_max_mode < c.simplex.dim())
            throw ConfigError("random_bump.max_mode must be >= dim");
    }

    c.levels = j.value("levels", 4);
    if (c.levels < 0) throw ConfigError("levels must be >= 0");
    c.dt_factor = j.value("dt_factor", 0.5);
    if (!(c.dt_factor > 0.0) || c.dt_factor > 1.0)
        throw ConfigError("dt_factor must lie in (0, 1]");

    if (!j.contains("T_list")) throw ConfigError("config needs \"T_list\"");
    c.T_list = j.at("T_list").get<std::vector<double>>();
    if (c.T_list.size() < 3) throw ConfigError("T_list needs at least 3 horizons");
    for (std::size_t i = 0; i < c.T_list.size(); ++i) {
        if (!(c.T_list[i] > 0.0)) throw ConfigError("horizons must be positive");
        if (i > 0 && !(c.T_list[i] > c.T_list[i - 1]))
            throw ConfigError("T_list must be strictly increasing");
    }

    c.seed = j.value("seed", std::uint64_t{0});
    if (const char* env = std::getenv("OBS_SEED")) c.seed = std::strtoull(env, nullptr, 10);

    if (j.contains("output")) {
        const auto& output = j.at("output");
        reject_unknown_keys(output, {"csv", "json"}, "output");
        c.csv_path = output.value("csv", "");
        c.json_path = output.value("json", "");
    }

    c.jobs = j.value("jobs", 1);
    if (c.jobs < 1) throw ConfigError("jobs must be >= 1");
    c.lumped_mass = j.value("lumped_mass", false);

    if (j.contains("thresholds")) {
        const auto& t = j.at("thresholds");
        reject_unknown_keys(t, {"ratio_window", "final_ratio_tol", "slope_range"}, "thresholds");
        c.thresholds.enabled = true;
        const auto window = t.value("ratio_window", std::vector<double>{0.0, 10.0});
        if (window.size() != 2) throw ConfigError("ratio_window needs two numbers");
        c.thresholds.ratio_min = window[0];
        c.thresholds.ratio_max = window[1];
        c.thresholds.final_ratio_tol = t.value("final_ratio_tol", 1.0);
        const auto slope = t.value("slope_range", std::vector<double>{-10.0, 10.0});
        if (slope.size() != 2) throw ConfigError("slope_range needs two numbers");
        c.thresholds.slope_min = slope[0];
        c.thresholds.slope_max = slope[1];
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    return config_from_json(j);
}

InitialData build_initial_data(const Simplex& domain, const RunConfig& config) {
    const int n = domain.dim();
    const Simplex order = Simplex::order_simplex(n);
    // z = M (x - c) maps the domain onto the order-simplex, vertex to vertex.
    const Eigen::MatrixXd map = order.spanning_matrix() * domain.inverse_matrix();
    const Eigen::VectorXd anchor = domain.vertices()[0];

    struct Component {
        EigenMode mode;
        double coeff_u0;
        double coeff_u1;
    };
    auto components = std::make_shared<std::vector<Component>>();

    if (!config.eigenmode.empty()) {
        components->push_back({EigenMode(n, config.eigenmode), 1.0, 0.0});
    } else {
        std::mt19937_64 rng(config.seed);
        for (const auto& tuple : increasing_tuples(n, config.random_max_mode)) {
            EigenMode mode(n, tuple);
            const double scale = 1.0 / mode.lambda();
            const double c0 = (2.0 * uniform01(rng) - 1.0) * scale;
            const double c1 = (2.0 * uniform01(rng) - 1.0) * scale;
            components->push_back({std::move(mode), c0, c1});
        }
    }

    InitialData data;
    data.u0 = [components, map, anchor](const Eigen::VectorXd& x) {
        const Eigen::VectorXd z = map * (x - anchor);
        double sum = 0.0;
        for (const auto& c : *components) sum += c.coeff_u0 * c.mode.eval(z);
        return sum;
    };
    data.u1 = [components, map, anchor](const Eigen::VectorXd& x) {
        const Eigen::VectorXd z = map * (x - anchor);
        double sum = 0.0;
        for (const auto& c : *components) sum += c.coeff_u1 * c.mode.eval(z);
        return sum;
    };
    data.grad_u0 = [components, map, anchor](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        const Eigen::VectorXd z = map * (x - anchor);
        Eigen::VectorXd g = Eigen::VectorXd::Zero(z.size());
        for (const auto& c : *components) g += c.coeff_u0 * c.mode.gradient(z);
        return map.transpose() * g;
    };
    return data;
}

namespace {

std::string render_csv(const VerifyOutcome& outcome) {
    std::ostringstream csv;
    csv << "T,measured,predicted,ratio,remainder,E0,levels,dt,face,dim" << kCrlf;
    for (const auto& r : outcome.sweep.reports) {
        csv << format_double(r.horizon) << ',' << format_double(r.measured) << ','
            << format_double(r.predicted) << ',' << format_double(r.ratio) << ','
            << format_double(r.remainder) << ',' << format_double(r.initial_energy) << ','
            << r.levels << ',' << format_double(r.dt) << ',' << r.face << ',' << r.dim << kCrlf;
    }
    return csv.str();
}

std::string render_json(const RunConfig& config, const VerifyOutcome& outcome) {
    nlohmann::ordered_json j;
    j["simplex"] = config.simplex_name;
    j["dim"] = config.simplex.dim();
    j["face"] = config.face;
    j["levels"] = config.levels;
    j["dt_factor"] = config.dt_factor;
    j["dt"] = outcome.dt;
    j["seed"] = config.seed;
    if (!config.eigenmode.empty())
        j["initial"] = {{"eigenmode", config.eigenmode}};
    else
        j["initial"] = {{"random_bump", {{"max_mode", config.random_max_mode}}}};
    j["E0"] = outcome.initial_energy;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : outcome.sweep.reports) {
        rows.push_back({{"T", r.horizon},
                        {"measured", r.measured},
                        {"predicted", r.predicted},
                        {"ratio", r.ratio},
                        {"remainder", r.remainder}});
    }
    j["rows"] = rows;
    j["slope"] = outcome.sweep.slope;
    if (outcome.thresholds_enabled) j["pass"] = outcome.pass;
    return j.dump(2) + "\n";
}

void apply_thresholds(const RunConfig& config, VerifyOutcome& outcome) {
    outcome.thresholds_enabled = config.thresholds.enabled;
    if (!config.thresholds.enabled) {
        outcome.pass = true;
        return;
    }
    const Thresholds& t = config.thresholds;
    bool ok = true;
    for (const auto& r : outcome.sweep.reports)
        ok = ok && r.ratio >= t.ratio_min && r.ratio <= t.ratio_max;
    const auto& last = outcome.sweep.reports.back();
    ok = ok && std::abs(last.ratio - 1.0) <= t.final_ratio_tol;
    ok = ok && outcome.sweep.slope >= t.slope_min && outcome.sweep.slope <= t.slope_max;
    outcome.pass = ok;
}

} // namespace

VerifyOutcome verify_theorem(const RunConfig& config) {
    // Observe face j by re-anchoring so that it becomes face 0.
    const Simplex anchored = config.simplex.anchored_for_face(config.face);
    const SimplicialMesh mesh = refine(anchored, config.levels);
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(anchored.dim(), anchored.dim());
    const AssembledSystem assembled = assemble(mesh, identity);
    SolverOptions options;
    options.lumped_mass = config.lumped_mass;
    const WaveSolver solver(mesh, eliminate_dirichlet(assembled, mesh), options);

    VerifyOutcome outcome;
    outcome.dt = config.dt_factor * solver.cfl().dt_max;

    const InitialData data = build_initial_data(anchored, config);
    outcome.sweep = remainder_sweep(solver, data, 0, outcome.dt, config.T_list, config.jobs);
    for (auto& r : outcome.sweep.reports) r.face = config.face;
    outcome.initial_energy = outcome.sweep.reports.front().initial_energy;

    apply_thresholds(config, outcome);
    outcome.csv_text = render_csv(outcome);
    outcome.json_text = render_json(config, outcome);
    return outcome;
}

// ---------------------------------------------------------------------------
// CLI

namespace {

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << text;
}

Simplex simplex_from_cli(const std::string& preset, const std::string& file) {
    if (!preset.empty() && !file.empty())
        throw ConfigError("give either --preset or --file, not both");
    if (!preset.empty()) return simplex_from_preset(preset);
    if (!file.empty()) {
        std::ifstream in(file);
        if (!in) throw ConfigError("cannot open " + file);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("malformed JSON: ") + e.what());
        }
        return Simplex::from_json(j);
    }
    throw ConfigError("need --preset or --file");
}

int cmd_verify_theorem(const RunConfig& config, std::ostream& out) {
    VerifyOutcome outcome = verify_theorem(config);
    if (!config.csv_path.empty()) write_file(config.csv_path, outcome.csv_text);
    if (!config.json_path.empty()) write_file(config.json_path, outcome.json_text);

    out << "T       ratio               remainder\n";
    for (const auto& r : outcome.sweep.reports)
        out << r.horizon << "\t" << format_double(r.ratio) << "\t" << format_double(r.remainder)
            << "\n";
    out << "fitted remainder slope: " << format_double(outcome.sweep.slope) << "\n";
    if (outcome.thresholds_enabled)
        out << (outcome.pass ? "thresholds: PASS" : "thresholds: FAIL") << "\n";
    return outcome.pass ? 0 : 1;
}

int cmd_check_commutator(int count, int dim_lo, int dim_hi, std::uint64_t seed,
                         std::ostream& out) {
    std::mt19937_64 rng(seed);
    auto random_rational = [&rng]() {
        const long num = static_cast<long>(rng() % 19) - 9;
        const long den = static_cast<long>(rng() % 9) + 1;
        Rational r(num, den);
        r.canonicalize();
        return r;
    };

    int failures = 0;
    std::vector<int> per_dim(dim_hi + 1, 0);
    for (int i = 0; i < count; ++i) {
        const int dim = dim_lo + i % (dim_hi - dim_lo + 1);
        EllipticOperator::Matrix m(dim, std::vector<Rational>(dim, 0));
        for (auto& row : m)
            for (auto& entry : row) entry = random_rational();
        // K = M^T M + I is symmetric positive definite.
        EllipticOperator::Matrix k = rational_matmul(rational_transpose(m), m);
        for (int d = 0; d < dim; ++d) k[d][d] += 1;

        const CommutatorCheck check = verify_commutator_lemma(EllipticOperator(dim, k));
        per_dim[dim] += 1;
        if (!check.holds) {
            ++failures;
            out << "dim " << dim << " matrix " << i
                << ": residual = " << check.residual.to_string() << "\n";
        }
    }
    for (int d = dim_lo; d <= dim_hi; ++d)
        out << "dim " << d << ": " << per_dim[d] << " random SPD matrices checked\n";
    out << "residual term count: " << failures << " of " << count << " nonzero\n";
    return failures == 0 ? 0 : 1;
}

int cmd_geometry(const Simplex& s, std::int64_t mc_samples, std::uint64_t seed,
                 std::ostream& out) {
    out << "dim: " << s.dim() << "\n";
    out << "volume: " << format_double(s.volume()) << "\n";
    out << "det A: " << format_double(s.det_A()) << "\n";
    for (int j = 0; j <= s.dim(); ++j) {
        const Face f = s.face(j);
        out << "face " << j << ": area=" << format_double(f.area) << " normal=[";
        for (int i = 0; i < s.dim(); ++i) {
            if (i) out << ",";
            out << format_double(f.unit_outward_normal(i));
        }
        out << "] flux_rate_per_E0=" << format_double(s.predicted_flux_rate(j, 1.0)) << "\n";
    }
    if (mc_samples > 0) {
        const MonteCarloEstimate est = monte_carlo_volume(s, mc_samples, seed);
        const double sigmas =
            est.standard_error > 0 ? std::abs(est.volume - s.volume()) / est.standard_error : 0.0;
        out << "monte-carlo volume: " << format_double(est.volume) << " +/- "
            << format_double(est.standard_error) << " (" << format_double(sigmas)
            << " standard errors from exact)\n";
    }
    return 0;
}

int cmd_simulate(const RunConfig& config, double T, const std::string& energy_csv,
                 const std::string& flux_csv, std::ostream& out) {
    const Simplex anchored = config.simplex.anchored_for_face(config.face);
    const SimplicialMesh mesh = refine(anchored, config.levels);
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(anchored.dim(), anchored.dim());
    SolverOptions options;
    options.lumped_mass = config.lumped_mass;
    const WaveSolver solver(mesh, eliminate_dirichlet(assemble(mesh, identity), mesh), options);
    const double dt = config.dt_factor * solver.cfl().dt_max;

    const InitialData data = build_initial_data(anchored, config);
    FaceFluxObserver observer(mesh, 0);
    WaveState state = solver.initialize(data.u0, data.u1, dt);
    std::vector<WaveSolver::Observer> observers{observer.callback()};
    const RunLedger ledger = solver.run(state, T, observers);

    if (!energy_csv.empty()) {
        std::ostringstream text;
        text << "step,t,E_h,E_lf" << kCrlf;
        for (const auto& e : ledger.energy)
            text << e.step << ',' << format_double(e.t) << ',' << format_double(e.continuous)
                 << ',' << format_double(e.invariant) << kCrlf;
        write_file(energy_csv, text.str());
    }
    if (!flux_csv.empty()) {
        std::ostringstream text;
        text << "t,flux" << kCrlf;
        for (const auto& [t, f] : observer.series().samples())
            text << format_double(t) << ',' << format_double(f) << kCrlf;
        write_file(flux_csv, text.str());
    }

    double min_inv = 0.0, max_inv = 0.0, max_drift = 0.0;
    bool first = true;
    const double e0 = ledger.initial_continuous_energy;
    for (const auto& e : ledger.energy) {
        if (e.step == 0) continue;
        if (first) {
            min_inv = max_inv = e.invariant;
            first = false;
        }
        min_inv = std::min(min_inv, e.invariant);
        max_inv = std::max(max_inv, e.invariant);
        max_drift = std::max(max_drift, std::abs(e.continuous - e0) / e0);
    }
    const double e_lf_variation = first ? 0.0 : (max_inv - min_inv) / std::abs(max_inv);

    const double E0 = initial_energy_quadrature(mesh, data);
    const ObservabilityReport report =
        make_report(observer.series(), T, anchored, 0, E0, config.levels, dt);
    out << "steps: " << state.step_index << ", dt: " << format_double(dt) << "\n";
    out << "E_lf relative variation: " << format_double(e_lf_variation) << "\n";
    out << "E_h max relative deviation: " << format_double(max_drift) << "\n";
    out << "measured: " << format_double(report.measured)
        << ", predicted: " << format_double(report.predicted)
        << ", ratio: " << format_double(report.ratio) << "\n";
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Boundary observability verification for the Dirichlet wave equation on simplices"};
    app.require_subcommand(1);

    // verify-theorem -----------------------------------------------------
    auto* verify = app.add_subcommand(
        "verify-theorem", "Sweep horizons, compare measured face flux with the predicted rate");
    std::string config_path;
    verify->add_option("--config", config_path, "JSON config file")->required();
    int face_override = -1;
    int levels_override = -1;
    double dt_factor_override = 0.0;
    std::int64_t seed_override = -1;
    std::string csv_override, json_override;
    int jobs_override = 0;
    std::vector<double> t_override;
    verify->add_option("--face", face_override, "observed face index");
    verify->add_option("--levels", levels_override, "refinement levels");
    verify->add_option("--dt-factor", dt_factor_override, "fraction of dt_max in (0,1]");
    verify->add_option("--seed", seed_override, "RNG seed");
    verify->add_option("--csv", csv_override, "CSV output path");
    verify->add_option("--json", json_override, "JSON summary output path");
    verify->add_option("--jobs", jobs_override, "parallel workers for the sweep");
    verify->add_option("-T,--horizon", t_override, "override T_list (repeatable)");

    // check-commutator ----------------------------------------------------
    auto* check = app.add_subcommand("check-commutator",
                                     "Machine-check [P, X] = 2P in exact rational arithmetic");
    std::string expr;
    int cc_count = 100;
    int cc_dim_lo = 2, cc_dim_hi = 5;
    std::uint64_t cc_seed = 20202;
    check->add_option("--expr", expr, "evaluate an operator expression, e.g. \"[-d1^2, x1 d1]\"");
    check->add_option("--count", cc_count, "number of random SPD matrices");
    check->add_option("--dim-min", cc_dim_lo, "smallest dimension");
    check->add_option("--dim-max", cc_dim_hi, "largest dimension");
    check->add_option("--seed", cc_seed, "RNG seed");

    // geometry --------------------------------------------------------------
    auto* geom = app.add_subcommand("geometry", "Print volume, det A, face areas and flux rates");
    std::string geom_preset, geom_file;
    std::int64_t mc_samples = 0;
    std::uint64_t geom_seed = 1;
    geom->add_option("--preset", geom_preset, "standard-N or order-N");
    geom->add_option("--file", geom_file, "simplex JSON file");
    geom->add_option("--mc", mc_samples, "Monte-Carlo cross-check with this many samples");
    geom->add_option("--seed", geom_seed, "Monte-Carlo seed");

    // simulate ----------------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "Single run with energy/flux ledger dump");
    std::string sim_config_path;
    double sim_T = 0.0;
    std::string energy_csv, flux_csv;
    sim->add_option("--config", sim_config_path, "JSON config file")->required();
    sim->add_option("--T", sim_T, "horizon (default: first entry of T_list)");
    sim->add_option("--energy-csv", energy_csv, "per-step energy ledger output");
    sim->add_option("--flux-csv", flux_csv, "per-step flux output");

    // mesh-dump -----------------------------------------------------------
    auto* dump = app.add_subcommand("mesh-dump", "Refine a simplex and dump the mesh as JSON");
    std::string dump_preset, dump_file, dump_out;
    int dump_levels = 1;
    dump->add_option("--preset", dump_preset, "standard-N or order-N");
    dump->add_option("--file", dump_file, "simplex JSON file");
    dump->add_option("--levels", dump_levels, "refinement levels");
    dump->add_option("--out", dump_out, "output path (default stdout)");

    std::vector<const char*> argv;
    argv.push_back("simplexwave");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());

        if (verify->parsed() || sim->parsed()) {
            RunConfig config = load_config(verify->parsed() ? config_path : sim_config_path);
            if (face_override >= 0) config.face = face_override;
            if (levels_override >= 0) config.levels = levels_override;
            if (dt_factor_override != 0.0) config.dt_factor = dt_factor_override;
            if (seed_override >= 0) config.seed = static_cast<std::uint64_t>(seed_override);
            if (!csv_override.empty()) config.csv_path = csv_override;
            if (!json_override.empty()) config.json_path = json_override;
            if (jobs_override > 0) config.jobs = jobs_override;
            if (!t_override.empty()) config.T_list = t_override;
            if (!(config.dt_factor > 0.0) || config.dt_factor > 1.0)
                throw ConfigError("dt_factor must lie in (0, 1]");
            if (verify->parsed()) {
                if (config.T_list.size() < 3) throw ConfigError("T_list needs at least 3 horizons");
                return cmd_verify_theorem(config, out);
            }
            const double T = sim_T > 0.0 ? sim_T : config.T_list.front();
            return cmd_simulate(config, T, energy_csv, flux_csv, out);
        }
        if (check->parsed()) {
            if (!expr.empty()) {
                out << parse_operator(expr).to_string() << "\n";
                return 0;
            }
            if (cc_dim_lo < 1 || cc_dim_hi < cc_dim_lo || cc_dim_hi > 6)
                throw ConfigError("dimension range must satisfy 1 <= dim-min <= dim-max <= 6");
            return cmd_check_commutator(cc_count, cc_dim_lo, cc_dim_hi, cc_seed, out);
        }
        if (geom->parsed()) {
            return cmd_geometry(simplex_from_cli(geom_preset, geom_file), mc_samples, geom_seed,
                                out);
        }
        if (dump->parsed()) {
            const Simplex s = simplex_from_cli(dump_preset, dump_file);
            const std::string text = refine(s, dump_levels).to_json().dump(2) + "\n";
            if (dump_out.empty())
                out << text;
            else
                write_file(dump_out, text);
            return 0;
        }
        err << "no subcommand given\n";
        return 2;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "argument error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const DegenerateSimplex& e) {
        err << "geometry error: " << e.what() << "\n";
        return 2;
    } catch (const BoundaryViolation& e) {
        err << "initial data error: " << e.what() << "\n";
        return 2;
    } catch (const ZeroEnergy& e) {
        err << "initial data error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        err << "JSON error: " << e.what() << "\n";
        return 2;
    } catch (const CflViolation& e) {
        err << "numerical abort: " << e.what() << "\n";
        return 3;
    } catch (const NoConvergence& e) {
        err << "numerical abort: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace simplexwave
