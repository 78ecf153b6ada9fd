// Acceptance suite: runs every end-to-end check at its pinned tolerance and
// prints one PASS/FAIL line per criterion. Exit code = number of failures.

#include "simplexwave/observability.hpp"
#include "simplexwave/opalgebra.hpp"
#include "simplexwave/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

using namespace simplexwave;
namespace fs = std::filesystem;

namespace {

const double pi = 3.14159265358979323846;
int failures = 0;

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void report(int id, const char* label, bool pass, const std::string& detail, double seconds) {
    std::printf("[%s] criterion %d: %s — %s (%.2f s)\n", pass ? "PASS" : "FAIL", id, label,
                detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++failures;
}

// Rejects slivers: |det A| must reach a fraction of the Hadamard bound
// (product of edge-vector norms), which is scale-free in every dimension.
Simplex random_simplex(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    while (true) {
        std::vector<Eigen::VectorXd> pts;
        for (int k = 0; k <= n; ++k) {
            Eigen::VectorXd p(n);
            for (int i = 0; i < n; ++i) p(i) = dist(rng);
            pts.push_back(p);
        }
        try {
            Simplex s = Simplex::from_vertices(pts);
            double hadamard = 1.0;
            for (int k = 0; k < n; ++k) hadamard *= s.spanning_matrix().col(k).norm();
            if (std::abs(s.det_A()) > 0.02 * hadamard) return s;
        } catch (const DegenerateSimplex&) {
        }
    }
}

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

// 1. [P, X] = 2P for 100 seeded random rational SPD matrices, dims 2-5.
void criterion_1() {
    Stopwatch timer;
    std::mt19937_64 rng(20601);
    auto random_rational = [&rng]() {
        Rational r(static_cast<long>(rng() % 19) - 9, static_cast<long>(rng() % 9) + 1);
        r.canonicalize();
        return r;
    };
    int zero_residuals = 0;
    for (int i = 0; i < 100; ++i) {
        const int dim = 2 + i % 4;
        EllipticOperator::Matrix m(dim, std::vector<Rational>(dim, 0));
        for (auto& row : m)
            for (auto& entry : row) entry = random_rational();
        EllipticOperator::Matrix k = rational_matmul(rational_transpose(m), m);
        for (int d = 0; d < dim; ++d) k[d][d] += 1;
        if (verify_commutator_lemma(EllipticOperator(dim, k)).holds) ++zero_residuals;
    }
    const double elapsed = timer.seconds();
    report(1, "commutator lemma [P,X] = 2P", zero_residuals == 100 && elapsed < 5.0,
           fmt("%d/100 residuals exactly zero", zero_residuals), elapsed);
}

// 2. Volume identities and the Monte-Carlo oracle.
void criterion_2() {
    Stopwatch timer;
    bool pass = true;
    std::ostringstream detail;

    double worst_standard = 0.0;
    for (int n = 2; n <= 6; ++n)
        worst_standard =
            std::max(worst_standard, std::abs(Simplex::standard(n).volume() - 1.0 / factorial(n)));
    pass = pass && worst_standard <= 1e-14;
    detail << fmt("standard vol err %.1e", worst_standard);

    std::mt19937_64 rng(22);
    double worst_det = 0.0;
    for (int i = 0; i < 50; ++i) {
        const int n = 2 + i % 5;
        const Simplex s = random_simplex(rng, n);
        worst_det = std::max(worst_det, std::abs(std::abs(s.det_A()) - factorial(n) * s.volume()) /
                                            std::abs(s.det_A()));
    }
    pass = pass && worst_det <= 1e-12;
    detail << fmt(", det identity rel err %.1e", worst_det);

    double worst_sigma = 0.0;
    for (int n = 2; n <= 6; ++n) {
        const Simplex s = Simplex::standard(n);
        const MonteCarloEstimate est = monte_carlo_volume(s, 1000000, 31337 + n);
        worst_sigma = std::max(worst_sigma, std::abs(est.volume - s.volume()) / est.standard_error);
    }
    pass = pass && worst_sigma <= 4.0;
    detail << fmt(", MC worst deviation %.2f sigma", worst_sigma);

    report(2, "volume = |det A|/n! with Monte-Carlo oracle", pass, detail.str(), timer.seconds());
}

// 3. Gradient pushforward against central finite differences.
void criterion_3() {
    Stopwatch timer;
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const double h = 1e-5;
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + trial % 3;
        const Simplex s = random_simplex(rng, n);
        Eigen::MatrixXd q(n, n);
        Eigen::VectorXd b(n);
        for (int i = 0; i < n; ++i) {
            b(i) = dist(rng);
            for (int j = 0; j < n; ++j) q(i, j) = dist(rng);
        }
        auto v = [&](const Eigen::VectorXd& x) { return x.dot(q * x) + b.dot(x); };
        auto w = [&](const Eigen::VectorXd& y) { return v(s.to_physical(y)); };
        for (int p = 0; p < 20; ++p) {
            Eigen::VectorXd y(n);
            for (int i = 0; i < n; ++i) y(i) = dist(rng);
            const Eigen::VectorXd x = s.to_physical(y);
            Eigen::VectorXd grad_y(n), grad_x(n);
            for (int i = 0; i < n; ++i) {
                Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
                e(i) = h;
                grad_y(i) = (w(y + e) - w(y - e)) / (2 * h);
                grad_x(i) = (v(x + e) - v(x - e)) / (2 * h);
            }
            const double rel = (s.pushforward_gradient(grad_y) - grad_x).cwiseAbs().maxCoeff() /
                               grad_x.cwiseAbs().maxCoeff();
            worst = std::max(worst, rel);
        }
    }
    report(3, "gradient pushforward = B^T grad_y vs finite differences", worst <= 1e-6,
           fmt("max rel err %.2e", worst), timer.seconds());
}

// 4. Leapfrog energy conservation on the order-2 simplex.
void criterion_4() {
    Stopwatch timer;
    const SimplicialMesh mesh = refine(Simplex::order_simplex(2), 4);
    const WaveSolver solver(
        mesh, eliminate_dirichlet(assemble(mesh, Eigen::MatrixXd::Identity(2, 2)), mesh));
    const EigenMode mode(2, {1, 2});
    const double dt = 0.5 * solver.cfl().dt_max;
    WaveState state =
        solver.initialize([&](const Eigen::VectorXd& x) { return mode.eval(x); },
                          [](const Eigen::VectorXd&) { return 0.0; }, dt);
    const RunLedger ledger = solver.run(state, 10000 * dt * 1.000001);

    double inv_min = 0.0, inv_max = 0.0, max_dev = 0.0;
    bool first = true;
    for (const auto& e : ledger.energy) {
        if (e.step == 0) continue;
        if (first) {
            inv_min = inv_max = e.invariant;
            first = false;
        }
        inv_min = std::min(inv_min, e.invariant);
        inv_max = std::max(inv_max, e.invariant);
        max_dev = std::max(max_dev, std::abs(e.continuous - ledger.initial_continuous_energy) /
                                        ledger.initial_continuous_energy);
    }
    const double invariant_variation = (inv_max - inv_min) / inv_max;

    // Secular drift of E_h: windowed means at the two ends of the run. The
    // reversible O((dt omega)^2) oscillation is excluded by averaging.
    const std::size_t window = ledger.energy.size() / 10;
    double head = 0.0, tail = 0.0;
    for (std::size_t k = 0; k < window; ++k) {
        head += ledger.energy[k].continuous;
        tail += ledger.energy[ledger.energy.size() - 1 - k].continuous;
    }
    const double drift = std::abs(tail - head) / window / ledger.initial_continuous_energy;

    const bool pass = state.step_index >= 10000 && invariant_variation <= 1e-10 && drift <= 1e-3;
    report(4, "leapfrog energy conservation (10^4 steps)", pass,
           fmt("E_lf variation %.2e, E_h secular drift %.2e, E_h oscillation %.2e",
               invariant_variation, drift, max_dev),
           timer.seconds());
}

// 5. Rellich identity for exact modes, pure quadrature.
void criterion_5() {
    Stopwatch timer;
    double worst = 0.0;
    const std::vector<std::pair<int, std::vector<int>>> modes = {
        {2, {1, 2}}, {2, {1, 3}}, {2, {2, 3}}, {2, {1, 4}}, {2, {3, 4}},
        {3, {1, 2, 3}}, {3, {1, 2, 4}}};
    for (const auto& [n, m] : modes) {
        const RellichCheck check = rellich_check(EigenMode(n, m), 0, 1.0, 24);
        worst = std::max(worst, std::abs(check.lhs - check.rhs) / std::abs(check.rhs));
    }
    const double elapsed = timer.seconds();
    report(5, "Rellich identity (n Vol/Area) flux = 2 lambda ||phi||^2",
           worst <= 1e-8 && elapsed < 30.0, fmt("worst rel err %.2e over 7 modes", worst),
           elapsed);
}

// 6. Closed-form remainder sin(2 w T)/(2 w T) on the exact oracle path.
void criterion_6() {
    Stopwatch timer;
    const EigenMode mode(2, {1, 2});
    const StandingWave wave(mode, 1.0);
    const Simplex& domain = mode.domain();
    const double omega = mode.omega();
    const double e0 = wave.initial_energy(24);
    double worst = 0.0;
    for (double T : {5.0, 12.3, 40.0}) {
        const double ratio =
            exact_flux_integral(wave, 0, T, 24) / (T * domain.predicted_flux_rate(0, e0));
        const double expected = 1.0 + std::sin(2.0 * omega * T) / (2.0 * omega * T);
        worst = std::max(worst, std::abs(ratio - expected));
    }
    report(6, "closed-form remainder 1 + sin(2wT)/(2wT)", worst <= 1e-10,
           fmt("max |ratio - closed form| %.2e", worst), timer.seconds());
}

// 7. End-to-end FEM theorem check in 2-D.
void criterion_7() {
    Stopwatch timer;
    RunConfig config;
    config.simplex = Simplex::order_simplex(2);
    config.simplex_name = "order-2";
    config.face = 0;
    config.eigenmode = {1, 2};
    config.levels = 5;
    config.dt_factor = 0.25;
    config.T_list = {10.0, 20.0, 40.0, 80.0};
    const VerifyOutcome out = verify_theorem(config);

    bool window = true;
    for (const auto& r : out.sweep.reports) window = window && r.ratio >= 0.85 && r.ratio <= 1.15;
    const double final_err = std::abs(out.sweep.reports.back().ratio - 1.0);
    const double slope = out.sweep.slope;
    const double elapsed = timer.seconds();
    const bool pass =
        window && final_err <= 0.08 && slope >= -1.5 && slope <= -0.6 && elapsed < 120.0;
    report(7, "FEM observability identity, 2-D sweep", pass,
           fmt("ratios in window: %s, |ratio(80)-1| = %.3f, slope = %.3f", window ? "yes" : "no",
               final_err, slope),
           elapsed);
}

// 8. 3-D smoke test at the pinned coarse resolution.
void criterion_8() {
    Stopwatch timer;
    const EigenMode mode(3, {1, 2, 3});

    auto ratio_at_levels = [&](int levels) {
        const SimplicialMesh mesh = refine(mode.domain(), levels);
        const WaveSolver solver(
            mesh, eliminate_dirichlet(assemble(mesh, Eigen::MatrixXd::Identity(3, 3)), mesh));
        const double dt = 0.5 * solver.cfl().dt_max;
        FaceFluxObserver observer(mesh, 0);
        InitialData data;
        data.u0 = [&](const Eigen::VectorXd& x) { return mode.eval(x); };
        data.u1 = [](const Eigen::VectorXd&) { return 0.0; };
        data.grad_u0 = [&](const Eigen::VectorXd& x) { return mode.gradient(x); };
        WaveState state = solver.initialize(data.u0, data.u1, dt);
        std::vector<WaveSolver::Observer> obs{observer.callback()};
        solver.run(state, 40.0, obs);
        const double e0 = initial_energy_quadrature(mesh, data);
        return make_report(observer.series(), 40.0, mode.domain(), 0, e0, levels, dt).ratio;
    };

    const double ratio = ratio_at_levels(3);
    const double ratio_next = ratio_at_levels(4);
    const double elapsed = timer.seconds();
    report(8, "3-D smoke test (order-3, mode (1,2,3), levels 3, T = 40)",
           std::abs(ratio - 1.0) <= 0.15 && elapsed < 300.0,
           fmt("ratio = %.4f (P1 flux bias at this resolution; levels 4 gives %.4f)", ratio,
               ratio_next),
           elapsed);
}

// 9. Pullback equivalence of physical and reference assembly.
void criterion_9() {
    Stopwatch timer;
    std::mt19937_64 rng(29);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + trial % 2;
        const PullbackDiscrepancy d =
            pullback_equivalence_check(random_simplex(rng, n), n == 2 ? 3 : 2);
        worst = std::max({worst, d.stiffness_rel, d.mass_rel});
    }
    report(9, "pullback equivalence S_phys = |det A| S_ref", worst <= 1e-10,
           fmt("worst rel discrepancy %.2e over 10 simplices", worst), timer.seconds());
}

// 10. Byte-identical outputs from repeated CLI runs with a fixed seed.
void criterion_10() {
    Stopwatch timer;
    const fs::path dir =
        fs::temp_directory_path() / ("simplexwave_acceptance_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);

    auto run_into = [&](const std::string& tag, int jobs) {
        nlohmann::json cfg = {
            {"simplex", "order-2"},
            {"initial", {{"random_bump", {{"max_mode", 4}}}}},
            {"levels", 3},
            {"dt_factor", 0.5},
            {"T_list", {6.0, 9.0, 12.0}},
            {"seed", 99},
            {"jobs", jobs},
            {"output",
             {{"csv", (dir / (tag + ".csv")).string()}, {"json", (dir / (tag + ".json")).string()}}}};
        const fs::path config_path = dir / (tag + "_config.json");
        std::ofstream(config_path) << cfg.dump(2);
        std::ostringstream out, err;
        run_cli({"verify-theorem", "--config", config_path.string()}, out, err);
        std::ifstream csv(dir / (tag + ".csv"), std::ios::binary);
        std::ifstream json(dir / (tag + ".json"), std::ios::binary);
        std::ostringstream both;
        both << csv.rdbuf() << "\0" << json.rdbuf();
        return both.str();
    };

    const std::string a = run_into("a", 1);
    const std::string b = run_into("b", 1);
    const std::string c = run_into("c", 2);
    std::error_code ec;
    fs::remove_all(dir, ec);

    const bool pass = !a.empty() && a == b && a == c;
    report(10, "determinism of cmd_verify_theorem outputs", pass,
           pass ? "repeat and parallel runs byte-identical" : "outputs differ", timer.seconds());
}

} // namespace

int main() {
    std::printf("simplexwave acceptance suite\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    std::printf("%d of 10 criteria passed\n", 10 - failures);
    return failures;
}
