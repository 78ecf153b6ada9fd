#include "simplexwave/observability.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace simplexwave {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

} // namespace

void FluxSeries::accumulate(double t, double instantaneous_flux) {
    if (!samples_.empty() && t <= samples_.back().first)
        throw OutOfOrderSample("flux sample at t = " + std::to_string(t) +
                               " not after t = " + std::to_string(samples_.back().first));
    samples_.emplace_back(t, instantaneous_flux);
}

double FluxSeries::latest_time() const {
    return samples_.empty() ? 0.0 : samples_.back().first;
}

double FluxSeries::integral_to(double T) const {
    if (samples_.size() < 2) throw Error("FluxSeries: need at least two samples");
    if (T < samples_.front().first || T > samples_.back().first * (1.0 + 1e-12))
        throw Error("FluxSeries: horizon outside the sampled range");

    double integral = 0.0;
    for (std::size_t k = 1; k < samples_.size(); ++k) {
        const auto& [t0, f0] = samples_[k - 1];
        const auto& [t1, f1] = samples_[k];
        if (T >= t1) {
            integral += 0.5 * (t1 - t0) * (f0 + f1);
            if (T == t1) break;
        } else {
            const double w = (T - t0) / (t1 - t0);
            const double fT = f0 + w * (f1 - f0);
            integral += 0.5 * (T - t0) * (f0 + fT);
            break;
        }
    }
    return integral;
}

double facet_flux(const SimplicialMesh& mesh, const Eigen::VectorXd& full_u, int facet_index) {
    if (facet_index < 0 || facet_index >= static_cast<int>(mesh.boundary_facets().size()))
        throw NonBoundaryFacet("facet index " + std::to_string(facet_index) +
                               " is not a boundary facet");
    const BoundaryFacet& facet = mesh.boundary_facets()[facet_index];
    const int n = mesh.dim();

    // Facet area from the Gram determinant.
    Eigen::MatrixXd edges(n, n - 1);
    const Eigen::VectorXd& w0 = mesh.vertices()[facet.vertex_indices[0]];
    for (int k = 1; k < n; ++k)
        edges.col(k - 1) = mesh.vertices()[facet.vertex_indices[k]] - w0;
    const double gram = (edges.transpose() * edges).determinant();
    const double area = std::sqrt(std::max(gram, 0.0)) / factorial(n - 1);

    // P1 gradient on the adjacent cell.
    const auto& cell = mesh.cells()[facet.adjacent_cell];
    Eigen::MatrixXd cell_edges(n, n);
    for (int k = 0; k < n; ++k)
        cell_edges.col(k) = mesh.vertices()[cell[k + 1]] - mesh.vertices()[cell[0]];
    const Eigen::MatrixXd inv = cell_edges.inverse();
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
    for (int a = 1; a <= n; ++a) {
        const Eigen::VectorXd g = inv.row(a - 1).transpose();
        grad += g * (full_u(cell[a]) - full_u(cell[0]));
    }

    const Eigen::VectorXd normal = mesh.domain().face(facet.parent_face).unit_outward_normal;
    const double dn = normal.dot(grad);
    return area * dn * dn;
}

double face_instantaneous_flux(const SimplicialMesh& mesh, const Eigen::VectorXd& full_u, int face) {
    double sum = 0.0;
    for (std::size_t f = 0; f < mesh.boundary_facets().size(); ++f)
        if (mesh.boundary_facets()[f].parent_face == face)
            sum += facet_flux(mesh, full_u, static_cast<int>(f));
    return sum;
}

FaceFluxObserver::FaceFluxObserver(const SimplicialMesh& mesh, int face)
    : mesh_(&mesh), series_(face) {
    const int n = mesh.dim();
    const Eigen::VectorXd normal = mesh.domain().face(face).unit_outward_normal;

    for (const auto& facet : mesh.boundary_facets()) {
        if (facet.parent_face != face) continue;
        FacetData data;
        data.cell = facet.adjacent_cell;
        data.cell_vertices = mesh.cells()[facet.adjacent_cell];

        Eigen::MatrixXd edges(n, n - 1);
        const Eigen::VectorXd& w0 = mesh.vertices()[facet.vertex_indices[0]];
        for (int k = 1; k < n; ++k)
            edges.col(k - 1) = mesh.vertices()[facet.vertex_indices[k]] - w0;
        const double gram = (edges.transpose() * edges).determinant();
        data.area = std::sqrt(std::max(gram, 0.0)) / factorial(n - 1);

        Eigen::MatrixXd cell_edges(n, n);
        for (int k = 0; k < n; ++k)
            cell_edges.col(k) =
                mesh.vertices()[data.cell_vertices[k + 1]] - mesh.vertices()[data.cell_vertices[0]];
        const Eigen::MatrixXd inv = cell_edges.inverse();
        data.normal_gradients.resize(n + 1);
        data.normal_gradients(0) = 0.0;
        for (int a = 1; a <= n; ++a) {
            data.normal_gradients(a) = normal.dot(inv.row(a - 1).transpose());
            data.normal_gradients(0) -= data.normal_gradients(a);
        }
        facets_.push_back(std::move(data));
    }
}

WaveSolver::Observer FaceFluxObserver::callback() {
    return [this](int /*step*/, double t, const Eigen::VectorXd& u,
                  const Eigen::VectorXd& /*v*/) {
        const Eigen::VectorXd full = mesh_->expand(u);
        double flux = 0.0;
        for (const auto& facet : facets_) {
            double dn = 0.0;
            for (int a = 0; a <= mesh_->dim(); ++a)
                dn += facet.normal_gradients(a) * full(facet.cell_vertices[a]);
            flux += facet.area * dn * dn;
        }
        series_.accumulate(t, flux);
    };
}

double initial_energy_quadrature(const SimplicialMesh& mesh, const InitialData& data,
                                 int quad_points) {
    const QuadratureRule rule = duffy_simplex_rule(mesh.dim(), quad_points);
    double energy = 0.0;
    std::vector<Eigen::VectorXd> cell_vertices(mesh.dim() + 1);
    for (const auto& cell : mesh.cells()) {
        for (int k = 0; k <= mesh.dim(); ++k) cell_vertices[k] = mesh.vertices()[cell[k]];
        energy += integrate_over_simplex(cell_vertices, rule, [&](const Eigen::VectorXd& x) {
            const double ut = data.u1(x);
            return ut * ut + data.grad_u0(x).squaredNorm();
        });
    }
    return energy;
}

ObservabilityReport make_report(const FluxSeries& series, double T, const Simplex& simplex,
                                int face, double initial_energy, int levels, double dt) {
    if (!(initial_energy > 0.0)) throw ZeroEnergy("initial energy is zero; ratio undefined");
    ObservabilityReport r;
    r.face = face;
    r.dim = simplex.dim();
    r.levels = levels;
    r.dt = dt;
    r.horizon = T;
    r.initial_energy = initial_energy;
    r.measured = series.integral_to(T);
    r.predicted = T * simplex.predicted_flux_rate(face, initial_energy);
    r.ratio = r.measured / r.predicted;
    r.remainder = r.ratio - 1.0;
    return r;
}

double fit_remainder_slope(const std::vector<ObservabilityReport>& reports) {
    if (reports.size() < 3) throw Error("fit_remainder_slope: need at least three reports");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const std::size_t n = reports.size() - 1;
    for (std::size_t i = 0; i < n; ++i) {
        const double diff = reports[i].remainder - reports[i + 1].remainder;
        const double x = std::log(reports[i].horizon);
        const double y = std::log(std::max(std::abs(diff), 1e-16));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    return (n * sxy - sx * sy) / denom;
}

SweepResult remainder_sweep(const WaveSolver& solver, const InitialData& data, int face,
                            double dt, const std::vector<double>& T_list, int jobs) {
    if (T_list.size() < 3) throw ConfigError("remainder sweep needs at least 3 horizons");
    for (std::size_t i = 1; i < T_list.size(); ++i)
        if (!(T_list[i] > T_list[i - 1]))
            throw ConfigError("remainder sweep horizons must be strictly increasing");

    const double e0 = initial_energy_quadrature(solver.mesh(), data);

    auto run_one = [&](double T) {
        FaceFluxObserver observer(solver.mesh(), face);
        WaveState state = solver.initialize(data.u0, data.u1, dt);
        std::vector<WaveSolver::Observer> obs{observer.callback()};
        solver.run(state, T, obs);
        return make_report(observer.series(), T, solver.mesh().domain(), face, e0,
                           solver.mesh().refinement_levels(), dt);
    };

    SweepResult result;
    result.reports.resize(T_list.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < T_list.size(); ++i) result.reports[i] = run_one(T_list[i]);
    } else {
        std::vector<std::future<ObservabilityReport>> futures;
        for (double T : T_list)
            futures.push_back(std::async(std::launch::async, run_one, T));
        for (std::size_t i = 0; i < futures.size(); ++i) result.reports[i] = futures[i].get();
    }
    result.slope = fit_remainder_slope(result.reports);
    return result;
}

RellichCheck rellich_check(const EigenMode& mode, int face, double scale, int quad_points) {
    const int n = mode.dim();
    const Simplex& base = mode.domain();

    // Dilated domain: x -> scale * x, phi_s(x) = phi(x / scale),
    // lambda_s = lambda / scale^2.
    std::vector<Eigen::VectorXd> scaled_vertices;
    for (const auto& v : base.vertices()) scaled_vertices.push_back(scale * v);
    const Simplex domain = Simplex::from_vertices(scaled_vertices);
    const double lambda = mode.lambda() / (scale * scale);

    const Face f = domain.face(face);
    std::vector<Eigen::VectorXd> facet_vertices;
    for (int v : f.vertex_indices) facet_vertices.push_back(domain.vertices()[v]);

    RellichCheck check;
    if (n == 1) {
        const Eigen::VectorXd g = mode.gradient(facet_vertices[0] / scale) / scale;
        check.lhs = n * domain.volume() / f.area * std::pow(f.unit_outward_normal.dot(g), 2);
    } else {
        const QuadratureRule face_rule = duffy_simplex_rule(n - 1, quad_points);
        const double flux = integrate_over_simplex(
            facet_vertices, face_rule, [&](const Eigen::VectorXd& x) {
                const Eigen::VectorXd g = mode.gradient(x / scale) / scale;
                const double dn = f.unit_outward_normal.dot(g);
                return dn * dn;
            });
        check.lhs = n * domain.volume() / f.area * flux;
    }

    const QuadratureRule volume_rule = duffy_simplex_rule(n, quad_points);
    const double norm2 = integrate_over_simplex(
        domain.vertices(), volume_rule, [&](const Eigen::VectorXd& x) {
            const double phi = mode.eval(x / scale);
            return phi * phi;
        });
    check.rhs = 2.0 * lambda * norm2;
    return check;
}

} // namespace simplexwave
