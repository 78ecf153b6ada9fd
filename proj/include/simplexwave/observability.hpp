#pragma once

#include "simplexwave/mesh.hpp"
#include "simplexwave/oracles.hpp"
#include "simplexwave/solver.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace simplexwave {

/// Time series of the instantaneous flux through one face, with trapezoidal
/// integration in time.
class FluxSeries {
public:
    explicit FluxSeries(int face_index) : face_(face_index) {}

    int face() const { return face_; }
    const std::vector<std::pair<double, double>>& samples() const { return samples_; }

    /// Appends a sample; throws OutOfOrderSample when t does not increase.
    void accumulate(double t, double instantaneous_flux);

    /// Trapezoidal integral of the sampled flux from the first sample to T,
    /// with the last partial interval interpolated linearly. Exact for
    /// piecewise-linear-in-time integrands.
    double integral_to(double T) const;

    double latest_time() const;

private:
    int face_;
    std::vector<std::pair<double, double>> samples_;
};

/// area * (nu . grad u)^2 for one tagged boundary facet; grad u is the P1 cell
/// gradient of the unique adjacent cell. full_u holds nodal values for all
/// mesh vertices. Throws NonBoundaryFacet for an invalid facet index.
double facet_flux(const SimplicialMesh& mesh, const Eigen::VectorXd& full_u, int facet_index);

/// Instantaneous flux through a whole parent face: sum of facet_flux over the
/// facets tagged with that face.
double face_instantaneous_flux(const SimplicialMesh& mesh, const Eigen::VectorXd& full_u, int face);

/// Solver observer that accumulates the flux series of one face.
class FaceFluxObserver {
public:
    FaceFluxObserver(const SimplicialMesh& mesh, int face);

    WaveSolver::Observer callback();
    const FluxSeries& series() const { return series_; }

private:
    struct FacetData {
        int cell = -1;
        double area = 0.0;
        Eigen::VectorXd normal_gradients; // nu . grad(hat_a) per cell vertex
        std::vector<int> cell_vertices;
    };

    const SimplicialMesh* mesh_;
    std::vector<FacetData> facets_;
    FluxSeries series_;
};

/// Smooth initial data with an analytic gradient (for the energy quadrature).
struct InitialData {
    std::function<double(const Eigen::VectorXd&)> u0;
    std::function<double(const Eigen::VectorXd&)> u1;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad_u0;
};

/// Continuous initial energy int |u1|^2 + |grad u0|^2 dV by per-cell Gauss
/// quadrature over the mesh.
double initial_energy_quadrature(const SimplicialMesh& mesh, const InitialData& data,
                                 int quad_points = 3);

struct ObservabilityReport {
    int face = 0;
    int dim = 0;
    int levels = 0;
    double dt = 0.0;
    double horizon = 0.0;   // T
    double measured = 0.0;  // F(T)
    double predicted = 0.0; // T Area(F)/(n Vol) E(0)
    double ratio = 0.0;
    double remainder = 0.0; // ratio - 1
    double initial_energy = 0.0;
};

/// Builds the report from a completed run. Throws ZeroEnergy when E0 = 0.
ObservabilityReport make_report(const FluxSeries& series, double T, const Simplex& simplex,
                                int face, double initial_energy, int levels, double dt);

struct SweepResult {
    std::vector<ObservabilityReport> reports;
    double slope = 0.0; // least-squares slope of log |remainder| vs log T
};

/// Least-squares slope of log|remainder difference| against log T over
/// consecutive horizons. Differencing cancels the T-independent spatial bias
/// of a fixed mesh, leaving the decay of the time remainder.
double fit_remainder_slope(const std::vector<ObservabilityReport>& reports);

/// One FEM run per horizon (shared mesh and dt), reports plus fitted slope.
/// T_list must hold at least 3 increasing horizons.
SweepResult remainder_sweep(const WaveSolver& solver, const InitialData& data, int face,
                            double dt, const std::vector<double>& T_list, int jobs = 1);

struct RellichCheck {
    double lhs = 0.0; // (n Vol / Area) int_F |d_nu phi|^2 dS
    double rhs = 0.0; // 2 lambda ||phi||^2
};

/// Time-averaged observability identity for standing waves, both sides by
/// quadrature. `scale` dilates the order-simplex domain (the mode transforms
/// with it).
RellichCheck rellich_check(const EigenMode& mode, int face, double scale = 1.0,
                           int quad_points = 20);

} // namespace simplexwave
