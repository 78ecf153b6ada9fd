#include "simplexwave/oracles.hpp"

#include <algorithm>
#include <cmath>

namespace simplexwave {

EigenMode::EigenMode(int dim, std::vector<int> modes)
    : dim_(dim), modes_(std::move(modes)), domain_(Simplex::order_simplex(dim)) {
    if (static_cast<int>(modes_.size()) != dim)
        throw DimMismatch("EigenMode: need one mode integer per dimension");
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        if (modes_[i] < 1) throw Error("EigenMode: mode integers must be positive");
        if (i > 0 && modes_[i] == modes_[i - 1])
            throw RepeatedMode("repeated mode integers give the zero function");
        if (i > 0 && modes_[i] < modes_[i - 1])
            throw Error("EigenMode: mode integers must be strictly increasing");
    }
    lambda_ = 0.0;
    for (int m : modes_) lambda_ += static_cast<double>(m) * m;
}

double EigenMode::eval(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd mat(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) mat(i, j) = std::sin(modes_[i] * x(j));
    return mat.determinant();
}

Eigen::VectorXd EigenMode::gradient(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd mat(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) mat(i, j) = std::sin(modes_[i] * x(j));

    Eigen::VectorXd grad(dim_);
    Eigen::MatrixXd work = mat;
    for (int j = 0; j < dim_; ++j) {
        for (int i = 0; i < dim_; ++i) work(i, j) = modes_[i] * std::cos(modes_[i] * x(j));
        grad(j) = work.determinant();
        work.col(j) = mat.col(j);
    }
    return grad;
}

double EigenMode::norm_squared(int quad_points) const {
    if (norm_squared_ >= 0.0) return norm_squared_;
    const QuadratureRule rule = duffy_simplex_rule(dim_, quad_points);
    norm_squared_ = integrate_over_simplex(
        domain_.vertices(), rule, [this](const Eigen::VectorXd& x) {
            const double phi = eval(x);
            return phi * phi;
        });
    return norm_squared_;
}

NormAndEnergy mode_norm_and_energy(const EigenMode& mode, int quad_points) {
    NormAndEnergy out;
    out.norm_squared = mode.norm_squared(quad_points);
    out.energy = mode.lambda() * out.norm_squared;
    return out;
}

double face_flux_integral(const EigenMode& mode, int face, int quad_points) {
    const Simplex& domain = mode.domain();
    const Face f = domain.face(face);
    std::vector<Eigen::VectorXd> facet_vertices;
    for (int v : f.vertex_indices) facet_vertices.push_back(domain.vertices()[v]);

    const Eigen::VectorXd normal = f.unit_outward_normal;
    if (mode.dim() == 1) {
        const double dn = normal.dot(mode.gradient(facet_vertices[0]));
        return dn * dn;
    }
    const QuadratureRule rule = duffy_simplex_rule(mode.dim() - 1, quad_points);
    return integrate_over_simplex(facet_vertices, rule, [&](const Eigen::VectorXd& x) {
        const double dn = normal.dot(mode.gradient(x));
        return dn * dn;
    });
}

double exact_flux_integral(const StandingWave& wave, int face, double T, int quad_points) {
    const double omega = wave.mode().omega();
    const double time_factor = 0.5 * T + std::sin(2.0 * omega * T) / (4.0 * omega);
    const double amp2 = wave.amplitude() * wave.amplitude();
    return amp2 * time_factor * face_flux_integral(wave.mode(), face, quad_points);
}

} // namespace simplexwave
