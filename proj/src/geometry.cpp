#include "simplexwave/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace simplexwave {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

} // namespace

Simplex Simplex::from_vertices(std::vector<Eigen::VectorXd> points) {
    if (points.empty()) throw DegenerateSimplex("simplex needs n+1 vertices");
    const int n = static_cast<int>(points[0].size());
    if (n < 1) throw DegenerateSimplex("simplex dimension must be positive");
    if (static_cast<int>(points.size()) != n + 1)
        throw DegenerateSimplex("expected " + std::to_string(n + 1) + " vertices in R^" +
                                std::to_string(n) + ", got " + std::to_string(points.size()));
    for (const auto& p : points)
        if (static_cast<int>(p.size()) != n) throw DimMismatch("vertex dimension mismatch");

    Simplex s;
    s.dim_ = n;
    s.vertices_ = std::move(points);
    s.A_.resize(n, n);
    for (int i = 0; i < n; ++i) s.A_.col(i) = s.vertices_[i + 1] - s.vertices_[0];

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(s.A_);
    s.det_ = lu.determinant();

    const double max_edge = s.max_edge_length();
    const double threshold = 1e-12 * std::pow(max_edge, n);
    if (!(std::abs(s.det_) > threshold))
        throw DegenerateSimplex("affinely dependent vertices: |det A| = " +
                                std::to_string(std::abs(s.det_)));

    s.B_ = lu.inverse();
    s.volume_ = std::abs(s.det_) / factorial(n);
    return s;
}

Simplex Simplex::standard(int dim) {
    std::vector<Eigen::VectorXd> pts(dim + 1, Eigen::VectorXd::Zero(dim));
    for (int i = 1; i <= dim; ++i) pts[i](i - 1) = 1.0;
    return from_vertices(std::move(pts));
}

Simplex Simplex::order_simplex(int dim, double side) {
    // Vertex k has k trailing coordinates equal to `side`; the faces are
    // {x_1 = 0}, {x_i = x_{i+1}} and {x_n = side}, the last one being face 0.
    std::vector<Eigen::VectorXd> pts(dim + 1, Eigen::VectorXd::Zero(dim));
    for (int k = 1; k <= dim; ++k)
        for (int i = dim - k; i < dim; ++i) pts[k](i) = side;
    return from_vertices(std::move(pts));
}

double Simplex::max_edge_length() const {
    double m = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        for (std::size_t j = i + 1; j < vertices_.size(); ++j)
            m = std::max(m, (vertices_[i] - vertices_[j]).norm());
    return m;
}

Eigen::VectorXd Simplex::centroid() const {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(dim_);
    for (const auto& v : vertices_) c += v;
    return c / static_cast<double>(vertices_.size());
}

Face Simplex::face(int j) const {
    if (j < 0 || j > dim_) throw Error("face index out of range");
    Face f;
    f.index = j;
    for (int k = 0; k <= dim_; ++k)
        if (k != j) f.vertex_indices.push_back(k);

    // Area from the Gram determinant of the face edge matrix.
    Eigen::MatrixXd edges(dim_, dim_ - 1);
    const Eigen::VectorXd& w0 = vertices_[f.vertex_indices[0]];
    for (int k = 1; k < dim_; ++k)
        edges.col(k - 1) = vertices_[f.vertex_indices[k]] - w0;
    const double gram = (edges.transpose() * edges).determinant();
    f.area = std::sqrt(std::max(gram, 0.0)) / factorial(dim_ - 1);

    // Outward normal. In reference coordinates face j (j >= 1) is {y_j = 0}
    // with y_j increasing inward, and face 0 is {sum y = 1} with 1 - sum y
    // increasing inward; the physical gradients are rows of B.
    Eigen::VectorXd normal(dim_);
    if (j == 0) {
        normal = B_.colwise().sum().transpose();
    } else {
        normal = -B_.row(j - 1).transpose();
    }
    f.unit_outward_normal = (normal / normal.norm()).array() + 0.0;
    return f;
}

Eigen::VectorXd Simplex::to_physical(const Eigen::VectorXd& y) const {
    return A_ * y + vertices_[0];
}

Eigen::VectorXd Simplex::to_reference(const Eigen::VectorXd& x) const {
    return B_ * (x - vertices_[0]);
}

Eigen::VectorXd Simplex::pushforward_gradient(const Eigen::VectorXd& grad_y) const {
    return B_.transpose() * grad_y;
}

double Simplex::predicted_flux_rate(int face_index, double initial_energy) const {
    return face(face_index).area / (dim_ * volume_) * initial_energy;
}

Simplex Simplex::anchored_for_face(int j) const {
    if (j < 0 || j > dim_) throw Error("face index out of range");
    if (j == 0) return *this;
    // Vertex j is the only vertex not on face j; it becomes the new anchor.
    std::vector<Eigen::VectorXd> pts;
    pts.push_back(vertices_[j]);
    for (int k = 0; k <= dim_; ++k)
        if (k != j) pts.push_back(vertices_[k]);
    return from_vertices(std::move(pts));
}

nlohmann::json Simplex::to_json() const {
    nlohmann::json j;
    j["dim"] = dim_;
    auto verts = nlohmann::json::array();
    for (const auto& v : vertices_) {
        auto row = nlohmann::json::array();
        for (int i = 0; i < dim_; ++i) row.push_back(v(i));
        verts.push_back(row);
    }
    j["vertices"] = verts;
    return j;
}

Simplex Simplex::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("vertices"))
        throw ConfigError("simplex JSON needs {\"dim\": n, \"vertices\": [...]}");
    const int n = j.at("dim").get<int>();
    std::vector<Eigen::VectorXd> pts;
    for (const auto& row : j.at("vertices")) {
        Eigen::VectorXd v(n);
        if (static_cast<int>(row.size()) != n) throw ConfigError("vertex length != dim");
        for (int i = 0; i < n; ++i) v(i) = row.at(i).get<double>();
        pts.push_back(v);
    }
    return from_vertices(std::move(pts));
}

MonteCarloEstimate monte_carlo_volume(const Simplex& s, std::int64_t samples, std::uint64_t seed) {
    if (samples < 1) throw Error("monte_carlo_volume: samples must be >= 1");
    const int n = s.dim();

    Eigen::VectorXd lo = s.vertices()[0];
    Eigen::VectorXd hi = s.vertices()[0];
    for (const auto& v : s.vertices()) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    double box_volume = 1.0;
    for (int i = 0; i < n; ++i) box_volume *= hi(i) - lo(i);

    std::mt19937_64 rng(seed);
    auto uniform01 = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };

    std::int64_t hits = 0;
    Eigen::VectorXd x(n);
    for (std::int64_t k = 0; k < samples; ++k) {
        for (int i = 0; i < n; ++i) x(i) = lo(i) + uniform01() * (hi(i) - lo(i));
        const Eigen::VectorXd y = s.to_reference(x);
        if ((y.array() >= 0.0).all() && y.sum() <= 1.0) ++hits;
    }

    MonteCarloEstimate est;
    est.hits = hits;
    est.samples = samples;
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    est.volume = box_volume * p;
    est.standard_error = box_volume * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
    return est;
}

} // namespace simplexwave
