#pragma once

#include "simplexwave/errors.hpp"

#include <Eigen/Dense>

#include <json.hpp>

#include <cstdint>
#include <vector>

namespace simplexwave {

/// One face of a simplex. Face j is spanned by every vertex except vertex j;
/// face 0 is the "slanted" face opposite the anchor corner.
struct Face {
    int index = -1;
    std::vector<int> vertex_indices;
    double area = 0.0;
    Eigen::VectorXd unit_outward_normal;
};

/// A nondegenerate simplex in R^n held together with the affine
/// correspondence x = A y + v0 to the standard simplex: columns of A are the
/// edge vectors from the anchor vertex (vertex 0) and B = A^{-1}.
class Simplex {
public:
    /// Builds a simplex from its n+1 vertices; points[0] becomes the anchor.
    /// Throws DegenerateSimplex when the vertices are affinely dependent.
    static Simplex from_vertices(std::vector<Eigen::VectorXd> points);

    /// The standard simplex spanned by the origin and the canonical basis.
    static Simplex standard(int dim);

    /// The order-simplex {0 <= x_1 <= x_2 <= ... <= x_n <= side}, anchored at
    /// the origin. Its Dirichlet eigenmodes have closed form (see oracles).
    static Simplex order_simplex(int dim, double side = 3.14159265358979323846);

    int dim() const { return dim_; }
    const std::vector<Eigen::VectorXd>& vertices() const { return vertices_; }
    const Eigen::MatrixXd& spanning_matrix() const { return A_; }
    const Eigen::MatrixXd& inverse_matrix() const { return B_; }
    double volume() const { return volume_; }
    double det_A() const { return det_; }

    /// Face metrics: area via the Gram determinant of the face edge matrix,
    /// outward unit normal from the rows of B.
    Face face(int j) const;

    Eigen::VectorXd to_physical(const Eigen::VectorXd& y) const;
    Eigen::VectorXd to_reference(const Eigen::VectorXd& x) const;

    /// Gradient transform of the change of variables: given grad_y of v(Ay),
    /// returns grad_x v = B^T grad_y.
    Eigen::VectorXd pushforward_gradient(const Eigen::VectorXd& grad_y) const;

    /// Asymptotic per-unit-time flux through face j for initial energy E0:
    /// Area(F_j) / (n Vol) * E0.
    double predicted_flux_rate(int face_index, double initial_energy) const;

    /// Relabels vertices so that face j becomes face 0 (vertex j becomes the
    /// anchor). The point set is unchanged.
    Simplex anchored_for_face(int j) const;

    double max_edge_length() const;
    Eigen::VectorXd centroid() const;

    nlohmann::json to_json() const;
    static Simplex from_json(const nlohmann::json& j);

private:
    Simplex() = default;

    int dim_ = 0;
    std::vector<Eigen::VectorXd> vertices_;
    Eigen::MatrixXd A_;
    Eigen::MatrixXd B_;
    double det_ = 0.0;
    double volume_ = 0.0;
};

struct MonteCarloEstimate {
    double volume = 0.0;
    double standard_error = 0.0;
    std::int64_t hits = 0;
    std::int64_t samples = 0;
};

/// Rejection sampling of the vertex bounding box. Deterministic given `seed`.
MonteCarloEstimate monte_carlo_volume(const Simplex& s, std::int64_t samples, std::uint64_t seed);

} // namespace simplexwave
