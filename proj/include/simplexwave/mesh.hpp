#pragma once

#include "simplexwave/geometry.hpp"

#include <json.hpp>

#include <vector>

namespace simplexwave {

/// Boundary facet of a refined mesh: the n vertices spanning it (sorted), the
/// parent face of the unrefined simplex it lies on, and the one cell next to it.
struct BoundaryFacet {
    std::vector<int> vertex_indices;
    int parent_face = -1;
    int adjacent_cell = -1;
};

/// Conforming simplicial decomposition of one simplex, produced by Freudenthal
/// (Kuhn) subdivision of the reference simplex and mapped through x = A y + v0.
class SimplicialMesh {
public:
    const Simplex& domain() const { return domain_; }
    int dim() const { return domain_.dim(); }
    int refinement_levels() const { return levels_; }

    const std::vector<Eigen::VectorXd>& vertices() const { return vertices_; }
    /// Reference (standard simplex) coordinates of each vertex.
    const std::vector<Eigen::VectorXd>& reference_vertices() const { return reference_vertices_; }
    const std::vector<std::vector<int>>& cells() const { return cells_; }
    const std::vector<BoundaryFacet>& boundary_facets() const { return boundary_facets_; }

    /// Vertex -> interior equation index, or -1 on the boundary.
    const std::vector<int>& interior_dofs() const { return interior_dofs_; }
    /// Equation index -> vertex.
    const std::vector<int>& interior_vertices() const { return interior_vertices_; }
    int interior_count() const { return static_cast<int>(interior_vertices_.size()); }

    double cell_volume(int cell) const;

    /// Expands an interior-dof vector to all vertices (zeros on the boundary).
    Eigen::VectorXd expand(const Eigen::VectorXd& interior_values) const;

    nlohmann::json to_json() const;

    friend SimplicialMesh refine(const Simplex& s, int levels);

private:
    Simplex domain_ = Simplex::standard(1);
    int levels_ = 0;
    std::vector<Eigen::VectorXd> vertices_;
    std::vector<Eigen::VectorXd> reference_vertices_;
    std::vector<std::vector<int>> cells_;
    std::vector<BoundaryFacet> boundary_facets_;
    std::vector<int> interior_dofs_;
    std::vector<int> interior_vertices_;
};

/// Freudenthal/Kuhn subdivision applied `levels` times: 2^(levels*dim) cells,
/// conforming, with boundary facets tagged by the parent face they lie on.
SimplicialMesh refine(const Simplex& s, int levels);

} // namespace simplexwave
