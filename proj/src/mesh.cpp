#include "simplexwave/mesh.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace simplexwave {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

bool sorted_nonincreasing(const std::vector<int>& x) {
    for (std::size_t i = 1; i < x.size(); ++i)
        if (x[i - 1] < x[i]) return false;
    return true;
}

} // namespace

double SimplicialMesh::cell_volume(int cell) const {
    const auto& c = cells_[cell];
    const int n = dim();
    Eigen::MatrixXd edges(n, n);
    for (int k = 0; k < n; ++k) edges.col(k) = vertices_[c[k + 1]] - vertices_[c[0]];
    return std::abs(edges.determinant()) / factorial(n);
}

Eigen::VectorXd SimplicialMesh::expand(const Eigen::VectorXd& interior_values) const {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(vertices_.size());
    for (std::size_t v = 0; v < vertices_.size(); ++v)
        if (interior_dofs_[v] >= 0) full(v) = interior_values(interior_dofs_[v]);
    return full;
}

nlohmann::json SimplicialMesh::to_json() const {
    nlohmann::json j;
    auto verts = nlohmann::json::array();
    for (const auto& v : vertices_) {
        auto row = nlohmann::json::array();
        for (int i = 0; i < dim(); ++i) row.push_back(v(i));
        verts.push_back(row);
    }
    j["vertices"] = verts;
    j["cells"] = cells_;
    auto facets = nlohmann::json::array();
    for (const auto& f : boundary_facets_)
        facets.push_back({{"verts", f.vertex_indices}, {"face", f.parent_face}});
    j["facets"] = facets;
    return j;
}

SimplicialMesh refine(const Simplex& s, int levels) {
    if (levels < 0) throw Error("refine: levels must be >= 0");
    const int n = s.dim();
    const int N = 1 << levels;

    SimplicialMesh mesh;
    mesh.domain_ = s;
    mesh.levels_ = levels;

    // The refinement is built on the Kuhn simplex {N >= x_1 >= ... >= x_n >= 0}
    // at integer resolution and mapped to standard-simplex lattice coordinates
    // by y_k = x_k - x_{k+1} (y_k >= 0, sum y = x_1 <= N). The Kuhn cells of
    // the integer lattice that lie inside the sorted region triangulate it
    // conformingly.
    std::map<std::vector<int>, int> vertex_index; // key: y lattice coords
    std::vector<std::vector<int>> lattice;

    auto to_lattice = [n](const std::vector<int>& x) {
        std::vector<int> y(n);
        for (int k = 0; k < n; ++k) y[k] = x[k] - (k + 1 < n ? x[k + 1] : 0);
        return y;
    };

    auto vertex_id = [&](const std::vector<int>& y) {
        auto it = vertex_index.find(y);
        if (it != vertex_index.end()) return it->second;
        const int id = static_cast<int>(lattice.size());
        vertex_index.emplace(y, id);
        lattice.push_back(y);
        return id;
    };

    std::vector<int> base(n, 0);
    std::vector<int> perm(n);
    std::vector<std::vector<int>> chain(n + 1, std::vector<int>(n));
    while (true) {
        std::iota(perm.begin(), perm.end(), 0);
        do {
            chain[0] = base;
            bool inside = sorted_nonincreasing(base) && base[0] <= N - 1;
            for (int k = 1; k <= n && inside; ++k) {
                chain[k] = chain[k - 1];
                chain[k][perm[k - 1]] += 1;
                inside = sorted_nonincreasing(chain[k]) && chain[k][0] <= N;
            }
            if (inside) {
                std::vector<int> cell(n + 1);
                for (int k = 0; k <= n; ++k) cell[k] = vertex_id(to_lattice(chain[k]));
                mesh.cells_.push_back(std::move(cell));
            }
        } while (std::next_permutation(perm.begin(), perm.end()));

        int i = n - 1;
        while (i >= 0 && ++base[i] == N) base[i--] = 0;
        if (i < 0) break;
    }

    // Vertex coordinates.
    mesh.reference_vertices_.reserve(lattice.size());
    mesh.vertices_.reserve(lattice.size());
    for (const auto& y : lattice) {
        Eigen::VectorXd ref(n);
        for (int k = 0; k < n; ++k) ref(k) = static_cast<double>(y[k]) / N;
        mesh.reference_vertices_.push_back(ref);
        mesh.vertices_.push_back(s.to_physical(ref));
    }

    // Positive orientation in physical coordinates.
    for (auto& cell : mesh.cells_) {
        Eigen::MatrixXd edges(n, n);
        for (int k = 0; k < n; ++k) edges.col(k) = mesh.vertices_[cell[k + 1]] - mesh.vertices_[cell[0]];
        if (edges.determinant() < 0) std::swap(cell[n - 1], cell[n]);
    }

    // Boundary facets: sorted n-subsets of cell vertices seen exactly once.
    std::map<std::vector<int>, std::pair<int, int>> facet_count; // facet -> (count, cell)
    for (std::size_t c = 0; c < mesh.cells_.size(); ++c) {
        const auto& cell = mesh.cells_[c];
        for (int omit = 0; omit <= n; ++omit) {
            std::vector<int> facet;
            facet.reserve(n);
            for (int k = 0; k <= n; ++k)
                if (k != omit) facet.push_back(cell[k]);
            std::sort(facet.begin(), facet.end());
            auto [it, inserted] = facet_count.emplace(std::move(facet), std::make_pair(1, static_cast<int>(c)));
            if (!inserted) it->second.first += 1;
        }
    }

    for (const auto& [facet, info] : facet_count) {
        if (info.first != 1) continue;
        BoundaryFacet bf;
        bf.vertex_indices = facet;
        bf.adjacent_cell = info.second;
        // Tag by exact lattice membership: face j >= 1 is {y_j = 0},
        // face 0 is {sum y = N}.
        for (int j = 1; j <= n && bf.parent_face < 0; ++j) {
            bool on = true;
            for (int v : facet) on = on && lattice[v][j - 1] == 0;
            if (on) bf.parent_face = j;
        }
        if (bf.parent_face < 0) {
            bool on = true;
            for (int v : facet)
                on = on && std::accumulate(lattice[v].begin(), lattice[v].end(), 0) == N;
            if (on) bf.parent_face = 0;
        }
        if (bf.parent_face < 0) throw Error("refine: boundary facet not on any parent face");
        mesh.boundary_facets_.push_back(std::move(bf));
    }

    // Interior dof numbering: vertices strictly inside the simplex.
    mesh.interior_dofs_.assign(lattice.size(), -1);
    for (std::size_t v = 0; v < lattice.size(); ++v) {
        const int sum = std::accumulate(lattice[v].begin(), lattice[v].end(), 0);
        const bool interior =
            sum < N && std::all_of(lattice[v].begin(), lattice[v].end(), [](int k) { return k > 0; });
        if (interior) {
            mesh.interior_dofs_[v] = static_cast<int>(mesh.interior_vertices_.size());
            mesh.interior_vertices_.push_back(static_cast<int>(v));
        }
    }

    return mesh;
}

} // namespace simplexwave
