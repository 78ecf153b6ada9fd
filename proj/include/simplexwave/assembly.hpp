#pragma once

#include "simplexwave/mesh.hpp"

#include <Eigen/Dense>

#include <tuple>
#include <vector>

namespace simplexwave {

/// Sparse symmetric matrix storing the upper triangle (i <= j) in CSR-like
/// row-sorted order. Storage symmetry makes the bilinear form evaluation
/// exactly symmetric in its arguments.
class SymmetricSparseMatrix {
public:
    explicit SymmetricSparseMatrix(int dim = 0) : dim_(dim), row_start_(dim + 1, 0) {}

    /// Builds from (i, j, value) triplets; duplicates are summed, entries are
    /// folded into the upper triangle.
    static SymmetricSparseMatrix from_triplets(int dim,
                                               const std::vector<std::tuple<int, int, double>>& triplets);

    int rows() const { return dim_; }
    std::size_t stored_entries() const { return values_.size(); }

    void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
    Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;

    /// u^T A v, evaluated so that swapping u and v gives the bitwise-identical
    /// result.
    double bilinear(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;

    /// Row sums over the full (mirrored) matrix.
    Eigen::VectorXd row_sums() const;

    Eigen::MatrixXd to_dense() const;
    double max_abs() const;

    template <class F>
    void for_each_upper(F&& f) const {
        for (int i = 0; i < dim_; ++i)
            for (int k = row_start_[i]; k < row_start_[i + 1]; ++k) f(i, cols_[k], values_[k]);
    }

private:
    int dim_;
    std::vector<int> row_start_;
    std::vector<int> cols_;
    std::vector<double> values_;
};

struct AssembledSystem {
    SymmetricSparseMatrix mass;
    SymmetricSparseMatrix stiffness;
};

/// P1 mass and stiffness for the form integral of (grad phi_a)^T K (grad phi_b):
/// exact per-cell formulas, all vertices kept (no boundary elimination).
AssembledSystem assemble(const SimplicialMesh& mesh, const Eigen::MatrixXd& K);

struct DirichletSystem {
    SymmetricSparseMatrix mass;
    SymmetricSparseMatrix stiffness;
    int interior_count = 0;
};

/// Removes boundary rows/columns. Throws EmptyInterior when the mesh has no
/// interior vertex.
DirichletSystem eliminate_dirichlet(const AssembledSystem& sys, const SimplicialMesh& mesh);

struct PullbackDiscrepancy {
    double stiffness_abs = 0.0;
    double mass_abs = 0.0;
    double stiffness_rel = 0.0;
    double mass_rel = 0.0;
};

/// Assembles the Laplacian on the physical mesh of s and P = -div (B B^T) grad
/// on the matched reference mesh, compares entrywise after weighting the
/// reference integrals with the Jacobian factor |det A|.
PullbackDiscrepancy pullback_equivalence_check(const Simplex& s, int levels);

} // namespace simplexwave
