#include "simplexwave/assembly.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>

namespace simplexwave {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

} // namespace

SymmetricSparseMatrix SymmetricSparseMatrix::from_triplets(
    int dim, const std::vector<std::tuple<int, int, double>>& triplets) {
    std::vector<std::map<int, double>> rows(dim);
    for (const auto& [i, j, v] : triplets) {
        const int r = std::min(i, j);
        const int c = std::max(i, j);
        rows[r][c] += v;
    }
    SymmetricSparseMatrix m(dim);
    for (int i = 0; i < dim; ++i) {
        m.row_start_[i] = static_cast<int>(m.values_.size());
        for (const auto& [c, v] : rows[i]) {
            m.cols_.push_back(c);
            m.values_.push_back(v);
        }
    }
    m.row_start_[dim] = static_cast<int>(m.values_.size());
    return m;
}

void SymmetricSparseMatrix::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    y.setZero(dim_);
    for (int i = 0; i < dim_; ++i) {
        for (int k = row_start_[i]; k < row_start_[i + 1]; ++k) {
            const int j = cols_[k];
            const double v = values_[k];
            y(i) += v * x(j);
            if (j != i) y(j) += v * x(i);
        }
    }
}

Eigen::VectorXd SymmetricSparseMatrix::operator*(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y;
    apply(x, y);
    return y;
}

double SymmetricSparseMatrix::bilinear(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
    double sum = 0.0;
    for (int i = 0; i < dim_; ++i) {
        for (int k = row_start_[i]; k < row_start_[i + 1]; ++k) {
            const int j = cols_[k];
            const double a = values_[k];
            sum += (j == i) ? a * (u(i) * v(i)) : a * (u(i) * v(j) + u(j) * v(i));
        }
    }
    return sum;
}

Eigen::VectorXd SymmetricSparseMatrix::row_sums() const {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(dim_);
    for_each_upper([&](int i, int j, double v) {
        s(i) += v;
        if (j != i) s(j) += v;
    });
    return s;
}

Eigen::MatrixXd SymmetricSparseMatrix::to_dense() const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(dim_, dim_);
    for_each_upper([&](int i, int j, double v) {
        d(i, j) = v;
        if (j != i) d(j, i) = v;
    });
    return d;
}

double SymmetricSparseMatrix::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

AssembledSystem assemble(const SimplicialMesh& mesh, const Eigen::MatrixXd& K) {
    const int n = mesh.dim();
    if (K.rows() != n || K.cols() != n) throw DimMismatch("assemble: K dimension mismatch");
    if (!K.isApprox(K.transpose(), 1e-12)) throw NotSymmetric("assemble: K not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
    if (es.eigenvalues().minCoeff() <= 1e-10 * es.eigenvalues().cwiseAbs().maxCoeff())
        throw NotPositiveDefinite("assemble: K not positive definite");

    const int nv = static_cast<int>(mesh.vertices().size());
    std::vector<std::tuple<int, int, double>> mass_triplets;
    std::vector<std::tuple<int, int, double>> stiffness_triplets;

    const double mass_scale = 1.0 / ((n + 1) * (n + 2));
    Eigen::MatrixXd edges(n, n);
    Eigen::MatrixXd grads(n, n + 1); // columns: grad of hat function per local vertex

    for (std::size_t c = 0; c < mesh.cells().size(); ++c) {
        const auto& cell = mesh.cells()[c];
        for (int k = 0; k < n; ++k)
            edges.col(k) = mesh.vertices()[cell[k + 1]] - mesh.vertices()[cell[0]];
        const Eigen::MatrixXd inv = edges.inverse();
        const double vol = std::abs(edges.determinant()) / factorial(n);

        // Barycentric gradients: rows of edges^{-1} for vertices 1..n, and the
        // negated sum for vertex 0.
        grads.col(0).setZero();
        for (int a = 1; a <= n; ++a) {
            grads.col(a) = inv.row(a - 1).transpose();
            grads.col(0) -= grads.col(a);
        }

        for (int a = 0; a <= n; ++a) {
            for (int b = a; b <= n; ++b) {
                const double s = vol * grads.col(a).dot(K * grads.col(b));
                const double m = vol * mass_scale * (a == b ? 2.0 : 1.0);
                stiffness_triplets.emplace_back(cell[a], cell[b], s);
                mass_triplets.emplace_back(cell[a], cell[b], m);
            }
        }
    }

    AssembledSystem sys;
    sys.mass = SymmetricSparseMatrix::from_triplets(nv, mass_triplets);
    sys.stiffness = SymmetricSparseMatrix::from_triplets(nv, stiffness_triplets);
    return sys;
}

DirichletSystem eliminate_dirichlet(const AssembledSystem& sys, const SimplicialMesh& mesh) {
    const auto& dof = mesh.interior_dofs();
    const int m = mesh.interior_count();
    if (m == 0) throw EmptyInterior("no interior vertex; refine further");

    auto restrict_matrix = [&](const SymmetricSparseMatrix& a) {
        std::vector<std::tuple<int, int, double>> triplets;
        a.for_each_upper([&](int i, int j, double v) {
            if (dof[i] >= 0 && dof[j] >= 0) triplets.emplace_back(dof[i], dof[j], v);
        });
        return SymmetricSparseMatrix::from_triplets(m, triplets);
    };

    DirichletSystem out;
    out.mass = restrict_matrix(sys.mass);
    out.stiffness = restrict_matrix(sys.stiffness);
    out.interior_count = m;
    return out;
}

PullbackDiscrepancy pullback_equivalence_check(const Simplex& s, int levels) {
    const int n = s.dim();
    const SimplicialMesh physical = refine(s, levels);
    const SimplicialMesh reference = refine(Simplex::standard(n), levels);

    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd pullback_K = s.inverse_matrix() * s.inverse_matrix().transpose();

    const AssembledSystem sys_phys = assemble(physical, identity);
    const AssembledSystem sys_ref = assemble(reference, pullback_K);

    const double jac = std::abs(s.det_A());
    const Eigen::MatrixXd s_phys = sys_phys.stiffness.to_dense();
    const Eigen::MatrixXd s_ref = sys_ref.stiffness.to_dense();
    const Eigen::MatrixXd m_phys = sys_phys.mass.to_dense();
    const Eigen::MatrixXd m_ref = sys_ref.mass.to_dense();

    PullbackDiscrepancy d;
    d.stiffness_abs = (s_phys - jac * s_ref).cwiseAbs().maxCoeff();
    d.mass_abs = (m_phys - jac * m_ref).cwiseAbs().maxCoeff();
    d.stiffness_rel = d.stiffness_abs / s_phys.cwiseAbs().maxCoeff();
    d.mass_rel = d.mass_abs / m_phys.cwiseAbs().maxCoeff();
    return d;
}

} // namespace simplexwave
