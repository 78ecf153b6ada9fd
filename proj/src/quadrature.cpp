#include "simplexwave/quadrature.hpp"

#include "simplexwave/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <mutex>

namespace simplexwave {

namespace {

QuadratureRule compute_gauss_legendre(int n) {
    if (n < 1) throw Error("gauss_legendre: need at least one point");
    // Golub-Welsch on the Jacobi matrix for Legendre polynomials.
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        jacobi(k, k - 1) = b;
        jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
    QuadratureRule rule;
    rule.points.reserve(n);
    rule.weights.reserve(n);
    for (int i = 0; i < n; ++i) {
        // Shift nodes from [-1,1] to [0,1]; weights sum to 1.
        const double x = 0.5 * (es.eigenvalues()(i) + 1.0);
        const double w = es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
        rule.points.push_back(Eigen::VectorXd::Constant(1, x));
        rule.weights.push_back(w);
    }
    return rule;
}

} // namespace

QuadratureRule gauss_legendre(int n) {
    static std::mutex mutex;
    static std::map<int, QuadratureRule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

QuadratureRule duffy_simplex_rule(int dim, int points_per_axis) {
    if (dim < 1) throw Error("duffy_simplex_rule: dim must be positive");
    const QuadratureRule line = gauss_legendre(points_per_axis);
    const int g = static_cast<int>(line.size());

    QuadratureRule rule;
    std::vector<int> idx(dim, 0);
    Eigen::VectorXd s(dim);
    while (true) {
        double w = 1.0;
        double remaining = 1.0; // 1 - s_1 - ... - s_{k-1}
        for (int k = 0; k < dim; ++k) {
            const double t = line.points[idx[k]](0);
            s(k) = t * remaining;
            w *= line.weights[idx[k]] * remaining;
            remaining -= s(k);
        }
        rule.points.push_back(s);
        rule.weights.push_back(w);

        int k = dim - 1;
        while (k >= 0 && ++idx[k] == g) idx[k--] = 0;
        if (k < 0) break;
    }
    return rule;
}

double integrate_over_simplex(const std::vector<Eigen::VectorXd>& verts,
                              const QuadratureRule& rule,
                              const std::function<double(const Eigen::VectorXd&)>& f) {
    const int d = static_cast<int>(verts.size()) - 1;
    if (d < 1) throw Error("integrate_over_simplex: need at least 2 vertices");
    const int m = static_cast<int>(verts[0].size());
    Eigen::MatrixXd edges(m, d);
    for (int k = 0; k < d; ++k) edges.col(k) = verts[k + 1] - verts[0];
    // d-dimensional measure of the parameter image: sqrt(det(E^T E)) * reference measure.
    const double gram = (edges.transpose() * edges).determinant();
    const double scale = std::sqrt(std::max(gram, 0.0));

    double sum = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const Eigen::VectorXd x = verts[0] + edges * rule.points[i];
        sum += rule.weights[i] * f(x);
    }
    return scale * sum;
}

} // namespace simplexwave
