#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace simplexwave {

/// A quadrature rule: points and matching weights.
struct QuadratureRule {
    std::vector<Eigen::VectorXd> points;
    std::vector<double> weights;

    std::size_t size() const { return points.size(); }
};

/// Gauss-Legendre rule with `n` points on [0,1]. Nodes via Golub-Welsch.
QuadratureRule gauss_legendre(int n);

/// Tensor Gauss rule on the standard `dim`-simplex {s >= 0, sum(s) <= 1},
/// collapsed through the Duffy map: points_per_axis^dim points, weights
/// summing to 1/dim! (the simplex volume).
QuadratureRule duffy_simplex_rule(int dim, int points_per_axis);

/// Integral of f over the (possibly embedded) simplex spanned by `verts`
/// (d+1 points in R^m, d = rule dimension), with respect to d-dimensional
/// Hausdorff measure. rule must be a standard d-simplex rule.
double integrate_over_simplex(const std::vector<Eigen::VectorXd>& verts,
                              const QuadratureRule& rule,
                              const std::function<double(const Eigen::VectorXd&)>& f);

} // namespace simplexwave
